// SPDX-License-Identifier: Apache-2.0
//
// srmcal: symmetric-reciprocal-match VNA calibration with match-model extraction
// Copyright (C) 2026 The srmcal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "doctest.h"

#include "srm/differential_evolution.hpp"
#include "srm/errors.hpp"

#include <cmath>

using namespace srm;

namespace
{

double sphere(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += (v - 0.3) * (v - 0.3);
    return s;
}

double rosenbrock(std::span<const double> x)
{
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

} // namespace

TEST_SUITE("differential_evolution")
{
    TEST_CASE("sphere converges to the minimum")
    {
        const std::vector<DEBounds> b(4, {-2.0, 2.0});
        DEConfig cfg(7);
        cfg.max_generations = 400;
        cfg.tolerance = 0.0;
        cfg.abs_tolerance = 1e-20;
        const DEResult r = differential_evolution(sphere, b, cfg);
        for (double v : r.best)
            CHECK(std::abs(v - 0.3) < 1e-8);
        CHECK(r.best_value < 1e-16);
        CHECK(r.converged);
    }

    TEST_CASE("rosenbrock valley")
    {
        const std::vector<DEBounds> b(2, {-3.0, 3.0});
        DEConfig cfg(3);
        cfg.max_generations = 1000;
        cfg.tolerance = 0.0;
        const DEResult r = differential_evolution(rosenbrock, b, cfg);
        CHECK(std::abs(r.best[0] - 1.0) < 1e-6);
        CHECK(std::abs(r.best[1] - 1.0) < 1e-6);
    }

    TEST_CASE("log-scaled coordinates span decades")
    {
        const std::vector<DEBounds> b{{1e-15, 1e-9, true}};
        DEConfig cfg(5);
        cfg.max_generations = 200;
        cfg.tolerance = 0.0;
        const DEResult r = differential_evolution(
            [](std::span<const double> x) { return std::pow(std::log10(x[0]) + 12.0, 2); }, b, cfg);
        CHECK(std::abs(r.best[0] / 1e-12 - 1.0) < 1e-6);
    }

    TEST_CASE("trace is monotone and points stay in bounds")
    {
        const std::vector<DEBounds> b{{-1.0, 0.5}, {2.0, 3.0}, {-5.0, -4.0}};
        DEConfig cfg(9);
        cfg.max_generations = 60;
        cfg.tolerance = 0.0;
        std::size_t calls = 0;
        const DEResult r = differential_evolution(sphere, b, cfg, [&](const DEGeneration &g) {
            CHECK(g.generation == calls);
            ++calls;
        });
        CHECK(calls == r.trace.size());
        CHECK(r.trace.size() == r.generations + 1);
        for (std::size_t i = 1; i < r.trace.size(); ++i)
            CHECK(r.trace[i] <= r.trace[i - 1]);
        for (const auto &x : r.best_trace)
            for (std::size_t d = 0; d < b.size(); ++d)
            {
                CHECK(x[d] >= b[d].lower);
                CHECK(x[d] <= b[d].upper);
            }
        CHECK(r.evaluations == cfg.population_for(3) * (r.generations + 1));
    }

    TEST_CASE("identical seeds give identical runs regardless of threads")
    {
        const std::vector<DEBounds> b(3, {-2.0, 2.0});
        DEConfig one(11);
        one.max_generations = 50;
        DEConfig four = one;
        four.threads = 4;
        const DEResult r1 = differential_evolution(rosenbrock, b, one);
        const DEResult r2 = differential_evolution(rosenbrock, b, four);
        CHECK(r1.best == r2.best);
        CHECK(r1.trace == r2.trace);
        DEConfig other = one;
        other.seed = 12;
        CHECK(differential_evolution(rosenbrock, b, other).trace != r1.trace);
    }

    TEST_CASE("configuration errors")
    {
        const std::vector<DEBounds> ok(2, {0.0, 1.0});
        auto kind = [&](DEConfig cfg, std::vector<DEBounds> b) {
            try
            {
                differential_evolution(sphere, b, cfg);
            }
            catch (const Error &e)
            {
                return e.kind();
            }
            return ErrorKind::Io;
        };
        DEConfig small(1);
        small.population = 4;
        CHECK(kind(small, ok) == ErrorKind::InvalidArgument);
        DEConfig cr(1);
        cr.crossover = 1.5;
        CHECK(kind(cr, ok) == ErrorKind::InvalidArgument);
        DEConfig mu(1);
        mu.mutation_min = 0.0;
        CHECK(kind(mu, ok) == ErrorKind::InvalidArgument);
        CHECK(kind(DEConfig(1), {{1.0, 1.0}}) == ErrorKind::InvalidArgument);
        CHECK(kind(DEConfig(1), {{-1.0, 1.0, true}}) == ErrorKind::InvalidArgument);
        CHECK(kind(DEConfig(1), {}) == ErrorKind::InvalidArgument);
    }

    TEST_CASE("uniform helpers")
    {
        std::mt19937_64 rng(1);
        for (int i = 0; i < 1000; ++i)
        {
            const double u = uniform01(rng);
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
            CHECK(uniform_below(rng, 7) < 7);
        }
    }
}
