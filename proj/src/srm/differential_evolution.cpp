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

#include "differential_evolution.hpp"

#include "errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace srm
{

void DEConfig::validate(std::size_t dimension) const
{
    if (dimension == 0)
        throw Error(ErrorKind::InvalidArgument, "differential evolution needs at least one dimension");
    if (population_for(dimension) < 8)
        throw Error(ErrorKind::InvalidArgument, "population must be at least 8");
    if (!(mutation_min > 0.0 && mutation_min <= mutation_max && mutation_max <= 2.0))
        throw Error(ErrorKind::InvalidArgument, "mutation range must satisfy 0 < min <= max <= 2");
    if (!(crossover >= 0.0 && crossover <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "crossover rate must lie in [0, 1]");
    if (!(tolerance >= 0.0) || !(abs_tolerance >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "tolerances must be non-negative");
}

std::size_t DEConfig::population_for(std::size_t dimension) const
{
    return population > 0 ? population : 15 * dimension;
}

namespace
{

double to_parameter(const DEBounds &b, double u)
{
    double x;
    if (b.log_scale)
        x = std::exp(std::log(b.lower) + u * (std::log(b.upper) - std::log(b.lower)));
    else
        x = b.lower + u * (b.upper - b.lower);
    return std::clamp(x, b.lower, b.upper);
}

} // namespace

DEResult differential_evolution(const DEObjective &objective, std::span<const DEBounds> bounds, const DEConfig &config,
                                const DECallback &on_generation)
{
    const std::size_t dim = bounds.size();
    config.validate(dim);
    for (const auto &b : bounds)
        if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower < b.upper) ||
            (b.log_scale && !(b.lower > 0.0)))
            throw Error(ErrorKind::InvalidArgument, "differential evolution bounds must be finite with lower < upper");

    const std::size_t np = config.population_for(dim);
    std::mt19937_64 rng(config.seed);

    // Latin-hypercube initialisation in the unit cube.
    std::vector<std::vector<double>> unit(np, std::vector<double>(dim));
    std::vector<std::size_t> perm(np);
    for (std::size_t d = 0; d < dim; ++d)
    {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = np - 1; i > 0; --i)
            std::swap(perm[i], perm[uniform_below(rng, i + 1)]);
        for (std::size_t i = 0; i < np; ++i)
            unit[i][d] = (static_cast<double>(perm[i]) + uniform01(rng)) / static_cast<double>(np);
    }

    auto to_params = [&](const std::vector<double> &u) {
        std::vector<double> x(dim);
        for (std::size_t d = 0; d < dim; ++d)
            x[d] = to_parameter(bounds[d], u[d]);
        return x;
    };

    std::vector<std::vector<double>> params(np);
    std::vector<double> energy(np);
    for (std::size_t i = 0; i < np; ++i)
        params[i] = to_params(unit[i]);
    parallel_for(np, config.threads, [&](std::size_t i) { energy[i] = objective(params[i]); });

    DEResult result;
    result.evaluations = np;
    std::size_t best = static_cast<std::size_t>(std::min_element(energy.begin(), energy.end()) - energy.begin());
    result.best = params[best];
    result.best_value = energy[best];
    result.trace.push_back(result.best_value);
    result.best_trace.push_back(result.best);
    if (on_generation)
        on_generation({0, result.best_value, result.best});

    std::vector<std::vector<double>> trial_unit(np, std::vector<double>(dim));
    std::vector<std::vector<double>> trial_params(np);
    std::vector<double> trial_energy(np);

    for (std::size_t gen = 1; gen <= config.max_generations; ++gen)
    {
        const double f = config.mutation_min + uniform01(rng) * (config.mutation_max - config.mutation_min);
        for (std::size_t i = 0; i < np; ++i)
        {
            std::size_t r1, r2, r3;
            do
                r1 = uniform_below(rng, np);
            while (r1 == i);
            do
                r2 = uniform_below(rng, np);
            while (r2 == i || r2 == r1);
            do
                r3 = uniform_below(rng, np);
            while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t jrand = uniform_below(rng, dim);
            for (std::size_t d = 0; d < dim; ++d)
            {
                const bool take = uniform01(rng) < config.crossover || d == jrand;
                double v = take ? unit[r1][d] + f * (unit[r2][d] - unit[r3][d]) : unit[i][d];
                trial_unit[i][d] = std::clamp(v, 0.0, 1.0);
            }
            trial_params[i] = to_params(trial_unit[i]);
        }

        parallel_for(np, config.threads, [&](std::size_t i) { trial_energy[i] = objective(trial_params[i]); });
        result.evaluations += np;

        for (std::size_t i = 0; i < np; ++i)
        {
            if (trial_energy[i] <= energy[i])
            {
                unit[i] = trial_unit[i];
                params[i] = trial_params[i];
                energy[i] = trial_energy[i];
                if (energy[i] < result.best_value)
                {
                    result.best_value = energy[i];
                    result.best = params[i];
                }
            }
        }
        result.generations = gen;
        result.trace.push_back(result.best_value);
        result.best_trace.push_back(result.best);
        if (on_generation)
            on_generation({gen, result.best_value, result.best});

        const double mean = std::accumulate(energy.begin(), energy.end(), 0.0) / static_cast<double>(np);
        double var = 0.0;
        for (double e : energy)
            var += (e - mean) * (e - mean);
        const double spread = std::sqrt(var / static_cast<double>(np));
        if (spread <= config.abs_tolerance + config.tolerance * std::abs(mean))
        {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace srm
