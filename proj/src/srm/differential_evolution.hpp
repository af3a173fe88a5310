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

// Bounded differential evolution, strategy rand/1/bin.
//
// The search runs in the unit hypercube; each coordinate maps linearly (or
// logarithmically) onto its bounds. Trials of a generation are generated
// first and evaluated afterwards, so the outcome is independent of the
// number of worker threads. Random numbers come from std::mt19937_64 with
// explicit conversions, which keeps runs bit-identical across platforms.

#ifndef SRM_DIFFERENTIAL_EVOLUTION_HPP
#define SRM_DIFFERENTIAL_EVOLUTION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace srm
{

struct DEBounds
{
    double lower;
    double upper;
    bool log_scale = false;
};

struct DEConfig
{
    explicit DEConfig(std::uint64_t rng_seed) : seed(rng_seed) {}

    std::size_t population = 0; // 0: 15 x dimension
    double mutation_min = 0.3;  // F is redrawn per generation from [min, max]
    double mutation_max = 0.9;
    double crossover = 0.9;
    std::size_t max_generations = 1000;
    double tolerance = 1e-12;    // relative spread of population objectives
    double abs_tolerance = 0.0;  // absolute part of the same test
    std::uint64_t seed;
    std::size_t threads = 1;

    // Throws InvalidArgument.
    void validate(std::size_t dimension) const;
    std::size_t population_for(std::size_t dimension) const;
};

struct DEGeneration
{
    std::size_t generation;
    double best_value;
    const std::vector<double> &best;
};

struct DEResult
{
    std::vector<double> best;
    double best_value = 0.0;
    std::vector<double> trace;                   // best-so-far per generation, generation 0 = initial population
    std::vector<std::vector<double>> best_trace; // best point per generation
    std::size_t generations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

using DEObjective = std::function<double(std::span<const double>)>;
using DECallback = std::function<void(const DEGeneration &)>;

DEResult differential_evolution(const DEObjective &objective, std::span<const DEBounds> bounds, const DEConfig &config,
                                const DECallback &on_generation = {});

// Uniform [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t n)
{
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t x;
    do
        x = rng();
    while (x >= limit);
    return x % n;
}

} // namespace srm

#endif
