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

// Match-model extraction.
//
// Per frequency the two eigen-rows of a port are stacked with one row per
// modelled standard,
//
//     [ -1      -1   w11         w11   ]
//     [  1      -1  -w12         w12   ]
//     [ -rho_i  -1   Gamma_i rho_i  Gamma_i ]   (port A)
//     [ -rho_i   1  -Gamma_i rho_i  Gamma_i ]   (port B)
//
// which has an exact nullspace only when every rho_i(theta) is consistent
// with the raw data. The objective is the frequency mean of the fourth
// singular value of the row-normalised matrix.

#ifndef SRM_MATCH_FIT_HPP
#define SRM_MATCH_FIT_HPP

#include "circuit_model.hpp"
#include "differential_evolution.hpp"
#include "linalg.hpp"
#include "srm_engine.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace srm
{

enum class FitPort
{
    A,
    B
};

// Row-normalised G matrix. S >= 1 standards.
DesignMatrix build_g_matrix(const EigenRows &rows, std::span<const StandardObservation> standards,
                            FitPort port = FitPort::A);

// Fourth singular value; zero for three-row matrices.
double sigma4(const DesignMatrix &g);

struct FitStandard
{
    std::size_t model;       // index into FitProblem models
    std::vector<cplx> gamma; // raw reflection at this port, per frequency
};

struct PortTerm
{
    FitPort port = FitPort::A;
    std::vector<EigenRows> rows; // per frequency
    std::vector<FitStandard> standards;
};

class FitProblem
{
public:
    // A single port term is a one-port fit; two terms sharing the models fit
    // both ports with one parameter vector (objective = mean over terms).
    // Throws InvalidArgument / TooFewStandards / NoFreeParameters.
    FitProblem(std::vector<double> frequencies, std::vector<OnePortModel> models, std::vector<PortTerm> terms,
               std::size_t match_model);

    const std::vector<double> &frequencies() const { return frequencies_; }
    const std::vector<OnePortModel> &models() const { return models_; }
    const std::vector<PortTerm> &terms() const { return terms_; }
    const ParamVector &params() const { return params_; }
    std::size_t match_model() const { return match_model_; }

    // Throws OutOfBounds.
    double objective(std::span<const double> theta) const;
    // No bounds check; non-finite values map to +inf.
    double objective_unchecked(std::span<const double> theta) const;
    // sigma_4 per frequency for one term.
    std::vector<double> sigma4_per_frequency(std::span<const double> theta, std::size_t term) const;

private:
    double term_mean(const std::vector<std::vector<double>> &resolved, std::size_t term) const;
    double point_sigma4(const std::vector<std::vector<double>> &resolved, const PortTerm &t, std::size_t i) const;
    std::vector<std::vector<double>> resolve_all(std::span<const double> theta) const;

    std::vector<double> frequencies_;
    std::vector<OnePortModel> models_;
    std::vector<PortTerm> terms_;
    ParamVector params_;
    std::size_t match_model_;
};

struct FitReport
{
    std::vector<double> theta;                    // theta_opt
    std::vector<double> trace;                    // best objective per generation
    std::vector<std::vector<double>> theta_trace; // best theta per generation
    std::vector<std::vector<double>> final_sigma4; // per term, per frequency
    double wall_seconds = 0.0;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
    bool converged = false;
};

FitReport fit(const FitProblem &problem, const DEConfig &config, const DECallback &on_generation = {});

// Match reflection over the problem's frequency axis at theta_opt.
std::vector<cplx> extract_match_definition(const FitReport &report, const FitProblem &problem);

} // namespace srm

#endif
