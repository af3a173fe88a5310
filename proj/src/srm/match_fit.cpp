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

#include "match_fit.hpp"

#include "errors.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace srm
{

namespace
{

template <class Matrix>
void fill_g(Matrix &g, const EigenRows &rows, std::span<const StandardObservation> standards, FitPort port)
{
    g.resize(static_cast<Eigen::Index>(2 + standards.size()), 4);
    g.row(0) << -1.0, -1.0, rows.w11, rows.w11;
    g.row(1) << 1.0, -1.0, -rows.w12, rows.w12;
    for (std::size_t i = 0; i < standards.size(); ++i)
    {
        const cplx rho = standards[i].rho;
        const cplx gm = standards[i].gamma;
        const auto r = static_cast<Eigen::Index>(2 + i);
        if (port == FitPort::A)
            g.row(r) << -rho, -1.0, gm * rho, gm;
        else
            g.row(r) << -rho, 1.0, -gm * rho, gm;
    }
    normalize_rows(g);
}

constexpr std::size_t kMaxSmallStandards = 6;

} // namespace

DesignMatrix build_g_matrix(const EigenRows &rows, std::span<const StandardObservation> standards, FitPort port)
{
    if (standards.empty())
        throw Error(ErrorKind::InvalidArgument, "G matrix needs at least one standard");
    DesignMatrix g;
    fill_g(g, rows, standards, port);
    return g;
}

double sigma4(const DesignMatrix &g) { return singular_values(g)[3]; }

FitProblem::FitProblem(std::vector<double> frequencies, std::vector<OnePortModel> models, std::vector<PortTerm> terms,
                       std::size_t match_model)
    : frequencies_(std::move(frequencies)), models_(std::move(models)), terms_(std::move(terms)),
      params_(pack_free_parameters(models_)), match_model_(match_model)
{
    const std::size_t n = frequencies_.size();
    if (n == 0)
        throw Error(ErrorKind::InvalidArgument, "fit problem has no frequencies");
    if (match_model_ >= models_.size())
        throw Error(ErrorKind::InvalidArgument, "match model index out of range");
    if (terms_.empty())
        throw Error(ErrorKind::InvalidArgument, "fit problem has no port terms");
    for (const auto &m : models_)
        m.validate();
    if (params_.size() >= n)
        throw Error(ErrorKind::InvalidArgument, "number of free parameters (" + std::to_string(params_.size()) +
                                                    ") must be below the number of frequencies (" +
                                                    std::to_string(n) + ")");
    for (const auto &t : terms_)
    {
        if (t.standards.size() < 2)
            throw Error(ErrorKind::TooFewStandards,
                        "match fitting needs the match plus at least one other modelled standard per port");
        if (t.rows.size() != n)
            throw Error(ErrorKind::FrequencyMismatch, "eigen-rows length differs from the frequency axis");
        bool has_match = false;
        for (const auto &s : t.standards)
        {
            if (s.model >= models_.size())
                throw Error(ErrorKind::InvalidArgument, "standard refers to an unknown model");
            if (s.gamma.size() != n)
                throw Error(ErrorKind::FrequencyMismatch, "standard data length differs from the frequency axis");
            has_match = has_match || s.model == match_model_;
        }
        if (!has_match)
            throw Error(ErrorKind::InvalidArgument, "every port term must include the match standard");
    }
}

std::vector<std::vector<double>> FitProblem::resolve_all(std::span<const double> theta) const
{
    std::vector<std::vector<double>> out;
    out.reserve(models_.size());
    for (std::size_t m = 0; m < models_.size(); ++m)
        out.push_back(models_[m].resolve_unchecked(params_.slice(theta, m)));
    return out;
}

double FitProblem::point_sigma4(const std::vector<std::vector<double>> &resolved, const PortTerm &t,
                                std::size_t i) const
{
    const double f = frequencies_[i];
    std::array<StandardObservation, kMaxSmallStandards> small{};
    std::vector<StandardObservation> large;
    const bool use_small = t.standards.size() <= kMaxSmallStandards;
    if (!use_small)
        large.resize(t.standards.size());
    for (std::size_t s = 0; s < t.standards.size(); ++s)
    {
        const FitStandard &st = t.standards[s];
        const StandardObservation obs{models_[st.model].reflection(resolved[st.model], f), st.gamma[i]};
        if (use_small)
            small[s] = obs;
        else
            large[s] = obs;
    }
    if (use_small)
    {
        SmallDesignMatrix g;
        fill_g(g, t.rows[i], std::span<const StandardObservation>(small.data(), t.standards.size()), t.port);
        return singular_values(g)[3];
    }
    DesignMatrix g;
    fill_g(g, t.rows[i], std::span<const StandardObservation>(large), t.port);
    return singular_values(g)[3];
}

double FitProblem::term_mean(const std::vector<std::vector<double>> &resolved, std::size_t term) const
{
    const PortTerm &t = terms_[term];
    double acc = 0.0;
    for (std::size_t i = 0; i < frequencies_.size(); ++i)
        acc += point_sigma4(resolved, t, i);
    return acc / static_cast<double>(frequencies_.size());
}

double FitProblem::objective(std::span<const double> theta) const
{
    params_.check_bounds(theta);
    return objective_unchecked(theta);
}

double FitProblem::objective_unchecked(std::span<const double> theta) const
{
    const auto resolved = resolve_all(theta);
    double acc = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t)
        acc += term_mean(resolved, t);
    const double value = acc / static_cast<double>(terms_.size());
    return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
}

std::vector<double> FitProblem::sigma4_per_frequency(std::span<const double> theta, std::size_t term) const
{
    params_.check_bounds(theta);
    const auto resolved = resolve_all(theta);
    std::vector<double> out(frequencies_.size());
    for (std::size_t i = 0; i < frequencies_.size(); ++i)
        out[i] = point_sigma4(resolved, terms_.at(term), i);
    return out;
}

FitReport fit(const FitProblem &problem, const DEConfig &config, const DECallback &on_generation)
{
    const auto start = std::chrono::steady_clock::now();
    std::vector<DEBounds> bounds;
    for (const auto &e : problem.params().entries())
        bounds.push_back({e.lower, e.upper, e.log_scale});

    const DEResult de = differential_evolution(
        [&problem](std::span<const double> theta) { return problem.objective_unchecked(theta); }, bounds, config,
        on_generation);

    FitReport report;
    report.theta = de.best;
    report.trace = de.trace;
    report.theta_trace = de.best_trace;
    report.evaluations = de.evaluations;
    report.generations = de.generations;
    report.converged = de.converged;
    for (std::size_t t = 0; t < problem.terms().size(); ++t)
        report.final_sigma4.push_back(problem.sigma4_per_frequency(report.theta, t));
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<cplx> extract_match_definition(const FitReport &report, const FitProblem &problem)
{
    const OnePortModel &m = problem.models()[problem.match_model()];
    const auto values = m.resolve(problem.params().slice(report.theta, problem.match_model()));
    std::vector<cplx> out;
    out.reserve(problem.frequencies().size());
    for (double f : problem.frequencies())
        out.push_back(m.reflection(values, f));
    return out;
}

} // namespace srm
