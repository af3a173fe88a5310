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

#include "srm_engine.hpp"

#include "errors.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace srm
{

namespace
{

constexpr double kRankTolerance = 1e-10;      // sigma_3 / sigma_1 below this: rank collapse
constexpr double kIllConditionedRatio = 10.0; // sigma_3 / sigma_4 below this: flagged
constexpr double kDegenerateEigen = 1e-9;
constexpr double kDecisiveScore = 0.25;

Complex2x2 to_matrix(const Vector4c &v) { return {v[0], v[1], v[2], v[3]}; }

// Unit Frobenius norm with the largest-magnitude entry real-positive.
Complex2x2 canonical_phase(const Complex2x2 &m)
{
    const std::array<cplx, 4> e{m.q11, m.q12, m.q21, m.q22};
    std::size_t big = 0;
    for (std::size_t i = 1; i < 4; ++i)
        if (std::abs(e[i]) > std::abs(e[big]))
            big = i;
    const cplx rot = std::conj(e[big]) / std::abs(e[big]);
    return (rot / m.frobenius_norm()) * m;
}

// Row [gamma_b, 1, -gamma_a gamma_b, -gamma_a] per pair acting on vec(Q).
CrossSolution solve_cross(std::span<const cplx> gamma_a, std::span<const cplx> gamma_b)
{
    const auto m = static_cast<Eigen::Index>(gamma_a.size());
    if (m < 3)
        throw Error(ErrorKind::TooFewStandards,
                    "at least three symmetric standards are required, got " + std::to_string(m));

    DesignMatrix d(m, 4);
    for (Eigen::Index r = 0; r < m; ++r)
    {
        const cplx ga = gamma_a[static_cast<std::size_t>(r)];
        const cplx gb = gamma_b[static_cast<std::size_t>(r)];
        d.row(r) << gb, 1.0, -ga * gb, -ga;
    }
    normalize_rows(d);
    const NullspaceSolution ns = nullspace(d);
    const auto &sv = ns.singular_values;
    if (!(sv[2] > kRankTolerance * sv[0]))
        throw Error(ErrorKind::RankDeficient, "one-port standards are not sufficiently distinct (sigma_3/sigma_1 = " +
                                                  std::to_string(sv[2] / sv[0]) + ")");

    CrossSolution out;
    out.matrix = canonical_phase(to_matrix(ns.vector));
    out.singular_values = sv;
    out.ill_conditioned = sv[3] > 0.0 && sv[2] / sv[3] < kIllConditionedRatio;
    for (std::size_t i = 0; i < gamma_a.size(); ++i)
    {
        const cplx den = out.matrix.q21 * gamma_b[i] + out.matrix.q22;
        const double r = std::abs(den) > 0.0
                             ? std::abs(gamma_a[i] - (out.matrix.q11 * gamma_b[i] + out.matrix.q12) / den)
                             : std::numeric_limits<double>::infinity();
        out.max_residual = std::max(out.max_residual, r);
    }
    return out;
}

cplx eigen_ratio(const Complex2x2 &x, cplx lambda)
{
    // Two null vectors of (X - lambda I); keep the better conditioned one.
    const cplx u1 = x.q12, u2 = lambda - x.q11;
    const cplx v1 = lambda - x.q22, v2 = x.q21;
    const bool use_u = std::norm(u1) + std::norm(u2) >= std::norm(v1) + std::norm(v2);
    const cplx num = use_u ? u1 : v1;
    const cplx den = use_u ? u2 : v2;
    if (std::abs(den) <= 1e-15 * std::abs(num) || std::abs(den) < 1e-300)
        throw Error(ErrorKind::DegenerateEigenvalues, "eigenvector cannot be normalised to a unit second entry");
    return num / den;
}

EigenSolution eigen_solve(const Complex2x2 &x)
{
    const cplx half_trace = 0.5 * x.trace();
    const cplx s = std::sqrt(half_trace * half_trace - x.det());
    const cplx l1 = half_trace + s;
    const cplx l2 = half_trace - s;
    const double scale = std::max(std::abs(l1), std::abs(l2));
    if (!(std::abs(l1 - l2) >= kDegenerateEigen * scale) || scale == 0.0)
        throw Error(ErrorKind::DegenerateEigenvalues, "eigenvalues coincide");
    return {{eigen_ratio(x, l1), eigen_ratio(x, l2)}, {l1, l2}};
}

BoxSolution solve_box(const EigenRows &rows, std::span<const StandardObservation> standards, bool port_b)
{
    if (standards.empty())
        throw Error(ErrorKind::InvalidArgument, "the match observation is required");
    const auto n = static_cast<Eigen::Index>(2 + standards.size());
    DesignMatrix d(n, 4);
    d.row(0) << -1.0, -1.0, rows.w11, rows.w11;
    d.row(1) << 1.0, -1.0, -rows.w12, rows.w12;
    for (std::size_t i = 0; i < standards.size(); ++i)
    {
        const cplx rho = standards[i].rho;
        const cplx g = standards[i].gamma;
        if (port_b)
            d.row(static_cast<Eigen::Index>(2 + i)) << -rho, 1.0, -g * rho, g;
        else
            d.row(static_cast<Eigen::Index>(2 + i)) << -rho, -1.0, g * rho, g;
    }
    normalize_rows(d);
    const NullspaceSolution ns = nullspace(d);
    const auto &sv = ns.singular_values;
    const Vector4c &v = ns.vector;
    if (!(sv[2] > kRankTolerance * sv[0]) || std::abs(v[3]) < 1e-14)
        throw Error(ErrorKind::RankCollapse, "match standard does not separate from the eigen-rows");

    const Vector4c x = v / v[3];
    BoxSolution out;
    out.singular_values = sv;
    // Port A unknowns [a11, a12, a21, 1]; port B unknowns [b11, b21, b12, 1].
    out.box = port_b ? Complex2x2{x[0], x[2], x[1], 1.0} : Complex2x2{x[0], x[1], x[2], 1.0};
    const Eigen::VectorXcd r = d * x;
    out.residual = r.cwiseAbs().maxCoeff() / x.norm();
    return out;
}

double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * std::numbers::pi);
    return a;
}

std::string at_frequency(std::size_t i, double f)
{
    return " at frequency index " + std::to_string(i) + " (" + std::to_string(f) + " Hz)";
}

double track_distance(const std::vector<cplx> &x, const std::vector<cplx> &y)
{
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::isfinite(std::abs(x[i])) && std::isfinite(std::abs(y[i])))
            d += std::abs(x[i] - y[i]);
        else
            d += 1e3;
    return d;
}

EigenRows swapped(const EigenRows &r) { return {r.w12, r.w11}; }

} // namespace

CrossSolution solve_cross_matrix(std::span<const OnePortPair> pairs)
{
    std::vector<cplx> ga, gb;
    for (const auto &p : pairs)
    {
        ga.push_back(p.gamma_a);
        gb.push_back(p.gamma_b);
    }
    return solve_cross(ga, gb);
}

CrossSolution solve_cross_matrix_network(std::span<const NetworkLoadPair> pairs)
{
    std::vector<cplx> ga, gb;
    for (const auto &p : pairs)
    {
        ga.push_back(p.gamma_an);
        gb.push_back(p.gamma_b);
    }
    return solve_cross(ga, gb);
}

Complex2x2 virtual_thru(const Complex2x2 &h, const Complex2x2 &f, const Complex2x2 &m_net)
{
    return h * f.inverse() * m_net;
}

EigenSolution eigen_rows_port_a(const Complex2x2 &m_thru, const Complex2x2 &h)
{
    return eigen_solve(m_thru * kPermutation * h.inverse());
}

EigenSolution eigen_rows_port_b(const Complex2x2 &m_thru, const Complex2x2 &h)
{
    return eigen_solve((h.inverse() * m_thru).transpose() * kPermutation);
}

BoxSolution solve_error_box_a(const EigenRows &rows, std::span<const StandardObservation> standards)
{
    return solve_box(rows, standards, false);
}

BoxSolution solve_error_box_b(const EigenRows &rows, std::span<const StandardObservation> standards)
{
    return solve_box(rows, standards, true);
}

BoxSolution solve_error_box_a(const EigenRows &rows, cplx match_rho, cplx match_gamma)
{
    const StandardObservation obs{match_rho, match_gamma};
    return solve_box(rows, {&obs, 1}, false);
}

BoxSolution solve_error_box_b(const EigenRows &rows, cplx match_rho, cplx match_gamma)
{
    const StandardObservation obs{match_rho, match_gamma};
    return solve_box(rows, {&obs, 1}, true);
}

std::array<cplx, 2> k_candidates(const Complex2x2 &a, const Complex2x2 &b, const Complex2x2 &m_net)
{
    const cplx k = std::sqrt((a.inverse() * m_net * b.inverse()).det());
    return {k, -k};
}

cplx implied_transmission(const Complex2x2 &a, const Complex2x2 &b, const Complex2x2 &m_net, cplx k)
{
    const Complex2x2 t = a.inverse() * m_net * b.inverse();
    return k / t.q22;
}

KSolution resolve_k_unknown_thru(const Complex2x2 &a, const Complex2x2 &b, const Complex2x2 &m_net,
                                 std::optional<double> phase_estimate)
{
    const auto cand = k_candidates(a, b, m_net);
    const double target = phase_estimate.value_or(0.0);
    std::array<double, 2> dev{};
    for (std::size_t s = 0; s < 2; ++s)
        dev[s] = std::abs(wrap_angle(std::arg(implied_transmission(a, b, m_net, cand[s])) - target));
    const std::size_t pick = dev[0] <= dev[1] ? 0 : 1;
    const double limit = 80.0 * std::numbers::pi / 180.0;
    return {cand[pick], phase_estimate.has_value() && dev[0] > limit && dev[1] > limit};
}

void MeasurementSession::validate() const
{
    const std::size_t n = frequencies.size();
    if (n == 0)
        throw Error(ErrorKind::IncompleteSession, "empty frequency axis");
    for (std::size_t i = 1; i < n; ++i)
        if (!(frequencies[i] > frequencies[i - 1]))
            throw Error(ErrorKind::FrequencyMismatch, "frequency axis must be strictly increasing");
    if (oneports.size() < 3)
        throw Error(ErrorKind::IncompleteSession, "at least three symmetric one-port standards are required");
    if (network_loads.size() < 3)
        throw Error(ErrorKind::IncompleteSession, "at least three network-load measurements are required");
    if (net.size() != n)
        throw Error(ErrorKind::IncompleteSession, "transmissive-device measurement missing or wrong length");
    if (!dut.empty() && dut.size() != n)
        throw Error(ErrorKind::FrequencyMismatch, "DUT measurement length differs from the frequency axis");
    for (const auto &s : oneports)
        if (s.gamma_a.size() != n || s.gamma_b.size() != n)
            throw Error(ErrorKind::FrequencyMismatch, "one-port '" + s.label + "' length differs from the axis");
    for (const auto &s : network_loads)
        if (s.gamma_n.size() != n || s.gamma_other.size() != n)
            throw Error(ErrorKind::FrequencyMismatch, "network-load '" + s.label + "' length differs from the axis");
    (void)match();
}

const OnePortStandard &MeasurementSession::match() const
{
    for (const auto &s : oneports)
        if (s.label == match_label)
            return s;
    throw Error(ErrorKind::IncompleteSession, "no one-port standard labelled '" + match_label + "'");
}

MeasurementSession mirrored(const MeasurementSession &session)
{
    MeasurementSession m = session;
    for (auto &s : m.oneports)
        std::swap(s.gamma_a, s.gamma_b);
    for (auto &t : m.net)
        t = swap_ports_t(t);
    for (auto &t : m.dut)
        t = swap_ports_t(t);
    m.cascade_port = session.cascade_port == CascadePort::A ? CascadePort::B : CascadePort::A;
    return m;
}

bool CalibrationResult::complete() const
{
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const FrequencyDiagnostics &d) { return d.failed && !d.interpolated; });
}

namespace
{

struct Candidate
{
    bool ok = false;
    EigenRows rows_a{};
    EigenRows rows_b{};
    ErrorBoxSet boxes{};
    double score = std::numeric_limits<double>::quiet_NaN();
    std::vector<cplx> corrected; // rho_a, rho_b of every one-port standard
};

struct EigenPoint
{
    std::array<Candidate, 2> candidates;
    FrequencyDiagnostics diag;
};

EigenPoint eigen_point(const MeasurementSession &work, bool is_mirrored, const MeasurementSession &physical,
                       std::size_t i, cplx ref_a, cplx ref_b)
{
    EigenPoint pt;
    std::vector<OnePortPair> pairs;
    for (const auto &s : work.oneports)
        pairs.push_back({s.gamma_a[i], s.gamma_b[i], s.label});
    std::vector<NetworkLoadPair> loads;
    for (const auto &s : work.network_loads)
        loads.push_back({s.gamma_n[i], s.gamma_other[i], s.label});

    const CrossSolution h = solve_cross_matrix(pairs);
    const CrossSolution f = solve_cross_matrix_network(loads);
    pt.diag.h_sigma3 = h.singular_values[2];
    pt.diag.h_sigma4 = h.singular_values[3];
    pt.diag.h_ill_conditioned = h.ill_conditioned;
    pt.diag.f_sigma3 = f.singular_values[2];
    pt.diag.f_sigma4 = f.singular_values[3];
    pt.diag.f_ill_conditioned = f.ill_conditioned;

    const Complex2x2 m_thru = virtual_thru(h.matrix, f.matrix, work.net[i]);
    EigenSolution ea = eigen_rows_port_a(m_thru, h.matrix);
    EigenSolution eb = eigen_rows_port_b(m_thru, h.matrix);
    // Both problems share the eigenvalues; pair the rows through them.
    const auto &la = ea.eigenvalues;
    const auto &lb = eb.eigenvalues;
    if (std::abs(la[0] - lb[0]) + std::abs(la[1] - lb[1]) > std::abs(la[0] - lb[1]) + std::abs(la[1] - lb[0]))
    {
        eb.rows = swapped(eb.rows);
        std::swap(eb.eigenvalues[0], eb.eigenvalues[1]);
    }
    pt.diag.eigen_separation =
        std::abs(la[0] - la[1]) / std::max(std::abs(la[0]), std::abs(la[1]));

    EigenRows ra = ea.rows;
    EigenRows rb = eb.rows;
    if (is_mirrored)
    {
        // Rows of the exchanged boxes map to (-w12, -w11) of the other port.
        ra = {-eb.rows.w12, -eb.rows.w11};
        rb = {-ea.rows.w12, -ea.rows.w11};
    }

    const OnePortStandard &match = physical.match();
    for (std::size_t s = 0; s < 2; ++s)
    {
        Candidate &c = pt.candidates[s];
        c.rows_a = s == 0 ? ra : swapped(ra);
        c.rows_b = s == 0 ? rb : swapped(rb);
        try
        {
            c.boxes.a = solve_error_box_a(c.rows_a, ref_a, match.gamma_a[i]).box;
            c.boxes.b = solve_error_box_b(c.rows_b, ref_b, match.gamma_b[i]).box;
            c.ok = true;
        }
        catch (const Error &)
        {
            continue;
        }
        double score = 0.0;
        bool any = false;
        for (const auto &std_ : physical.oneports)
        {
            cplx rho_a(std::numeric_limits<double>::infinity());
            cplx rho_b = rho_a;
            try
            {
                rho_a = mobius_inverse(c.boxes.a, std_.gamma_a[i]);
                rho_b = mobius(kPermutation * c.boxes.b * kPermutation, std_.gamma_b[i]);
            }
            catch (const Error &)
            {
            }
            c.corrected.push_back(rho_a);
            c.corrected.push_back(rho_b);
            if (std_.nominal)
            {
                score += std::abs(rho_a - *std_.nominal) + std::abs(rho_b - *std_.nominal);
                any = true;
            }
        }
        if (any)
            c.score = score;
    }
    if (!pt.candidates[0].ok && !pt.candidates[1].ok)
    {
        throw Error(ErrorKind::RankCollapse, "match standard does not separate from the eigen-rows");
    }
    return pt;
}

struct StageInternal
{
    EigenStage stage;
    std::vector<ErrorBoxSet> provisional; // boxes of the chosen assignment (with the references)
};

StageInternal run_eigen_stage(const MeasurementSession &session, std::span<const cplx> ref_a,
                              std::span<const cplx> ref_b, const CalibrationOptions &options)
{
    session.validate();
    const std::size_t n = session.size();
    if (ref_a.size() != n || ref_b.size() != n)
        throw Error(ErrorKind::FrequencyMismatch, "match definition length differs from the frequency axis");

    const bool is_mirrored = session.cascade_port == CascadePort::B;
    const MeasurementSession work = is_mirrored ? mirrored(session) : MeasurementSession{};
    const MeasurementSession &w = is_mirrored ? work : session;

    std::vector<EigenPoint> points(n);
    std::vector<std::string> errors(n);
    std::vector<ErrorKind> kinds(n, ErrorKind::InvalidArgument);
    parallel_for(n, options.threads, [&](std::size_t i) {
        try
        {
            points[i] = eigen_point(w, is_mirrored, session, i, ref_a[i], ref_b[i]);
        }
        catch (const Error &e)
        {
            errors[i] = e.what();
            kinds[i] = e.kind();
            points[i].diag.failed = true;
            points[i].diag.failure = e.what();
        }
    });

    StageInternal out;
    out.stage.frequencies = session.frequencies;
    out.stage.rows_a.resize(n);
    out.stage.rows_b.resize(n);
    out.stage.diagnostics.resize(n);
    out.provisional.resize(n);

    // The first solved point is settled by the nominals; later points
    // follow the corrected standard reflections, which move slowly with
    // frequency while the wrong assignment maps them far away.
    std::optional<std::vector<cplx>> previous;
    for (std::size_t i = 0; i < n; ++i)
    {
        EigenPoint &pt = points[i];
        if (pt.diag.failed)
        {
            if (!options.tolerate_failures)
                throw Error(kinds[i], errors[i] + at_frequency(i, session.frequencies[i]));
            out.stage.diagnostics[i] = pt.diag;
            continue;
        }
        const auto &c = pt.candidates;
        std::size_t pick = 0;
        bool by_continuity = false;
        if (c[0].ok != c[1].ok)
        {
            pick = c[0].ok ? 0 : 1;
        }
        else if (previous)
        {
            pick = track_distance(c[0].corrected, *previous) <= track_distance(c[1].corrected, *previous) ? 0 : 1;
            by_continuity = true;
        }
        else
        {
            const bool scored = !std::isnan(c[0].score) && !std::isnan(c[1].score);
            pick = scored && c[1].score < c[0].score ? 1 : 0;
            const double lo = std::min(c[0].score, c[1].score);
            const double hi = std::max(c[0].score, c[1].score);
            pt.diag.assignment_unresolved = !(scored && lo < kDecisiveScore * hi);
        }
        pt.diag.assignment_by_continuity = by_continuity;
        out.stage.rows_a[i] = c[pick].rows_a;
        out.stage.rows_b[i] = c[pick].rows_b;
        out.stage.diagnostics[i] = pt.diag;
        out.provisional[i] = c[pick].boxes;
        previous = c[pick].corrected;
    }
    return out;
}

} // namespace

EigenStage prepare_eigen_stage(const MeasurementSession &session, std::span<const cplx> match_ref_a,
                               std::span<const cplx> match_ref_b, const CalibrationOptions &options)
{
    return run_eigen_stage(session, match_ref_a, match_ref_b, options).stage;
}

CalibrationResult calibrate_session(const MeasurementSession &session, std::span<const cplx> match_a,
                                    std::span<const cplx> match_b, const CalibrationOptions &options)
{
    const std::size_t n = session.size();
    if (options.net_phase_estimate && options.net_phase_estimate->size() != n)
        throw Error(ErrorKind::FrequencyMismatch, "phase estimate length differs from the frequency axis");

    StageInternal st = run_eigen_stage(session, match_a, match_b, options);
    CalibrationResult result;
    result.frequencies = session.frequencies;
    result.rows_a = st.stage.rows_a;
    result.rows_b = st.stage.rows_b;
    result.diagnostics = st.stage.diagnostics;
    result.boxes.resize(n);

    const OnePortStandard &match = session.match();
    parallel_for(n, options.threads, [&](std::size_t i) {
        FrequencyDiagnostics &d = result.diagnostics[i];
        if (d.failed)
            return;
        try
        {
            const BoxSolution a = solve_error_box_a(result.rows_a[i], match_a[i], match.gamma_a[i]);
            const BoxSolution b = solve_error_box_b(result.rows_b[i], match_b[i], match.gamma_b[i]);
            result.boxes[i].a = a.box;
            result.boxes[i].b = b.box;
            d.a_sigma3 = a.singular_values[2];
            d.a_residual = a.residual;
            d.b_sigma3 = b.singular_values[2];
            d.b_residual = b.residual;
            // Validity of the inverse is needed for k; probe it here.
            (void)k_candidates(a.box, b.box, session.net[i]);
        }
        catch (const Error &e)
        {
            d.failed = true;
            d.failure = e.what();
        }
    });

    // Sequential sign pass for k.
    std::optional<double> prev_phase;
    std::optional<double> prev_slope;
    std::optional<double> prev_f;
    for (std::size_t i = 0; i < n; ++i)
    {
        FrequencyDiagnostics &d = result.diagnostics[i];
        if (d.failed)
        {
            if (!options.tolerate_failures)
                throw Error(ErrorKind::RankCollapse, d.failure + at_frequency(i, session.frequencies[i]));
            continue;
        }
        ErrorBoxSet &bx = result.boxes[i];
        const double f = session.frequencies[i];
        std::optional<double> estimate;
        if (options.net_phase_estimate)
            estimate = (*options.net_phase_estimate)[i];
        else if (prev_phase)
            estimate = *prev_phase + (prev_slope ? *prev_slope * (f - *prev_f) : 0.0);

        const KSolution ks = resolve_k_unknown_thru(bx.a, bx.b, session.net[i], estimate);
        bx.k = ks.k;
        d.k_ambiguous = options.net_phase_estimate.has_value() && ks.ambiguous;

        // Unwrapped phase track for the continuity predictor.
        double phase = std::arg(implied_transmission(bx.a, bx.b, session.net[i], bx.k));
        if (prev_phase)
        {
            const double predicted = *prev_phase + (prev_slope ? *prev_slope * (f - *prev_f) : 0.0);
            phase = predicted + wrap_angle(phase - predicted);
            prev_slope = (phase - *prev_phase) / (f - *prev_f);
        }
        prev_phase = phase;
        prev_f = f;
    }
    return result;
}

Complex2x2 correct_t(const ErrorBoxSet &boxes, const Complex2x2 &m_raw_t)
{
    return (1.0 / boxes.k) * (boxes.a.inverse() * m_raw_t * boxes.b.inverse());
}

Complex2x2 embed_t(const ErrorBoxSet &boxes, const Complex2x2 &t_net)
{
    return boxes.k * (boxes.a * t_net * boxes.b);
}

std::vector<Complex2x2> apply_correction(const CalibrationResult &result, std::span<const TwoPortRecord> raw_dut)
{
    if (raw_dut.size() != result.frequencies.size())
        throw Error(ErrorKind::FrequencyMismatch, "DUT has " + std::to_string(raw_dut.size()) +
                                                      " points, calibration has " +
                                                      std::to_string(result.frequencies.size()));
    std::vector<Complex2x2> out(raw_dut.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < raw_dut.size(); ++i)
    {
        if (std::abs(raw_dut[i].frequency - result.frequencies[i]) > 1.0)
            throw Error(ErrorKind::FrequencyMismatch, "DUT frequency " + std::to_string(raw_dut[i].frequency) +
                                                          " Hz does not match calibration point " + std::to_string(i));
        const auto &d = result.diagnostics[i];
        if (d.failed && !d.interpolated)
        {
            out[i] = {cplx(nan, nan), cplx(nan, nan), cplx(nan, nan), cplx(nan, nan)};
            continue;
        }
        const Complex2x2 t = s_to_t(raw_dut[i]).matrix;
        out[i] = t_to_s(correct_t(result.boxes[i], t));
    }
    return out;
}

std::vector<std::size_t> interpolate_failures(CalibrationResult &result)
{
    const std::size_t n = result.boxes.size();
    std::vector<bool> good(n);
    for (std::size_t i = 0; i < n; ++i)
        good[i] = !result.diagnostics[i].failed;

    std::vector<std::size_t> gaps;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (good[i])
            continue;
        const bool left = i > 0 && good[i - 1];
        const bool right = i + 1 < n && good[i + 1];
        if (!left && !right)
        {
            gaps.push_back(i);
            continue;
        }
        ErrorBoxSet fill;
        if (left && right)
        {
            const ErrorBoxSet &l = result.boxes[i - 1];
            const ErrorBoxSet &r = result.boxes[i + 1];
            fill.a = 0.5 * (l.a + r.a);
            fill.b = 0.5 * (l.b + r.b);
            fill.k = 0.5 * (l.k + r.k);
        }
        else
        {
            fill = result.boxes[left ? i - 1 : i + 1];
        }
        result.boxes[i] = fill;
        result.diagnostics[i].interpolated = true;
    }
    return gaps;
}

} // namespace srm
