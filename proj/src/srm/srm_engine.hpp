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

// Symmetric-reciprocal-match calibration engine.
//
// Measurement model (T-parameters):
//
//     M_net   = k A T_net B
//     Gamma_a = mobius(A, rho)
//     Gamma_b = mobius(P B^-1 P, rho)
//
// Symmetric one-ports give H = A P B P (Gamma_a = mobius(H, Gamma_b)), the
// same one-ports behind the transmissive device give F = A T_net P B P.
// The virtual thru M_thru = H F^-1 M_net is proportional to A B, which
// yields the two similarity problems
//
//     X_a = M_thru P H^-1       ~ A P A^-1
//     X_b = (H^-1 M_thru)^T P   ~ B^T P B^-T
//
// whose eigenvectors fix two rows of each box. The defined match closes
// the system and the unknown-thru determinant resolves k up to sign.

#ifndef SRM_SRM_ENGINE_HPP
#define SRM_SRM_ENGINE_HPP

#include "rf_core.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace srm
{

struct OnePortPair
{
    cplx gamma_a;
    cplx gamma_b;
    std::string label;
};

struct NetworkLoadPair
{
    cplx gamma_an;
    cplx gamma_b;
    std::string label;
};

struct EigenRows
{
    cplx w11;
    cplx w12;
};

// A nullspace-solved 2x2 cross matrix with its conditioning figures.
struct CrossSolution
{
    Complex2x2 matrix;                     // unit Frobenius norm, largest entry real-positive
    std::array<double, 4> singular_values; // of the row-normalised design matrix
    double max_residual = 0.0;             // max |Gamma_a - mobius(matrix, Gamma_b)|
    bool ill_conditioned = false;          // sigma_3 / sigma_4 < 10
};

// Throws TooFewStandards (< 3 pairs) or RankDeficient.
CrossSolution solve_cross_matrix(std::span<const OnePortPair> pairs);
CrossSolution solve_cross_matrix_network(std::span<const NetworkLoadPair> pairs);

// H F^-1 M_net. Throws SingularMatrix.
Complex2x2 virtual_thru(const Complex2x2 &h, const Complex2x2 &f, const Complex2x2 &m_net);

// Eigen-rows of one port together with the eigenvalue belonging to each
// row: eigenvalues[0] pairs with w11, eigenvalues[1] with w12.
struct EigenSolution
{
    EigenRows rows;
    std::array<cplx, 2> eigenvalues;
};

// Throws DegenerateEigenvalues. Row order follows the eigenvalue ordering
// tr/2 + s, tr/2 - s with s the principal root; the physical assignment is
// decided by the session pipeline.
EigenSolution eigen_rows_port_a(const Complex2x2 &m_thru, const Complex2x2 &h);
EigenSolution eigen_rows_port_b(const Complex2x2 &m_thru, const Complex2x2 &h);

// A one-port standard with a defined reflection and its raw measurement.
struct StandardObservation
{
    cplx rho;
    cplx gamma;
};

struct BoxSolution
{
    Complex2x2 box;                        // a22 (or b22) = 1
    std::array<double, 4> singular_values; // sigma_4 = 0 for the square-free 3-row case
    double residual = 0.0;                 // max normalised row residual
};

// Match-anchored nullspace solves. The first observation is the match;
// further observations over-determine the system. Throws RankCollapse.
BoxSolution solve_error_box_a(const EigenRows &rows, std::span<const StandardObservation> standards);
BoxSolution solve_error_box_b(const EigenRows &rows, std::span<const StandardObservation> standards);
BoxSolution solve_error_box_a(const EigenRows &rows, cplx match_rho, cplx match_gamma);
BoxSolution solve_error_box_b(const EigenRows &rows, cplx match_rho, cplx match_gamma);

// +-sqrt(det(A^-1 M_net B^-1)).
std::array<cplx, 2> k_candidates(const Complex2x2 &a, const Complex2x2 &b, const Complex2x2 &m_net);

// S21 of the transmissive device implied by a candidate k.
cplx implied_transmission(const Complex2x2 &a, const Complex2x2 &b, const Complex2x2 &m_net, cplx k);

struct KSolution
{
    cplx k;
    bool ambiguous = false; // both candidates > 80 deg away from the estimate
};

// Picks the sign whose implied transmission phase is closest to
// phase_estimate (radians), or to 0 deg without an estimate.
KSolution resolve_k_unknown_thru(const Complex2x2 &a, const Complex2x2 &b, const Complex2x2 &m_net,
                                 std::optional<double> phase_estimate = std::nullopt);

enum class CascadePort
{
    A,
    B
};

struct OnePortStandard
{
    std::string label;
    std::vector<cplx> gamma_a;
    std::vector<cplx> gamma_b;
    // Rough expected reflection (e.g. -1 for a short). Used only to pick the
    // eigenvector assignment.
    std::optional<cplx> nominal;
};

struct NetworkLoadStandard
{
    std::string label;
    std::vector<cplx> gamma_n;     // one-port behind the transmissive device
    std::vector<cplx> gamma_other; // same one-port measured alone at the opposite port
};

struct MeasurementSession
{
    std::vector<double> frequencies;
    std::vector<OnePortStandard> oneports;
    std::vector<NetworkLoadStandard> network_loads;
    std::vector<Complex2x2> net; // raw T of the transmissive device
    std::vector<Complex2x2> dut; // raw T of the DUT, optional
    std::string match_label = "match";
    CascadePort cascade_port = CascadePort::A;

    std::size_t size() const { return frequencies.size(); }
    // Throws IncompleteSession / FrequencyMismatch.
    void validate() const;
    const OnePortStandard &match() const;
};

// Port exchange of a session with network-loads cascaded at port B:
// Gamma_a <-> Gamma_b, two-ports get swapped ports, cascade moves to A.
MeasurementSession mirrored(const MeasurementSession &session);

struct FrequencyDiagnostics
{
    double h_sigma3 = 0.0;
    double h_sigma4 = 0.0;
    bool h_ill_conditioned = false;
    double f_sigma3 = 0.0;
    double f_sigma4 = 0.0;
    bool f_ill_conditioned = false;
    double a_sigma3 = 0.0;
    double a_residual = 0.0;
    double b_sigma3 = 0.0;
    double b_residual = 0.0;
    double eigen_separation = 0.0; // |l1 - l2| / max |l|
    bool assignment_by_continuity = false;
    bool assignment_unresolved = false; // first point without decisive nominals
    bool k_ambiguous = false;
    bool failed = false;
    bool interpolated = false;
    std::string failure;
};

struct CalibrationResult
{
    std::vector<double> frequencies;
    std::vector<ErrorBoxSet> boxes;
    std::vector<EigenRows> rows_a;
    std::vector<EigenRows> rows_b;
    std::vector<FrequencyDiagnostics> diagnostics;

    bool complete() const;
};

struct CalibrationOptions
{
    // Expected phase (rad) of the transmissive device's S21 per frequency.
    std::optional<std::vector<double>> net_phase_estimate;
    // Record failing frequencies in diagnostics instead of throwing.
    bool tolerate_failures = false;
    std::size_t threads = 1;
};

// Per-frequency eigen stage shared by calibration and match fitting.
// Everything is expressed in the physical port orientation.
struct EigenStage
{
    std::vector<double> frequencies;
    std::vector<EigenRows> rows_a;
    std::vector<EigenRows> rows_b;
    std::vector<FrequencyDiagnostics> diagnostics;
};

// Runs the H/F/virtual-thru/eigen steps and settles the eigenvector
// assignment using the match references (per frequency, per physical port)
// plus any standard nominals.
EigenStage prepare_eigen_stage(const MeasurementSession &session, std::span<const cplx> match_ref_a,
                               std::span<const cplx> match_ref_b, const CalibrationOptions &options = {});

// Full calibration with defined per-port match reflections.
CalibrationResult calibrate_session(const MeasurementSession &session, std::span<const cplx> match_a,
                                    std::span<const cplx> match_b, const CalibrationOptions &options = {});

// T_net = A^-1 M B^-1 / k.
Complex2x2 correct_t(const ErrorBoxSet &boxes, const Complex2x2 &m_raw_t);
// k A T B.
Complex2x2 embed_t(const ErrorBoxSet &boxes, const Complex2x2 &t_net);

// Corrected S-parameters. Throws FrequencyMismatch when the records do not
// align with the calibration axis (1 Hz tolerance).
std::vector<Complex2x2> apply_correction(const CalibrationResult &result, std::span<const TwoPortRecord> raw_dut);

// Fills failed frequencies from their neighbours (mean of the available
// neighbours). Returns the indices that could not be filled.
std::vector<std::size_t> interpolate_failures(CalibrationResult &result);

} // namespace srm

#endif
