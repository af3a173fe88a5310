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

// Synthetic measurement generation: model standards embedded in error boxes.

#ifndef SRM_SYNTH_BENCH_HPP
#define SRM_SYNTH_BENCH_HPP

#include "circuit_model.hpp"
#include "srm_engine.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace srm
{

// ---- counter-based random numbers ----------------------------------------

std::uint64_t splitmix64(std::uint64_t x);
// Hash of (seed, stream, counter); independent of evaluation order.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
// Uniform in [0, 1).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
// Standard normal pair via Box-Muller on counters (2c, 2c+1).
std::pair<double, double> counter_normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// ---- error boxes -----------------------------------------------------------

struct RandomSmoothSpec
{
    std::uint64_t seed = 1;
    double reflection_cap = 0.3;  // max |S11|, |S22| of each box
    double ripple_cap = 0.05;     // relative transmission ripple
};

struct ErrorBoxSpec
{
    enum class Mode
    {
        Identity,
        Explicit,
        RandomSmooth
    };

    Mode mode = Mode::Identity;
    std::vector<ErrorBoxSet> boxes; // Explicit: one per frequency
    RandomSmoothSpec smooth;

    static ErrorBoxSpec identity();
    static ErrorBoxSpec explicit_boxes(std::vector<ErrorBoxSet> boxes);
    static ErrorBoxSpec random_smooth(RandomSmoothSpec spec);
};

// S-parameters of one RandomSmooth box (0 = port A, 1 = port B) at the
// normalised frequency x = f / f_max.
Complex2x2 random_smooth_box_s(const RandomSmoothSpec &spec, int box, double x);

// Per-frequency boxes normalised to a22 = b22 = 1 (k absorbs the scale).
// Throws InvalidArgument / SingularMatrix.
std::vector<ErrorBoxSet> realize_boxes(const ErrorBoxSpec &spec, std::span<const double> frequencies);

// ---- embedding -------------------------------------------------------------

enum class Side
{
    A,
    B
};

// Raw reflection of rho behind one box. Throws PoleAtInput.
cplx embed_one_port(const Complex2x2 &box, cplx rho, Side side);
// k A T B.
Complex2x2 embed_two_port(const ErrorBoxSet &boxes, const Complex2x2 &t_net);

// ---- kit -------------------------------------------------------------------

struct LineSegment
{
    double length;
    LineValues line;
};

// Two-port standard: a cascade of line segments or explicit S-parameters.
struct TwoPortModel
{
    std::vector<LineSegment> segments;
    std::vector<Complex2x2> s_data; // used when non-empty, one per frequency
    double z_ref = 50.0;

    static TwoPortModel line(double length, const LineValues &line);
    static TwoPortModel cascade(std::vector<LineSegment> segments);
    static TwoPortModel from_s(std::vector<Complex2x2> s);

    Complex2x2 s_parameters(std::size_t index, double f) const;
};

struct StandardsKit
{
    std::vector<OnePortModel> oneports; // labels are the model names
    std::string match_label = "match";
    TwoPortModel network;
    std::optional<TwoPortModel> dut;
    CascadePort cascade_port = CascadePort::A;

    // Throws ModelSyntaxError / InvalidArgument.
    void validate() const;
};

struct SyntheticTruth
{
    std::vector<ErrorBoxSet> boxes;
    std::vector<double> theta;                // free parameters of the kit, packed order
    std::vector<std::vector<cplx>> rho;       // per one-port standard, per frequency
    std::vector<cplx> match_rho;
    std::vector<Complex2x2> net_s;
    std::vector<Complex2x2> dut_s;            // empty without a DUT
};

struct SyntheticSession
{
    MeasurementSession session;
    SyntheticTruth truth;
};

// theta_true fills the kit's free slots (empty when none are free).
SyntheticSession generate_session(const StandardsKit &kit, const ErrorBoxSpec &boxes,
                                  std::span<const double> frequencies, std::span<const double> theta_true,
                                  std::size_t threads = 1);

// Evenly spaced axis, n >= 2 points (n = 1 gives {start}).
std::vector<double> linear_axis(double start, double stop, std::size_t n);

// ---- metrics and noise ------------------------------------------------------

struct RelativeError
{
    double value = 0.0;
    bool absolute = false; // reference was zero; value is the absolute error
};

RelativeError relative_error(cplx estimate, cplx truth);
// Largest entrywise relative error of two matrices.
double max_relative_error(const Complex2x2 &estimate, const Complex2x2 &truth);

// Circular complex Gaussian noise with E|n|^2 = sigma^2 on every raw
// reflection and on the S-parameters of the two-port measurements.
MeasurementSession add_noise(const MeasurementSession &session, double sigma, std::uint64_t seed);

} // namespace srm

#endif
