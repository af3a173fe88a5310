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

// Declarative one-port equivalent circuits.
//
// A model is a ladder read from the reference plane towards the
// termination. Every numeric quantity lives in a named slot that is either
// fixed or free; free slots carry bounds and are the entries of the fitted
// parameter vector. Lumped values use SI units and polynomial frequency
// dependence in Hz (L(f) = L0 + L1 f + ...).

#ifndef SRM_CIRCUIT_MODEL_HPP
#define SRM_CIRCUIT_MODEL_HPP

#include "rf_core.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace srm
{

inline constexpr double kSpeedOfLight = 299792458.0;

struct Param
{
    double value = 0.0;
    bool free = false;
    double lower = 0.0;
    double upper = 0.0;
    bool log_scale = false;

    static Param fixed(double v) { return {v, false, 0.0, 0.0, false}; }
    static Param bounded(double v, double lo, double hi) { return {v, true, lo, hi, false}; }
};

// Substitute lossy-line description: gamma(f) = alpha_skin sqrt(f)
// + j (2 pi f / c0) sqrt(er_eff) (1 - j tan_delta / 2), Zc(f) = zc0 + zc_slope f.
struct LineValues
{
    double er_eff = 1.0;
    double tan_delta = 0.0;
    double alpha_skin = 0.0; // Np / (m sqrt(Hz))
    double zc0 = 50.0;       // Ohm
    double zc_slope = 0.0;   // Ohm / Hz
};

struct LineParams
{
    Param er_eff = Param::fixed(1.0);
    Param tan_delta = Param::fixed(0.0);
    Param alpha_skin = Param::fixed(0.0);
    Param zc0 = Param::fixed(50.0);
    Param zc_slope = Param::fixed(0.0);
};

struct PropagationTerms
{
    cplx gamma; // 1/m
    cplx zc;    // Ohm
};

PropagationTerms line_gamma_zc(const LineValues &line, double f);

// ABCD matrix of a uniform line section.
Complex2x2 line_abcd(const LineValues &line, double length, double f);

// ABCD -> S for a real reference impedance on both ports.
Complex2x2 abcd_to_s(const Complex2x2 &abcd, double z_ref);

enum class ElementKind
{
    Series,        // R + j w L(f)
    Shunt,         // G + j w C(f)
    Line,          // line segment of fixed length
    SeriesRcBlock  // (R || C) in series with L(f)
};

enum class TerminationKind
{
    Resistor,
    Short,
    Open
};

class OnePortModel
{
public:
    struct Slot
    {
        std::string name;
        Param param;
    };

    struct Element
    {
        ElementKind kind;
        std::string label;
        double length = 0.0;           // lines only, always fixed
        std::vector<std::size_t> slot; // see slot layout in circuit_model.cpp
    };

    explicit OnePortModel(std::string name, double z_ref = 50.0);

    OnePortModel &add_series(std::string label, Param r, std::vector<Param> l_poly);
    OnePortModel &add_shunt(std::string label, Param g, std::vector<Param> c_poly);
    OnePortModel &add_line(std::string label, double length, const LineParams &line);
    OnePortModel &add_series_rc(std::string label, Param r, Param c, std::vector<Param> l_poly);
    OnePortModel &terminate_resistor(Param r_dc);
    OnePortModel &terminate_short();
    OnePortModel &terminate_open();

    const std::string &name() const { return name_; }
    double z_ref() const { return z_ref_; }
    TerminationKind termination() const { return termination_; }
    const std::vector<Element> &elements() const { return elements_; }
    std::span<const Slot> slots() const { return slots_; }

    // Slot lookup by its short name ("<label>.<field>"); throws InvalidArgument.
    Param &param(std::string_view short_name);
    const Param &param(std::string_view short_name) const;

    std::vector<std::size_t> free_slots() const;
    std::size_t free_count() const;

    // All slot values with the free ones replaced by theta (model order).
    // Throws OutOfBounds for entries outside their bounds.
    std::vector<double> resolve(std::span<const double> theta) const;
    // Same substitution without the bounds check.
    std::vector<double> resolve_unchecked(std::span<const double> theta) const;
    std::vector<double> stored_values() const;
    void assign_free(std::span<const double> theta);

    // Homogeneous input impedance (num, den) with Z_in = num / den.
    std::pair<cplx, cplx> input_impedance(std::span<const double> slot_values, double f) const;
    cplx reflection(std::span<const double> slot_values, double f) const;

    // Throws ModelSyntaxError naming the offending element.
    void validate() const;

private:
    std::size_t add_slot(const std::string &label, const std::string &field, const Param &p);
    std::vector<double> substitute(std::span<const double> theta, bool check) const;

    std::string name_;
    double z_ref_;
    std::vector<Slot> slots_;
    std::vector<Element> elements_;
    TerminationKind termination_ = TerminationKind::Open;
    std::size_t termination_slot_ = 0;
    bool terminated_ = false;
};

// rho(f; theta) w.r.t. the model reference impedance.
cplx evaluate_reflection(const OnePortModel &model, std::span<const double> theta, double f);
std::pair<cplx, cplx> input_impedance_homogeneous(const OnePortModel &model, std::span<const double> theta, double f);

// Ordered free parameters of a list of models: model order, then element
// order, then coefficient order.
class ParamVector
{
public:
    struct Entry
    {
        std::string name; // "<model>.<label>.<field>"
        std::size_t model;
        std::size_t slot;
        double lower;
        double upper;
        bool log_scale;
    };

    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry> &entries() const { return entries_; }
    // Values stored in the models at packing time.
    const std::vector<double> &values() const { return values_; }

    // Contiguous part of theta belonging to one model.
    std::span<const double> slice(std::span<const double> theta, std::size_t model) const;
    std::size_t model_offset(std::size_t model) const { return offsets_.at(model); }

    bool within_bounds(std::span<const double> theta) const;
    // Throws OutOfBounds.
    void check_bounds(std::span<const double> theta) const;

    // Writes theta into the free slots; fixed slots are untouched.
    void unpack(std::span<OnePortModel> models, std::span<const double> theta) const;

    friend ParamVector pack_free_parameters(std::span<const OnePortModel> models);

private:
    std::vector<Entry> entries_;
    std::vector<double> values_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> counts_;
};

// Throws NoFreeParameters when no model has a free slot.
ParamVector pack_free_parameters(std::span<const OnePortModel> models);

} // namespace srm

#endif
