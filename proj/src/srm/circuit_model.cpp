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

#include "circuit_model.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

// Slot layout per element kind:
//   Series        [R, L0, L1, ...]
//   Shunt         [G, C0, C1, ...]
//   Line          [er_eff, tan_delta, alpha_skin, zc0, zc_slope]
//   SeriesRcBlock [R, C, L0, L1, ...]

namespace srm
{

namespace
{
constexpr cplx j{0.0, 1.0};

double polynomial(std::span<const double> values, std::span<const std::size_t> idx, double f)
{
    // Horner over the coefficient slots.
    double acc = 0.0;
    for (auto it = idx.rbegin(); it != idx.rend(); ++it)
        acc = acc * f + values[*it];
    return acc;
}

void rescale(cplx &n, cplx &d)
{
    const double s = std::max(std::abs(n), std::abs(d));
    if (s > 0.0 && std::isfinite(s))
    {
        n /= s;
        d /= s;
    }
}

std::string element_error(const OnePortModel &m, std::size_t index, const std::string &what)
{
    return "model '" + m.name() + "' element " + std::to_string(index) + ": " + what;
}
} // namespace

PropagationTerms line_gamma_zc(const LineValues &line, double f)
{
    const double beta = 2.0 * std::numbers::pi * f / kSpeedOfLight * std::sqrt(line.er_eff);
    const cplx gamma = line.alpha_skin * std::sqrt(f) + j * beta * cplx(1.0, -0.5 * line.tan_delta);
    return {gamma, cplx(line.zc0 + line.zc_slope * f, 0.0)};
}

Complex2x2 line_abcd(const LineValues &line, double length, double f)
{
    const auto [gamma, zc] = line_gamma_zc(line, f);
    const cplx gl = gamma * length;
    const cplx ch = std::cosh(gl);
    const cplx sh = std::sinh(gl);
    return {ch, zc * sh, sh / zc, ch};
}

Complex2x2 abcd_to_s(const Complex2x2 &m, double z0)
{
    const cplx a = m.q11, b = m.q12, c = m.q21, d = m.q22;
    const cplx delta = a + b / z0 + c * z0 + d;
    return {(a + b / z0 - c * z0 - d) / delta, 2.0 * (a * d - b * c) / delta, 2.0 / delta,
            (-a + b / z0 - c * z0 + d) / delta};
}

OnePortModel::OnePortModel(std::string name, double z_ref) : name_(std::move(name)), z_ref_(z_ref) {}

std::size_t OnePortModel::add_slot(const std::string &label, const std::string &field, const Param &p)
{
    slots_.push_back({label + "." + field, p});
    return slots_.size() - 1;
}

OnePortModel &OnePortModel::add_series(std::string label, Param r, std::vector<Param> l_poly)
{
    Element e{ElementKind::Series, label, 0.0, {}};
    e.slot.push_back(add_slot(label, "R", r));
    for (std::size_t k = 0; k < l_poly.size(); ++k)
        e.slot.push_back(add_slot(label, "L" + std::to_string(k), l_poly[k]));
    elements_.push_back(std::move(e));
    return *this;
}

OnePortModel &OnePortModel::add_shunt(std::string label, Param g, std::vector<Param> c_poly)
{
    Element e{ElementKind::Shunt, label, 0.0, {}};
    e.slot.push_back(add_slot(label, "G", g));
    for (std::size_t k = 0; k < c_poly.size(); ++k)
        e.slot.push_back(add_slot(label, "C" + std::to_string(k), c_poly[k]));
    elements_.push_back(std::move(e));
    return *this;
}

OnePortModel &OnePortModel::add_line(std::string label, double length, const LineParams &line)
{
    Element e{ElementKind::Line, label, length, {}};
    e.slot.push_back(add_slot(label, "er_eff", line.er_eff));
    e.slot.push_back(add_slot(label, "tan_delta", line.tan_delta));
    e.slot.push_back(add_slot(label, "alpha_skin", line.alpha_skin));
    e.slot.push_back(add_slot(label, "zc0", line.zc0));
    e.slot.push_back(add_slot(label, "zc_slope", line.zc_slope));
    elements_.push_back(std::move(e));
    return *this;
}

OnePortModel &OnePortModel::add_series_rc(std::string label, Param r, Param c, std::vector<Param> l_poly)
{
    Element e{ElementKind::SeriesRcBlock, label, 0.0, {}};
    e.slot.push_back(add_slot(label, "R", r));
    e.slot.push_back(add_slot(label, "C", c));
    for (std::size_t k = 0; k < l_poly.size(); ++k)
        e.slot.push_back(add_slot(label, "L" + std::to_string(k), l_poly[k]));
    elements_.push_back(std::move(e));
    return *this;
}

OnePortModel &OnePortModel::terminate_resistor(Param r_dc)
{
    termination_ = TerminationKind::Resistor;
    termination_slot_ = add_slot("term", "R", r_dc);
    terminated_ = true;
    return *this;
}

OnePortModel &OnePortModel::terminate_short()
{
    termination_ = TerminationKind::Short;
    terminated_ = true;
    return *this;
}

OnePortModel &OnePortModel::terminate_open()
{
    termination_ = TerminationKind::Open;
    terminated_ = true;
    return *this;
}

Param &OnePortModel::param(std::string_view short_name)
{
    for (auto &s : slots_)
        if (s.name == short_name)
            return s.param;
    throw Error(ErrorKind::InvalidArgument, "model '" + name_ + "' has no slot '" + std::string(short_name) + "'");
}

const Param &OnePortModel::param(std::string_view short_name) const
{
    return const_cast<OnePortModel *>(this)->param(short_name);
}

std::vector<std::size_t> OnePortModel::free_slots() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < slots_.size(); ++i)
        if (slots_[i].param.free)
            out.push_back(i);
    return out;
}

std::size_t OnePortModel::free_count() const
{
    return static_cast<std::size_t>(
        std::count_if(slots_.begin(), slots_.end(), [](const Slot &s) { return s.param.free; }));
}

std::vector<double> OnePortModel::stored_values() const
{
    std::vector<double> v(slots_.size());
    for (std::size_t i = 0; i < slots_.size(); ++i)
        v[i] = slots_[i].param.value;
    return v;
}

std::vector<double> OnePortModel::resolve(std::span<const double> theta) const { return substitute(theta, true); }

std::vector<double> OnePortModel::resolve_unchecked(std::span<const double> theta) const
{
    return substitute(theta, false);
}

std::vector<double> OnePortModel::substitute(std::span<const double> theta, bool check) const
{
    std::vector<double> v = stored_values();
    std::size_t t = 0;
    for (std::size_t i = 0; i < slots_.size(); ++i)
    {
        const Param &p = slots_[i].param;
        if (!p.free)
            continue;
        if (t >= theta.size())
            throw Error(ErrorKind::InvalidArgument, "parameter slice shorter than the free-slot count of '" + name_ + "'");
        const double x = theta[t++];
        if (check && !(x >= p.lower && x <= p.upper))
            throw Error(ErrorKind::OutOfBounds, name_ + "." + slots_[i].name + " = " + std::to_string(x) + " outside [" +
                                                    std::to_string(p.lower) + ", " + std::to_string(p.upper) + "]");
        v[i] = x;
    }
    if (t != theta.size())
        throw Error(ErrorKind::InvalidArgument, "parameter slice longer than the free-slot count of '" + name_ + "'");
    return v;
}

void OnePortModel::assign_free(std::span<const double> theta)
{
    const auto values = resolve(theta);
    for (std::size_t i = 0; i < slots_.size(); ++i)
        slots_[i].param.value = values[i];
}

std::pair<cplx, cplx> OnePortModel::input_impedance(std::span<const double> v, double f) const
{
    cplx n, d;
    switch (termination_)
    {
    case TerminationKind::Resistor:
        n = v[termination_slot_];
        d = 1.0;
        break;
    case TerminationKind::Short:
        n = 0.0;
        d = 1.0;
        break;
    case TerminationKind::Open:
        n = 1.0;
        d = 0.0;
        break;
    }

    const double w = 2.0 * std::numbers::pi * f;
    for (auto it = elements_.rbegin(); it != elements_.rend(); ++it)
    {
        const Element &e = *it;
        const std::span<const std::size_t> idx(e.slot);
        switch (e.kind)
        {
        case ElementKind::Series: {
            const cplx z = v[idx[0]] + j * w * polynomial(v, idx.subspan(1), f);
            n += z * d;
            break;
        }
        case ElementKind::Shunt: {
            const cplx y = v[idx[0]] + j * w * polynomial(v, idx.subspan(1), f);
            d += y * n;
            break;
        }
        case ElementKind::Line: {
            const LineValues lv{v[idx[0]], v[idx[1]], v[idx[2]], v[idx[3]], v[idx[4]]};
            const Complex2x2 abcd = line_abcd(lv, e.length, f);
            const cplx n2 = abcd.q11 * n + abcd.q12 * d;
            const cplx d2 = abcd.q21 * n + abcd.q22 * d;
            n = n2;
            d = d2;
            break;
        }
        case ElementKind::SeriesRcBlock: {
            const double r = v[idx[0]];
            const double c = v[idx[1]];
            const cplx z = r / (1.0 + j * w * r * c) + j * w * polynomial(v, idx.subspan(2), f);
            n += z * d;
            break;
        }
        }
        rescale(n, d);
    }
    return {n, d};
}

cplx OnePortModel::reflection(std::span<const double> v, double f) const
{
    const auto [n, d] = input_impedance(v, f);
    return (n - z_ref_ * d) / (n + z_ref_ * d);
}

void OnePortModel::validate() const
{
    if (!terminated_)
        throw Error(ErrorKind::ModelSyntaxError, "model '" + name_ + "' has no termination");
    if (!(z_ref_ > 0.0) || !std::isfinite(z_ref_))
        throw Error(ErrorKind::ModelSyntaxError, "model '" + name_ + "' reference impedance must be positive");

    auto check_param = [&](std::size_t element, const Slot &s) {
        const Param &p = s.param;
        if (!std::isfinite(p.value))
            throw Error(ErrorKind::ModelSyntaxError, element_error(*this, element, s.name + " is not finite"));
        if (p.free)
        {
            if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || !(p.lower < p.upper))
                throw Error(ErrorKind::ModelSyntaxError,
                            element_error(*this, element, s.name + " needs finite bounds with lower < upper"));
            if (p.log_scale && !(p.lower > 0.0))
                throw Error(ErrorKind::ModelSyntaxError,
                            element_error(*this, element, s.name + " log-scaled bounds must be positive"));
        }
    };
    auto lowest = [](const Param &p) { return p.free ? p.lower : p.value; };

    for (std::size_t i = 0; i < elements_.size(); ++i)
    {
        const Element &e = elements_[i];
        for (std::size_t s : e.slot)
            check_param(i, slots_[s]);
        if (e.kind == ElementKind::Line)
        {
            if (!(e.length > 0.0) || !std::isfinite(e.length))
                throw Error(ErrorKind::ModelSyntaxError, element_error(*this, i, "line length must be positive"));
            if (lowest(slots_[e.slot[0]].param) < 1.0)
                throw Error(ErrorKind::ModelSyntaxError, element_error(*this, i, "er_eff must be >= 1"));
            if (lowest(slots_[e.slot[1]].param) < 0.0 || lowest(slots_[e.slot[2]].param) < 0.0)
                throw Error(ErrorKind::ModelSyntaxError, element_error(*this, i, "line losses must be >= 0"));
            if (!(lowest(slots_[e.slot[3]].param) > 0.0))
                throw Error(ErrorKind::ModelSyntaxError, element_error(*this, i, "zc0 must be > 0"));
        }
    }
    if (termination_ == TerminationKind::Resistor)
    {
        const Slot &s = slots_[termination_slot_];
        check_param(elements_.size(), s);
        if (!(lowest(s.param) > 0.0))
            throw Error(ErrorKind::ModelSyntaxError, element_error(*this, elements_.size(), "R_dc must be > 0"));
    }
}

cplx evaluate_reflection(const OnePortModel &model, std::span<const double> theta, double f)
{
    return model.reflection(model.resolve(theta), f);
}

std::pair<cplx, cplx> input_impedance_homogeneous(const OnePortModel &model, std::span<const double> theta, double f)
{
    return model.input_impedance(model.resolve(theta), f);
}

std::span<const double> ParamVector::slice(std::span<const double> theta, std::size_t model) const
{
    return theta.subspan(offsets_.at(model), counts_.at(model));
}

bool ParamVector::within_bounds(std::span<const double> theta) const
{
    if (theta.size() != entries_.size())
        return false;
    for (std::size_t i = 0; i < theta.size(); ++i)
        if (!(theta[i] >= entries_[i].lower && theta[i] <= entries_[i].upper))
            return false;
    return true;
}

void ParamVector::check_bounds(std::span<const double> theta) const
{
    if (theta.size() != entries_.size())
        throw Error(ErrorKind::InvalidArgument, "parameter vector has " + std::to_string(theta.size()) +
                                                    " entries, expected " + std::to_string(entries_.size()));
    for (std::size_t i = 0; i < theta.size(); ++i)
        if (!(theta[i] >= entries_[i].lower && theta[i] <= entries_[i].upper))
            throw Error(ErrorKind::OutOfBounds, entries_[i].name + " = " + std::to_string(theta[i]) + " outside bounds");
}

void ParamVector::unpack(std::span<OnePortModel> models, std::span<const double> theta) const
{
    check_bounds(theta);
    for (std::size_t m = 0; m < models.size() && m < offsets_.size(); ++m)
        models[m].assign_free(slice(theta, m));
}

ParamVector pack_free_parameters(std::span<const OnePortModel> models)
{
    ParamVector pv;
    for (std::size_t m = 0; m < models.size(); ++m)
    {
        pv.offsets_.push_back(pv.entries_.size());
        const auto slots = models[m].slots();
        std::size_t count = 0;
        for (std::size_t s = 0; s < slots.size(); ++s)
        {
            const Param &p = slots[s].param;
            if (!p.free)
                continue;
            pv.entries_.push_back({models[m].name() + "." + slots[s].name, m, s, p.lower, p.upper, p.log_scale});
            pv.values_.push_back(p.value);
            ++count;
        }
        pv.counts_.push_back(count);
    }
    if (pv.entries_.empty())
        throw Error(ErrorKind::NoFreeParameters, "no model declares a free parameter");
    return pv;
}

} // namespace srm
