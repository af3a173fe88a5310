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

#include "manifest.hpp"

#include "errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace srm
{

using nlohmann::json;

std::optional<MatchMode> parse_match_mode(std::string_view text)
{
    if (text == "ideal")
        return MatchMode::Ideal;
    if (text == "model-file")
        return MatchMode::ModelFile;
    if (text == "fit")
        return MatchMode::Fit;
    return std::nullopt;
}

std::string_view to_string(MatchMode mode)
{
    switch (mode)
    {
    case MatchMode::Ideal: return "ideal";
    case MatchMode::ModelFile: return "model-file";
    case MatchMode::Fit: return "fit";
    }
    return "fit";
}

DEConfig FitSettings::de_config(std::size_t threads) const
{
    DEConfig c(seed);
    c.population = population;
    c.mutation_min = mutation_min;
    c.mutation_max = mutation_max;
    c.crossover = crossover;
    c.max_generations = max_generations;
    c.tolerance = tolerance;
    c.abs_tolerance = abs_tolerance;
    c.threads = threads;
    return c;
}

std::filesystem::path Manifest::resolve(const std::filesystem::path &p) const
{
    return p.is_absolute() ? p : base_dir / p;
}

std::optional<std::size_t> Manifest::model_index(std::string_view name) const
{
    for (std::size_t i = 0; i < models.size(); ++i)
        if (models[i].name() == name)
            return i;
    return std::nullopt;
}

StandardsKit Manifest::kit() const
{
    if (!synth)
        throw Error(ErrorKind::MissingRole, "synth");
    StandardsKit k;
    k.oneports = models;
    k.match_label = match_label;
    k.network = synth->network;
    k.dut = synth->dut;
    k.cascade_port = cascade_port;
    return k;
}

namespace
{

[[noreturn]] void syntax(const std::string &what) { throw Error(ErrorKind::ParseError, "manifest: " + what); }

const json &require(const json &obj, const char *key, const std::string &where)
{
    if (!obj.is_object() || !obj.contains(key))
        syntax(where + ": missing '" + key + "'");
    return obj.at(key);
}

double number(const json &v, const std::string &where)
{
    if (!v.is_number())
        syntax(where + ": expected a number");
    return v.get<double>();
}

std::string text(const json &v, const std::string &where)
{
    if (!v.is_string())
        syntax(where + ": expected a string");
    return v.get<std::string>();
}

double number_or(const json &obj, const char *key, double fallback, const std::string &where)
{
    return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

// param := number | { "value": v, "bounds": [lo, hi], "log": bool, "free": bool }
Param parse_param(const json &v, const std::string &where)
{
    if (v.is_number())
        return Param::fixed(v.get<double>());
    if (!v.is_object())
        throw Error(ErrorKind::ModelSyntaxError, where + ": parameter must be a number or an object");
    Param p;
    if (!v.contains("value") || !v.at("value").is_number())
        throw Error(ErrorKind::ModelSyntaxError, where + ": parameter object needs a numeric 'value'");
    p.value = v.at("value").get<double>();
    if (v.contains("bounds"))
    {
        const json &b = v.at("bounds");
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
            throw Error(ErrorKind::ModelSyntaxError, where + ": 'bounds' must be [lower, upper]");
        p.lower = b[0].get<double>();
        p.upper = b[1].get<double>();
        p.free = true;
        if (!(p.lower < p.upper))
            throw Error(ErrorKind::ModelSyntaxError, where + ": bounds need lower < upper");
    }
    if (v.contains("free"))
    {
        if (!v.at("free").is_boolean())
            throw Error(ErrorKind::ModelSyntaxError, where + ": 'free' must be a boolean");
        const bool free = v.at("free").get<bool>();
        if (free && !v.contains("bounds"))
            throw Error(ErrorKind::ModelSyntaxError, where + ": a free parameter needs 'bounds'");
        p.free = free;
    }
    if (v.contains("log"))
    {
        if (!v.at("log").is_boolean())
            throw Error(ErrorKind::ModelSyntaxError, where + ": 'log' must be a boolean");
        p.log_scale = v.at("log").get<bool>();
    }
    return p;
}

std::vector<Param> parse_poly(const json &obj, const char *key, const std::string &where)
{
    std::vector<Param> out;
    if (!obj.contains(key))
        return out;
    const json &v = obj.at(key);
    if (v.is_array())
    {
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(parse_param(v[i], where + "." + key + "[" + std::to_string(i) + "]"));
    }
    else
    {
        out.push_back(parse_param(v, where + "." + key));
    }
    return out;
}

Param param_or(const json &obj, const char *key, double fallback, const std::string &where)
{
    return obj.contains(key) ? parse_param(obj.at(key), where + "." + key) : Param::fixed(fallback);
}

LineParams parse_line_params(const json &obj, const std::string &where)
{
    LineParams p;
    p.er_eff = param_or(obj, "er_eff", 1.0, where);
    p.tan_delta = param_or(obj, "tan_delta", 0.0, where);
    p.alpha_skin = param_or(obj, "alpha_skin", 0.0, where);
    p.zc0 = param_or(obj, "zc0", 50.0, where);
    p.zc_slope = param_or(obj, "zc_slope", 0.0, where);
    return p;
}

OnePortModel parse_model(const json &m, double z_ref_default)
{
    if (!m.is_object())
        throw Error(ErrorKind::ModelSyntaxError, "model entry must be an object");
    if (!m.contains("name") || !m.at("name").is_string())
        throw Error(ErrorKind::ModelSyntaxError, "model needs a string 'name'");
    const std::string name = m.at("name").get<std::string>();
    double z_ref = z_ref_default;
    if (m.contains("z_ref"))
    {
        if (!m.at("z_ref").is_number())
            throw Error(ErrorKind::ModelSyntaxError, "model '" + name + "': z_ref must be a number");
        z_ref = m.at("z_ref").get<double>();
    }
    OnePortModel model(name, z_ref);

    const json elements = m.contains("elements") ? m.at("elements") : json::array();
    if (!elements.is_array())
        throw Error(ErrorKind::ModelSyntaxError, "model '" + name + "': 'elements' must be an array");
    for (std::size_t i = 0; i < elements.size(); ++i)
    {
        const json &e = elements[i];
        const std::string where = "model '" + name + "' element " + std::to_string(i);
        try
        {
            if (!e.is_object() || !e.contains("kind") || !e.at("kind").is_string())
                throw Error(ErrorKind::ModelSyntaxError, "element needs a string 'kind'");
            const std::string kind = e.at("kind").get<std::string>();
            const std::string label =
                e.contains("label") && e.at("label").is_string() ? e.at("label").get<std::string>() : "e" + std::to_string(i);
            if (kind == "series")
                model.add_series(label, param_or(e, "R", 0.0, label), parse_poly(e, "L", label));
            else if (kind == "shunt")
                model.add_shunt(label, param_or(e, "G", 0.0, label), parse_poly(e, "C", label));
            else if (kind == "line")
            {
                if (!e.contains("length_m") || !e.at("length_m").is_number())
                    throw Error(ErrorKind::ModelSyntaxError, "line needs a numeric 'length_m'");
                model.add_line(label, e.at("length_m").get<double>(), parse_line_params(e, label));
            }
            else if (kind == "series_rc")
                model.add_series_rc(label, param_or(e, "R", 0.0, label), param_or(e, "C", 0.0, label),
                                    parse_poly(e, "L", label));
            else
                throw Error(ErrorKind::ModelSyntaxError, "unknown element kind '" + kind + "'");
        }
        catch (const Error &err)
        {
            throw Error(ErrorKind::ModelSyntaxError, where + ": " + err.what());
        }
    }

    if (!m.contains("termination") || !m.at("termination").is_object())
        throw Error(ErrorKind::ModelSyntaxError,
                    "model '" + name + "' element " + std::to_string(elements.size()) + ": missing termination");
    const json &t = m.at("termination");
    const std::string tkind = t.contains("kind") && t.at("kind").is_string() ? t.at("kind").get<std::string>() : "";
    const std::string twhere = "model '" + name + "' element " + std::to_string(elements.size());
    if (tkind == "resistor")
    {
        if (!t.contains("R"))
            throw Error(ErrorKind::ModelSyntaxError, twhere + ": resistor termination needs 'R'");
        try
        {
            model.terminate_resistor(parse_param(t.at("R"), "termination.R"));
        }
        catch (const Error &err)
        {
            throw Error(ErrorKind::ModelSyntaxError, twhere + ": " + err.what());
        }
    }
    else if (tkind == "short")
        model.terminate_short();
    else if (tkind == "open")
        model.terminate_open();
    else
        throw Error(ErrorKind::ModelSyntaxError, twhere + ": termination kind must be resistor, short or open");

    model.validate();
    return model;
}

std::vector<double> parse_frequency(const json &f)
{
    if (f.contains("list_hz"))
    {
        const json &l = f.at("list_hz");
        if (!l.is_array() || l.empty())
            syntax("frequency.list_hz must be a non-empty array");
        std::vector<double> out;
        for (const auto &v : l)
            out.push_back(number(v, "frequency.list_hz"));
        for (std::size_t i = 1; i < out.size(); ++i)
            if (!(out[i] > out[i - 1]))
                throw Error(ErrorKind::NonMonotonicFrequency, "manifest frequency list must be strictly increasing");
        return out;
    }
    const double start = number(require(f, "start_hz", "frequency"), "frequency.start_hz");
    const double stop = number(require(f, "stop_hz", "frequency"), "frequency.stop_hz");
    const json &pts = require(f, "points", "frequency");
    if (!pts.is_number_integer() || pts.get<long long>() < 1)
        syntax("frequency.points must be a positive integer");
    const auto n = static_cast<std::size_t>(pts.get<long long>());
    if (!(start > 0.0) || (n > 1 && !(stop > start)))
        syntax("frequency needs 0 < start_hz < stop_hz");
    return linear_axis(start, stop, n);
}

LineValues parse_line_values(const json &obj, const std::string &where)
{
    LineValues v;
    v.er_eff = number_or(obj, "er_eff", v.er_eff, where);
    v.tan_delta = number_or(obj, "tan_delta", v.tan_delta, where);
    v.alpha_skin = number_or(obj, "alpha_skin", v.alpha_skin, where);
    v.zc0 = number_or(obj, "zc0", v.zc0, where);
    v.zc_slope = number_or(obj, "zc_slope", v.zc_slope, where);
    if (!(v.er_eff >= 1.0) || v.tan_delta < 0.0 || v.alpha_skin < 0.0 || !(v.zc0 > 0.0))
        syntax(where + ": line needs er_eff >= 1, non-negative losses and zc0 > 0");
    return v;
}

TwoPortModel parse_two_port(const json &v, const Manifest &m, const std::string &where)
{
    if (!v.is_object())
        syntax(where + " must be an object");
    TwoPortModel out;
    out.z_ref = m.z_ref;
    if (v.contains("file"))
    {
        const TouchstoneData d = read_touchstone(m.resolve(text(v.at("file"), where + ".file")));
        out.s_data = d.s_matrices();
        return out;
    }
    const json &segs = require(v, "segments", where);
    if (!segs.is_array() || segs.empty())
        syntax(where + ".segments must be a non-empty array");
    for (std::size_t i = 0; i < segs.size(); ++i)
    {
        const std::string w = where + ".segments[" + std::to_string(i) + "]";
        const double len = number(require(segs[i], "length_m", w), w + ".length_m");
        if (!(len > 0.0))
            syntax(w + ": length_m must be positive");
        out.segments.push_back({len, parse_line_values(segs[i], w)});
    }
    return out;
}

ErrorBoxSpec parse_boxes(const json &v, const Manifest &m)
{
    const std::string mode = text(require(v, "mode", "synth.boxes"), "synth.boxes.mode");
    if (mode == "identity")
        return ErrorBoxSpec::identity();
    if (mode == "random_smooth")
    {
        RandomSmoothSpec s;
        const json &seed = require(v, "seed", "synth.boxes");
        if (!seed.is_number_unsigned())
            syntax("synth.boxes.seed must be a non-negative integer");
        s.seed = seed.get<std::uint64_t>();
        s.reflection_cap = number_or(v, "reflection_cap", s.reflection_cap, "synth.boxes");
        s.ripple_cap = number_or(v, "ripple_cap", s.ripple_cap, "synth.boxes");
        return ErrorBoxSpec::random_smooth(s);
    }
    if (mode == "explicit")
    {
        const auto a = read_touchstone(m.resolve(text(require(v, "a", "synth.boxes"), "synth.boxes.a"))).s_matrices();
        const auto b = read_touchstone(m.resolve(text(require(v, "b", "synth.boxes"), "synth.boxes.b"))).s_matrices();
        if (a.size() != b.size())
            throw Error(ErrorKind::AxisMismatch, "explicit box files have different lengths");
        std::vector<ErrorBoxSet> boxes(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            boxes[i].a = s_to_t(a[i]);
            boxes[i].b = s_to_t(b[i]);
            boxes[i].k = 1.0;
        }
        return ErrorBoxSpec::explicit_boxes(std::move(boxes));
    }
    syntax("synth.boxes.mode must be identity, random_smooth or explicit");
}

std::uint64_t unsigned_or(const json &obj, const char *key, std::uint64_t fallback, const std::string &where)
{
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_number_unsigned())
        syntax(where + "." + key + " must be a non-negative integer");
    return obj.at(key).get<std::uint64_t>();
}

bool bool_or(const json &obj, const char *key, bool fallback, const std::string &where)
{
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_boolean())
        syntax(where + "." + key + " must be a boolean");
    return obj.at(key).get<bool>();
}

FrequencyUnit parse_unit(const std::string &u)
{
    if (u == "Hz") return FrequencyUnit::Hz;
    if (u == "kHz") return FrequencyUnit::kHz;
    if (u == "MHz") return FrequencyUnit::MHz;
    if (u == "GHz") return FrequencyUnit::GHz;
    syntax("unknown frequency unit '" + u + "'");
}

} // namespace

OnePortModel parse_model_json(std::string_view json_text, double z_ref)
{
    json j;
    try
    {
        j = json::parse(json_text);
    }
    catch (const json::exception &e)
    {
        throw Error(ErrorKind::ParseError, std::string("model: ") + e.what());
    }
    return parse_model(j, z_ref);
}

Manifest parse_manifest(std::string_view json_text, const std::filesystem::path &base_dir)
{
    json j;
    try
    {
        j = json::parse(json_text);
    }
    catch (const json::exception &e)
    {
        throw Error(ErrorKind::ParseError, std::string("manifest: ") + e.what());
    }
    if (!j.is_object())
        syntax("top level must be an object");

    Manifest m;
    m.base_dir = base_dir;
    try
    {
        m.z_ref = number_or(j, "reference_impedance_ohm", 50.0, "manifest");
        if (!(m.z_ref > 0.0))
            syntax("reference_impedance_ohm must be positive");
        if (j.contains("frequency"))
            m.frequencies = parse_frequency(j.at("frequency"));
        if (j.contains("match_label"))
            m.match_label = text(j.at("match_label"), "match_label");
        if (j.contains("cascade_port"))
        {
            const std::string cp = text(j.at("cascade_port"), "cascade_port");
            if (cp == "A")
                m.cascade_port = CascadePort::A;
            else if (cp == "B")
                m.cascade_port = CascadePort::B;
            else
                syntax("cascade_port must be \"A\" or \"B\"");
        }
        if (j.contains("models"))
        {
            const json &models = j.at("models");
            if (!models.is_array())
                syntax("models must be an array");
            for (const auto &mj : models)
            {
                OnePortModel model = parse_model(mj, m.z_ref);
                if (m.model_index(model.name()))
                    throw Error(ErrorKind::ModelSyntaxError, "duplicate model name '" + model.name() + "'");
                m.models.push_back(std::move(model));
            }
        }

        if (j.contains("measurements"))
        {
            const json &ms = j.at("measurements");
            MeasurementFiles files;
            if (ms.contains("oneports"))
            {
                for (const auto &o : ms.at("oneports"))
                {
                    OnePortFiles of;
                    of.label = text(require(o, "label", "oneports"), "oneports.label");
                    of.port_a = text(require(o, "port_a", "oneports"), "oneports.port_a");
                    of.port_b = text(require(o, "port_b", "oneports"), "oneports.port_b");
                    if (o.contains("nominal"))
                    {
                        const json &n = o.at("nominal");
                        if (!n.is_array() || n.size() != 2)
                            syntax("oneports.nominal must be [re, im]");
                        of.nominal = cplx(number(n[0], "nominal"), number(n[1], "nominal"));
                    }
                    files.oneports.push_back(std::move(of));
                }
            }
            if (ms.contains("network_loads"))
            {
                for (const auto &o : ms.at("network_loads"))
                    files.network_loads.push_back({text(require(o, "label", "network_loads"), "network_loads.label"),
                                                   text(require(o, "file", "network_loads"), "network_loads.file")});
            }
            if (ms.contains("net"))
                files.net = text(ms.at("net"), "measurements.net");
            if (ms.contains("dut"))
                files.dut = text(ms.at("dut"), "measurements.dut");
            m.measurements = std::move(files);
        }

        if (j.contains("calibration"))
        {
            const json &c = j.at("calibration");
            if (c.contains("match_mode"))
            {
                const auto mode = parse_match_mode(text(c.at("match_mode"), "calibration.match_mode"));
                if (!mode)
                    syntax("calibration.match_mode must be ideal, model-file or fit");
                m.calibration.match_mode = *mode;
            }
            if (c.contains("match_definition"))
            {
                const json &d = c.at("match_definition");
                m.calibration.match_definition_a = text(require(d, "port_a", "match_definition"), "port_a");
                m.calibration.match_definition_b = text(require(d, "port_b", "match_definition"), "port_b");
            }
            m.calibration.tolerate_failures = bool_or(c, "tolerate_failures", true, "calibration");
        }

        if (j.contains("fit"))
        {
            const json &f = j.at("fit");
            FitSettings &s = m.fit;
            if (f.contains("symmetry"))
            {
                const std::string sym = text(f.at("symmetry"), "fit.symmetry");
                if (sym != "symmetric" && sym != "asymmetric")
                    syntax("fit.symmetry must be symmetric or asymmetric");
                s.symmetric = sym == "symmetric";
            }
            if (f.contains("standards"))
            {
                for (const auto &l : f.at("standards"))
                    s.standards.push_back(text(l, "fit.standards"));
            }
            s.seed = unsigned_or(f, "seed", s.seed, "fit");
            s.population = unsigned_or(f, "population", s.population, "fit");
            s.max_generations = unsigned_or(f, "max_generations", s.max_generations, "fit");
            s.tolerance = number_or(f, "tolerance", s.tolerance, "fit");
            s.abs_tolerance = number_or(f, "abs_tolerance", s.abs_tolerance, "fit");
            s.crossover = number_or(f, "crossover", s.crossover, "fit");
            if (f.contains("mutation"))
            {
                const json &mu = f.at("mutation");
                if (!mu.is_array() || mu.size() != 2)
                    syntax("fit.mutation must be [min, max]");
                s.mutation_min = number(mu[0], "fit.mutation");
                s.mutation_max = number(mu[1], "fit.mutation");
            }
        }

        if (j.contains("truth"))
            m.truth = text(j.at("truth"), "truth");
        if (j.contains("synth"))
        {
            const json &sj = j.at("synth");
            SynthSettings s;
            s.boxes = sj.contains("boxes") ? parse_boxes(sj.at("boxes"), m) : ErrorBoxSpec::identity();
            s.network = parse_two_port(require(sj, "network", "synth"), m, "synth.network");
            if (sj.contains("dut"))
                s.dut = parse_two_port(sj.at("dut"), m, "synth.dut");
            if (sj.contains("theta"))
            {
                std::vector<double> th;
                for (const auto &v : sj.at("theta"))
                    th.push_back(number(v, "synth.theta"));
                s.theta = std::move(th);
            }
            if (sj.contains("noise"))
            {
                const json &n = sj.at("noise");
                s.noise_sigma = number_or(n, "sigma", 0.0, "synth.noise");
                s.noise_seed = unsigned_or(n, "seed", 1, "synth.noise");
                if (!(s.noise_sigma >= 0.0))
                    syntax("synth.noise.sigma must be non-negative");
            }
            if (sj.contains("touchstone_unit"))
                s.unit = parse_unit(text(sj.at("touchstone_unit"), "synth.touchstone_unit"));
            m.synth = std::move(s);
        }
    }
    catch (const json::exception &e)
    {
        syntax(e.what());
    }
    return m;
}

Manifest read_manifest(const std::filesystem::path &path)
{
    const std::string text = read_text_file(path);
    return parse_manifest(text, path.parent_path());
}

namespace
{

void check_axis(const std::vector<double> &reference, const TouchstoneData &d, const std::filesystem::path &file)
{
    if (d.size() != reference.size())
        throw Error(ErrorKind::AxisMismatch, file.string() + ": " + std::to_string(d.size()) + " points, expected " +
                                                 std::to_string(reference.size()));
    for (std::size_t i = 0; i < reference.size(); ++i)
        if (std::abs(d.frequency_hz(i) - reference[i]) > 1.0)
            throw Error(ErrorKind::AxisMismatch, file.string() + ": point " + std::to_string(i) + " is " +
                                                     std::to_string(d.frequency_hz(i)) + " Hz, expected " +
                                                     std::to_string(reference[i]) + " Hz");
}

} // namespace

cplx dc_reflection(const OnePortModel &model) { return model.reflection(model.stored_values(), 0.0); }

LoadedSession load_session(Manifest manifest)
{
    if (!manifest.measurements)
        throw Error(ErrorKind::MissingRole, "measurements");
    const MeasurementFiles &files = *manifest.measurements;
    if (!files.net)
        throw Error(ErrorKind::MissingRole, "net");

    LoadedSession out;
    MeasurementSession &s = out.session;
    const auto net_path = manifest.resolve(*files.net);
    const TouchstoneData net = read_touchstone(net_path);
    const std::vector<double> axis = manifest.frequencies ? *manifest.frequencies : net.frequencies_hz();
    check_axis(axis, net, net_path);
    s.frequencies = axis;
    for (const auto &m : net.s_matrices())
        s.net.push_back(s_to_t(m));

    if (files.dut)
    {
        const auto p = manifest.resolve(*files.dut);
        const TouchstoneData d = read_touchstone(p);
        check_axis(axis, d, p);
        for (const auto &m : d.s_matrices())
            s.dut.push_back(s_to_t(m));
    }

    auto load_one = [&](const std::filesystem::path &rel) {
        const auto p = manifest.resolve(rel);
        const TouchstoneData d = read_touchstone(p);
        check_axis(axis, d, p);
        return d.reflection();
    };

    for (const auto &o : files.oneports)
    {
        OnePortStandard st;
        st.label = o.label;
        st.gamma_a = load_one(o.port_a);
        st.gamma_b = load_one(o.port_b);
        st.nominal = o.nominal;
        if (!st.nominal)
            if (const auto idx = manifest.model_index(o.label))
                st.nominal = dc_reflection(manifest.models[*idx]);
        s.oneports.push_back(std::move(st));
    }
    if (std::none_of(s.oneports.begin(), s.oneports.end(),
                     [&](const OnePortStandard &o) { return o.label == manifest.match_label; }))
        throw Error(ErrorKind::MissingRole, manifest.match_label);

    for (const auto &nl : files.network_loads)
    {
        NetworkLoadStandard st;
        st.label = nl.label;
        st.gamma_n = load_one(nl.file);
        const auto it = std::find_if(s.oneports.begin(), s.oneports.end(),
                                     [&](const OnePortStandard &o) { return o.label == nl.label; });
        if (it == s.oneports.end())
            throw Error(ErrorKind::MissingRole, "oneport '" + nl.label + "' for network load");
        st.gamma_other = manifest.cascade_port == CascadePort::A ? it->gamma_b : it->gamma_a;
        s.network_loads.push_back(std::move(st));
    }
    s.match_label = manifest.match_label;
    s.cascade_port = manifest.cascade_port;
    s.validate();
    out.manifest = std::move(manifest);
    return out;
}

LoadedSession load_session(const std::filesystem::path &manifest_path)
{
    return load_session(read_manifest(manifest_path));
}

} // namespace srm
