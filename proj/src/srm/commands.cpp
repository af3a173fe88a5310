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

#include "commands.hpp"

#include "errors.hpp"
#include "synth_bench.hpp"
#include "touchstone.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace srm
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class Fn>
CommandOutcome guarded(const char *name, const CommandContext &ctx, Fn &&fn)
{
    CommandOutcome out;
    try
    {
        out = fn();
    }
    catch (const Error &e)
    {
        out.exit_code = static_cast<int>(category(e.kind()));
        out.message = e.what();
    }
    catch (const fs::filesystem_error &e)
    {
        out.exit_code = 3;
        out.message = std::string("Io: ") + e.what();
    }
    catch (const std::bad_alloc &)
    {
        out.exit_code = 2;
        out.message = "out of memory";
    }
    catch (const std::exception &e)
    {
        out.exit_code = 1;
        out.message = e.what();
    }
    if (out.exit_code != 0)
    {
        ctx.emit(LogLevel::Error, std::string(name) + ": " + out.message);
        if (out.summary.empty())
            out.summary = json{{"command", name}, {"exit_code", out.exit_code}, {"error", out.message}}.dump();
    }
    return out;
}

void ensure_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorKind::Io, "cannot create directory '" + dir.string() + "': " + ec.message());
}

json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

json matrix_json(const Complex2x2 &m)
{
    return json::array({m.q11.real(), m.q11.imag(), m.q12.real(), m.q12.imag(), m.q21.real(), m.q21.imag(),
                        m.q22.real(), m.q22.imag()});
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
        out.back().pop_back();
    return out;
}

std::vector<std::string> split_lines(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        const std::size_t eol = text.find('\n', pos);
        std::string line(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            out.push_back(std::move(line));
        if (eol == std::string_view::npos)
            break;
        pos = eol + 1;
    }
    return out;
}

double csv_number(const std::string &token, std::size_t line)
{
    double v = 0.0;
    const char *first = token.data();
    const char *last = token.data() + token.size();
    if (first != last && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw Error(ErrorKind::ParseError, "CSV line " + std::to_string(line) + ": invalid number '" + token + "'");
    return v;
}

std::vector<std::string> touchstone_header(std::string_view what, std::optional<std::uint64_t> seed)
{
    std::vector<std::string> h{"srmcal " + std::string(kVersion) + " " + std::string(what)};
    if (seed)
        h.push_back("seed " + std::to_string(*seed));
    return h;
}

std::vector<double> free_values(const std::vector<OnePortModel> &models)
{
    std::vector<double> t;
    for (const auto &m : models)
        for (std::size_t s : m.free_slots())
            t.push_back(m.slots()[s].param.value);
    return t;
}

std::vector<std::string> free_names(const std::vector<OnePortModel> &models)
{
    std::vector<std::string> names;
    std::size_t total = 0;
    for (const auto &m : models)
        total += m.free_count();
    if (total == 0)
        return names;
    const ParamVector packed = pack_free_parameters(models);
    for (const auto &e : packed.entries())
        names.push_back(e.name);
    return names;
}

json read_json_file(const fs::path &p)
{
    const std::string text = read_text_file(p);
    try
    {
        return json::parse(text);
    }
    catch (const json::exception &e)
    {
        throw Error(ErrorKind::ParseError, p.string() + ": " + e.what());
    }
}

std::string csv_line(const std::vector<std::string> &cells)
{
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i)
            out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

std::string quote_free(std::string s)
{
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

} // namespace

// ---- error terms ------------------------------------------------------------

std::string format_error_terms_csv(const CalibrationResult &result)
{
    std::string out = "frequency_hz";
    for (const char *box : {"a", "b"})
        for (const char *e : {"11", "12", "21", "22"})
            out += std::string(",") + box + e + "_re," + box + e + "_im";
    out += ",k_re,k_im,status\n";
    for (std::size_t i = 0; i < result.frequencies.size(); ++i)
    {
        const ErrorBoxSet &b = result.boxes[i];
        const FrequencyDiagnostics &d = result.diagnostics[i];
        std::vector<std::string> cells{num(result.frequencies[i])};
        for (const Complex2x2 *m : {&b.a, &b.b})
            for (cplx v : {m->q11, m->q12, m->q21, m->q22})
            {
                cells.push_back(num(v.real()));
                cells.push_back(num(v.imag()));
            }
        cells.push_back(num(b.k.real()));
        cells.push_back(num(b.k.imag()));
        cells.push_back(d.failed ? (d.interpolated ? "interpolated" : "failed") : "ok");
        out += csv_line(cells);
    }
    return out;
}

CalibrationResult parse_error_terms_csv(std::string_view text)
{
    const auto lines = split_lines(text);
    if (lines.empty() || split_csv_line(lines[0]).size() != 20 || split_csv_line(lines[0])[0] != "frequency_hz")
        throw Error(ErrorKind::ParseError, "error-terms CSV: unexpected header");
    CalibrationResult r;
    for (std::size_t l = 1; l < lines.size(); ++l)
    {
        const auto c = split_csv_line(lines[l]);
        if (c.size() != 20)
            throw Error(ErrorKind::ParseError, "error-terms CSV line " + std::to_string(l + 1) + ": expected 20 fields");
        std::vector<double> v;
        for (std::size_t k = 0; k < 19; ++k)
            v.push_back(csv_number(c[k], l + 1));
        ErrorBoxSet b;
        b.a = {{v[1], v[2]}, {v[3], v[4]}, {v[5], v[6]}, {v[7], v[8]}};
        b.b = {{v[9], v[10]}, {v[11], v[12]}, {v[13], v[14]}, {v[15], v[16]}};
        b.k = {v[17], v[18]};
        FrequencyDiagnostics d;
        if (c[19] == "failed")
            d.failed = true;
        else if (c[19] == "interpolated")
            d.failed = d.interpolated = true;
        else if (c[19] != "ok")
            throw Error(ErrorKind::ParseError, "error-terms CSV line " + std::to_string(l + 1) + ": bad status");
        if (!r.frequencies.empty() && !(v[0] > r.frequencies.back()))
            throw Error(ErrorKind::NonMonotonicFrequency, "error-terms CSV frequencies must increase");
        r.frequencies.push_back(v[0]);
        r.boxes.push_back(b);
        r.diagnostics.push_back(d);
        r.rows_a.push_back({});
        r.rows_b.push_back({});
    }
    return r;
}

// ---- fitting -----------------------------------------------------------------

std::vector<cplx> ideal_match(const LoadedSession &loaded)
{
    const Manifest &m = loaded.manifest;
    cplx rho = 0.0;
    if (const auto idx = m.model_index(m.match_label))
        rho = dc_reflection(m.models[*idx]);
    return std::vector<cplx>(loaded.session.size(), rho);
}

FitOutcome run_fit(const LoadedSession &loaded, const DEConfig &config)
{
    const Manifest &man = loaded.manifest;
    const MeasurementSession &session = loaded.session;
    std::vector<std::string> labels = man.fit.standards;
    if (labels.empty())
        for (const auto &o : session.oneports)
            if (man.model_index(o.label))
                labels.push_back(o.label);
    if (std::find(labels.begin(), labels.end(), man.match_label) == labels.end())
        throw Error(ErrorKind::MissingRole, "fit standards must include the match '" + man.match_label + "'");

    std::vector<OnePortModel> models;
    std::vector<const OnePortStandard *> data;
    std::size_t match_index = 0;
    for (const auto &l : labels)
    {
        const auto idx = man.model_index(l);
        if (!idx)
            throw Error(ErrorKind::MissingRole, "model for fit standard '" + l + "'");
        const auto it = std::find_if(session.oneports.begin(), session.oneports.end(),
                                     [&](const OnePortStandard &o) { return o.label == l; });
        if (it == session.oneports.end())
            throw Error(ErrorKind::MissingRole, "measurement for fit standard '" + l + "'");
        if (l == man.match_label)
            match_index = models.size();
        models.push_back(man.models[*idx]);
        data.push_back(&*it);
    }

    const std::vector<cplx> ref = ideal_match(loaded);
    CalibrationOptions opt;
    opt.tolerate_failures = man.calibration.tolerate_failures;
    opt.threads = config.threads;
    const EigenStage stage = prepare_eigen_stage(session, ref, ref, opt);

    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < session.size(); ++i)
        if (!stage.diagnostics[i].failed)
            used.push_back(i);
    if (used.empty())
        throw Error(ErrorKind::RankCollapse, "no frequency point survived the eigen stage");

    std::vector<double> freqs;
    for (std::size_t i : used)
        freqs.push_back(session.frequencies[i]);

    auto make_term = [&](FitPort port) {
        PortTerm t;
        t.port = port;
        for (std::size_t i : used)
            t.rows.push_back(port == FitPort::A ? stage.rows_a[i] : stage.rows_b[i]);
        for (std::size_t s = 0; s < data.size(); ++s)
        {
            FitStandard fs_;
            fs_.model = s;
            for (std::size_t i : used)
                fs_.gamma.push_back(port == FitPort::A ? data[s]->gamma_a[i] : data[s]->gamma_b[i]);
            t.standards.push_back(std::move(fs_));
        }
        return t;
    };

    auto full_axis_match = [&](const FitProblem &p, const FitReport &r) {
        const OnePortModel &m = p.models()[p.match_model()];
        const auto values = m.resolve(p.params().slice(r.theta, p.match_model()));
        std::vector<cplx> out;
        for (double f : session.frequencies)
            out.push_back(m.reflection(values, f));
        return out;
    };

    // Spread sigma_4 of the used points back over the full axis.
    auto spread = [&](FitReport &r) {
        for (auto &per_term : r.final_sigma4)
        {
            std::vector<double> full(session.size(), std::numeric_limits<double>::quiet_NaN());
            for (std::size_t k = 0; k < used.size(); ++k)
                full[used[k]] = per_term[k];
            per_term = std::move(full);
        }
    };

    FitOutcome out;
    if (man.fit.symmetric)
    {
        FitProblem p(freqs, models, {make_term(FitPort::A), make_term(FitPort::B)}, match_index);
        FitReport r = fit(p, config);
        spread(r);
        for (const auto &e : p.params().entries())
            out.names.push_back(e.name);
        const auto match = full_axis_match(p, r);
        out.match = {match, match};
        out.reports.push_back(std::move(r));
    }
    else
    {
        for (FitPort port : {FitPort::A, FitPort::B})
        {
            FitProblem p(freqs, models, {make_term(port)}, match_index);
            FitReport r = fit(p, config);
            spread(r);
            if (out.names.empty())
                for (const auto &e : p.params().entries())
                    out.names.push_back(e.name);
            out.match.push_back(full_axis_match(p, r));
            out.reports.push_back(std::move(r));
        }
    }
    return out;
}

// ---- synth ---------------------------------------------------------------------

CommandOutcome cmd_synth(const fs::path &manifest_path, const fs::path &out_dir, std::optional<std::uint64_t> seed,
                         const CommandContext &ctx)
{
    return guarded("synth", ctx, [&]() -> CommandOutcome {
        Manifest m = read_manifest(manifest_path);
        if (!m.synth)
            throw Error(ErrorKind::MissingRole, "synth");
        if (!m.frequencies)
            throw Error(ErrorKind::MissingRole, "frequency");
        SynthSettings &s = *m.synth;
        if (seed)
        {
            s.boxes.smooth.seed = *seed;
            s.noise_seed = *seed;
        }
        const StandardsKit kit = m.kit();
        const std::vector<double> theta = s.theta ? *s.theta : free_values(m.models);
        const std::vector<std::string> names = free_names(m.models);
        const auto &freqs = *m.frequencies;
        for (const auto &mdl : m.models)
            if (mdl.name().find_first_of("/\\") != std::string::npos)
                throw Error(ErrorKind::InvalidArgument, "model names must not contain path separators");

        ctx.emit(LogLevel::Info, "generating " + std::to_string(freqs.size()) + " points, " +
                                     std::to_string(kit.oneports.size()) + " one-port standards");
        SyntheticSession ss = generate_session(kit, s.boxes, freqs, theta, ctx.threads);
        const MeasurementSession session = add_noise(ss.session, s.noise_sigma, s.noise_seed);

        const std::uint64_t box_seed = s.boxes.mode == ErrorBoxSpec::Mode::RandomSmooth ? s.boxes.smooth.seed : 0;
        const auto header = touchstone_header("synthetic measurement", box_seed);
        ensure_dir(out_dir);
        ensure_dir(out_dir / "truth");

        auto write1 = [&](const fs::path &p, const std::vector<cplx> &v, const std::vector<std::string> &h) {
            write_touchstone(p, TouchstoneData::one_port(freqs, v, s.unit), {DataFormat::RI, h});
        };
        auto write2 = [&](const fs::path &p, const std::vector<Complex2x2> &t_or_s, bool is_t,
                          const std::vector<std::string> &h) {
            std::vector<Complex2x2> sm;
            for (const auto &x : t_or_s)
                sm.push_back(is_t ? t_to_s(x) : x);
            write_touchstone(p, TouchstoneData::two_port(freqs, sm, s.unit), {DataFormat::RI, h});
        };

        json measurements;
        measurements["oneports"] = json::array();
        measurements["network_loads"] = json::array();
        for (std::size_t k = 0; k < session.oneports.size(); ++k)
        {
            const auto &o = session.oneports[k];
            write1(out_dir / (o.label + "_a.s1p"), o.gamma_a, header);
            write1(out_dir / (o.label + "_b.s1p"), o.gamma_b, header);
            measurements["oneports"].push_back(
                {{"label", o.label}, {"port_a", o.label + "_a.s1p"}, {"port_b", o.label + "_b.s1p"}});
            const auto &nl = session.network_loads[k];
            write1(out_dir / (nl.label + "_net.s1p"), nl.gamma_n, header);
            measurements["network_loads"].push_back({{"label", nl.label}, {"file", nl.label + "_net.s1p"}});
        }
        write2(out_dir / "net.s2p", session.net, true, header);
        measurements["net"] = "net.s2p";
        if (!session.dut.empty())
        {
            write2(out_dir / "dut.s2p", session.dut, true, header);
            measurements["dut"] = "dut.s2p";
        }

        // Ground truth.
        const auto truth_header = touchstone_header("ground truth", box_seed);
        write1(out_dir / "truth" / "match_true.s1p", ss.truth.match_rho, truth_header);
        if (!ss.truth.dut_s.empty())
            write2(out_dir / "truth" / "dut_true.s2p", ss.truth.dut_s, false, truth_header);
        write2(out_dir / "truth" / "net_true.s2p", ss.truth.net_s, false, truth_header);

        json truth;
        truth["generator"] = "srmcal " + std::string(kVersion);
        truth["box_mode"] = s.boxes.mode == ErrorBoxSpec::Mode::Identity   ? "identity"
                            : s.boxes.mode == ErrorBoxSpec::Mode::Explicit ? "explicit"
                                                                           : "random_smooth";
        truth["box_seed"] = box_seed;
        truth["noise_sigma"] = s.noise_sigma;
        truth["noise_seed"] = s.noise_seed;
        truth["theta"] = json::array();
        for (std::size_t k = 0; k < names.size(); ++k)
            truth["theta"].push_back({{"name", names[k]}, {"value", theta[k]}});
        truth["boxes"] = json::array();
        for (std::size_t i = 0; i < freqs.size(); ++i)
        {
            const auto &b = ss.truth.boxes[i];
            truth["boxes"].push_back(
                {{"frequency_hz", freqs[i]}, {"a", matrix_json(b.a)}, {"b", matrix_json(b.b)}, {"k", complex_json(b.k)}});
        }
        write_file_atomic(out_dir / "truth" / "truth.json", truth.dump(1) + "\n");

        // Calibration manifest pointing at the generated files.
        json session_json = read_json_file(manifest_path);
        session_json.erase("synth");
        session_json["frequency"] = {{"list_hz", freqs}};
        session_json["measurements"] = measurements;
        session_json["truth"] = "truth/truth.json";
        write_file_atomic(out_dir / "session.json", session_json.dump(1) + "\n");

        CommandOutcome out;
        out.summary = json{{"command", "synth"},
                           {"exit_code", 0},
                           {"points", freqs.size()},
                           {"standards", session.oneports.size()},
                           {"box_seed", box_seed},
                           {"free_parameters", names.size()},
                           {"manifest", (out_dir / "session.json").string()}}
                          .dump();
        return out;
    });
}

// ---- calibrate -------------------------------------------------------------------

namespace
{

std::string diagnostics_csv(const CalibrationResult &r, const std::vector<std::vector<double>> &fit_sigma4)
{
    std::string out = "frequency_hz,h_sigma3,h_sigma4,h_ill_conditioned,f_sigma3,f_sigma4,f_ill_conditioned,"
                      "a_sigma3,a_residual,b_sigma3,b_residual,eigen_separation,assignment_by_continuity,"
                      "assignment_unresolved,k_ambiguous,failed,interpolated";
    for (std::size_t t = 0; t < fit_sigma4.size(); ++t)
        out += fit_sigma4.size() == 1 ? ",fit_sigma4" : (t == 0 ? ",fit_sigma4_a" : ",fit_sigma4_b");
    out += ",failure\n";
    for (std::size_t i = 0; i < r.frequencies.size(); ++i)
    {
        const auto &d = r.diagnostics[i];
        std::vector<std::string> c{num(r.frequencies[i]), num(d.h_sigma3),      num(d.h_sigma4),
                                   d.h_ill_conditioned ? "1" : "0",
                                   num(d.f_sigma3),      num(d.f_sigma4),       d.f_ill_conditioned ? "1" : "0",
                                   num(d.a_sigma3),      num(d.a_residual),     num(d.b_sigma3),
                                   num(d.b_residual),    num(d.eigen_separation),
                                   d.assignment_by_continuity ? "1" : "0",
                                   d.assignment_unresolved ? "1" : "0",
                                   d.k_ambiguous ? "1" : "0",
                                   d.failed ? "1" : "0",
                                   d.interpolated ? "1" : "0"};
        for (const auto &s4 : fit_sigma4)
            c.push_back(num(s4[i]));
        c.push_back(quote_free(d.failure));
        out += csv_line(c);
    }
    return out;
}

std::string trace_csv(const std::vector<std::string> &names, const FitReport &r)
{
    std::vector<std::string> head{"generation", "best_objective"};
    head.insert(head.end(), names.begin(), names.end());
    std::string out = csv_line(head);
    for (std::size_t g = 0; g < r.trace.size(); ++g)
    {
        std::vector<std::string> c{std::to_string(g), num(r.trace[g])};
        for (double v : r.theta_trace[g])
            c.push_back(num(v));
        out += csv_line(c);
    }
    return out;
}

} // namespace

MatchDefinition resolve_match(const LoadedSession &loaded, MatchMode mode, const CommandContext &ctx)
{
    const Manifest &man = loaded.manifest;
    const MeasurementSession &session = loaded.session;
    const std::size_t n = session.size();
    MatchDefinition def;
    switch (mode)
    {
    case MatchMode::Ideal:
        def.match_a = def.match_b = ideal_match(loaded);
        break;
    case MatchMode::ModelFile:
        if (man.calibration.match_definition_a)
        {
            auto load = [&](const fs::path &rel) {
                const auto p = man.resolve(rel);
                const TouchstoneData d = read_touchstone(p);
                if (d.size() != n)
                    throw Error(ErrorKind::AxisMismatch, p.string() + ": point count differs from the session");
                for (std::size_t i = 0; i < n; ++i)
                    if (std::abs(d.frequency_hz(i) - session.frequencies[i]) > 1.0)
                        throw Error(ErrorKind::AxisMismatch, p.string() + ": frequency axis differs at point " +
                                                                 std::to_string(i));
                return d.reflection();
            };
            def.match_a = load(*man.calibration.match_definition_a);
            def.match_b = load(*man.calibration.match_definition_b);
        }
        else
        {
            const auto idx = man.model_index(man.match_label);
            if (!idx)
                throw Error(ErrorKind::MissingRole, "match model '" + man.match_label + "'");
            const OnePortModel &mm = man.models[*idx];
            const auto values = mm.stored_values();
            for (double f : session.frequencies)
                def.match_a.push_back(mm.reflection(values, f));
            def.match_b = def.match_a;
        }
        break;
    case MatchMode::Fit: {
        const DEConfig cfg = man.fit.de_config(ctx.threads);
        ctx.emit(LogLevel::Info, "fitting match model (seed " + std::to_string(man.fit.seed) + ", " +
                                     (man.fit.symmetric ? "symmetric" : "asymmetric") + ")");
        def.fitted = run_fit(loaded, cfg);
        def.match_a = def.fitted->match[0];
        def.match_b = def.fitted->match[1];
        for (std::size_t k = 0; k < def.fitted->reports.size(); ++k)
            ctx.emit(LogLevel::Info, "fit " + std::to_string(k) + ": objective " +
                                         num(def.fitted->reports[k].trace.back()) + " after " +
                                         std::to_string(def.fitted->reports[k].generations) + " generations");
        break;
    }
    }
    return def;
}

CommandOutcome cmd_calibrate(const fs::path &manifest_path, std::optional<MatchMode> mode_override,
                             const fs::path &out_dir, std::optional<std::uint64_t> seed, const CommandContext &ctx)
{
    return guarded("calibrate", ctx, [&]() -> CommandOutcome {
        LoadedSession loaded = load_session(manifest_path);
        Manifest &man = loaded.manifest;
        if (seed)
            man.fit.seed = *seed;
        const MatchMode mode = mode_override ? *mode_override : man.calibration.match_mode;
        const MeasurementSession &session = loaded.session;
        const std::size_t n = session.size();
        ctx.emit(LogLevel::Info, "calibrating " + std::to_string(n) + " points, match mode " +
                                     std::string(to_string(mode)));

        MatchDefinition def = resolve_match(loaded, mode, ctx);
        const std::vector<cplx> &match_a = def.match_a;
        const std::vector<cplx> &match_b = def.match_b;
        const std::optional<FitOutcome> &fitted = def.fitted;

        CalibrationOptions opt;
        opt.tolerate_failures = man.calibration.tolerate_failures;
        opt.threads = ctx.threads;
        CalibrationResult result = calibrate_session(session, match_a, match_b, opt);
        const std::vector<std::size_t> gaps = interpolate_failures(result);

        ensure_dir(out_dir);
        write_file_atomic(out_dir / "error_terms.csv", format_error_terms_csv(result));
        std::vector<std::vector<double>> fit_sigma4;
        if (fitted)
            for (const auto &r : fitted->reports)
                for (const auto &s4 : r.final_sigma4)
                    fit_sigma4.push_back(s4);
        write_file_atomic(out_dir / "diagnostics.csv", diagnostics_csv(result, fit_sigma4));

        const auto header = touchstone_header(std::string("match definition (") + std::string(to_string(mode)) + ")",
                                              mode == MatchMode::Fit ? std::optional(man.fit.seed) : std::nullopt);
        write_touchstone(out_dir / "match_a.s1p", TouchstoneData::one_port(session.frequencies, match_a), {DataFormat::RI, header});
        write_touchstone(out_dir / "match_b.s1p", TouchstoneData::one_port(session.frequencies, match_b), {DataFormat::RI, header});

        json summary{{"command", "calibrate"}, {"match_mode", std::string(to_string(mode))}, {"points", n}};
        std::size_t failed = 0, interpolated = 0;
        for (const auto &d : result.diagnostics)
        {
            failed += d.failed ? 1 : 0;
            interpolated += d.interpolated ? 1 : 0;
        }
        summary["failed_points"] = failed;
        summary["interpolated_points"] = interpolated;
        summary["gaps"] = gaps;

        if (fitted)
        {
            std::optional<json> truth;
            if (man.truth && fs::exists(man.resolve(*man.truth)))
                truth = read_json_file(man.resolve(*man.truth));
            const bool sym = fitted->reports.size() == 1;
            std::string theta_csv = "port,name,value\n";
            json fits = json::array();
            for (std::size_t k = 0; k < fitted->reports.size(); ++k)
            {
                const FitReport &r = fitted->reports[k];
                const std::string port = sym ? "AB" : (k == 0 ? "A" : "B");
                const std::string stem = sym ? "fit_trace" : (k == 0 ? "fit_trace_a" : "fit_trace_b");
                write_file_atomic(out_dir / (stem + ".csv"), trace_csv(fitted->names, r));
                if (truth && truth->contains("theta"))
                    write_file_atomic(out_dir / (stem + ".truth.json"),
                                      json{{"theta", truth->at("theta")}}.dump(1) + "\n");
                json th = json::object();
                for (std::size_t p = 0; p < fitted->names.size(); ++p)
                {
                    theta_csv += csv_line({port, fitted->names[p], num(r.theta[p])});
                    th[fitted->names[p]] = r.theta[p];
                }
                fits.push_back({{"port", port},
                                {"objective", r.trace.back()},
                                {"generations", r.generations},
                                {"evaluations", r.evaluations},
                                {"converged", r.converged},
                                {"theta", th}});
            }
            write_file_atomic(out_dir / "theta.csv", theta_csv);
            summary["fit"] = fits;
        }

        if (!session.dut.empty())
        {
            std::vector<TwoPortRecord> raw;
            for (std::size_t i = 0; i < n; ++i)
                raw.push_back({session.frequencies[i], session.dut[i], Representation::T});
            const auto corrected = apply_correction(result, raw);
            write_touchstone(out_dir / "dut_corrected.s2p", TouchstoneData::two_port(session.frequencies, corrected),
                             {DataFormat::RI, touchstone_header("corrected DUT", std::nullopt)});
        }

        CommandOutcome out;
        if (!gaps.empty())
        {
            std::string gap_csv = "index,frequency_hz,failure\n";
            for (std::size_t g : gaps)
                gap_csv += csv_line({std::to_string(g), num(session.frequencies[g]),
                                     quote_free(result.diagnostics[g].failure)});
            write_file_atomic(out_dir / "gaps.csv", gap_csv);
            out.exit_code = 2;
            out.message = "RankCollapse: " + std::to_string(gaps.size()) +
                          " frequency point(s) failed without a neighbour to interpolate (see gaps.csv)";
            ctx.emit(LogLevel::Error, out.message);
        }
        summary["exit_code"] = out.exit_code;
        write_file_atomic(out_dir / "summary.json", summary.dump(1) + "\n");
        out.summary = summary.dump();
        return out;
    });
}

// ---- apply ---------------------------------------------------------------------------

CommandOutcome cmd_apply(const fs::path &terms_dir, const fs::path &raw_dut, const fs::path &out_file,
                         const CommandContext &ctx)
{
    return guarded("apply", ctx, [&]() -> CommandOutcome {
        const CalibrationResult terms = parse_error_terms_csv(read_text_file(terms_dir / "error_terms.csv"));
        const TouchstoneData raw = read_touchstone(raw_dut);
        if (raw.size() != terms.frequencies.size())
            throw Error(ErrorKind::AxisMismatch, raw_dut.string() + " has " + std::to_string(raw.size()) +
                                                     " points, the error terms have " +
                                                     std::to_string(terms.frequencies.size()));
        std::vector<TwoPortRecord> recs;
        const auto s = raw.s_matrices();
        for (std::size_t i = 0; i < raw.size(); ++i)
        {
            if (std::abs(raw.frequency_hz(i) - terms.frequencies[i]) > 1.0)
                throw Error(ErrorKind::AxisMismatch, raw_dut.string() + ": point " + std::to_string(i) +
                                                         " does not match the error-term axis");
            recs.push_back({raw.frequency_hz(i), s[i], Representation::S});
        }
        const auto corrected = apply_correction(terms, recs);
        TouchstoneData out_data = raw;
        out_data.comments.clear();
        for (std::size_t i = 0; i < corrected.size(); ++i)
            out_data.values[i] = {corrected[i].q11, corrected[i].q21, corrected[i].q12, corrected[i].q22};
        if (out_file.has_parent_path())
            ensure_dir(out_file.parent_path());
        write_touchstone(out_file, out_data, {DataFormat::RI, touchstone_header("corrected DUT", std::nullopt)});
        CommandOutcome out;
        out.summary = json{{"command", "apply"}, {"exit_code", 0}, {"points", corrected.size()},
                           {"output", out_file.string()}}
                          .dump();
        ctx.emit(LogLevel::Info, "corrected " + std::to_string(corrected.size()) + " points");
        return out;
    });
}

// ---- compare -------------------------------------------------------------------------

CommandOutcome cmd_compare(const fs::path &file_a, const fs::path &file_b, const fs::path &out_csv,
                           const CommandContext &ctx)
{
    return guarded("compare", ctx, [&]() -> CommandOutcome {
        const TouchstoneData a = read_touchstone(file_a);
        const TouchstoneData b = read_touchstone(file_b);
        if (a.ports != b.ports)
            throw Error(ErrorKind::AxisMismatch, "files have different port counts");
        if (a.size() != b.size())
            throw Error(ErrorKind::AxisMismatch, "files have different numbers of points");
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::abs(a.frequency_hz(i) - b.frequency_hz(i)) > 1.0)
                throw Error(ErrorKind::AxisMismatch, "frequency axes differ at point " + std::to_string(i));

        const std::vector<std::string> params =
            a.ports == 1 ? std::vector<std::string>{"s11"} : std::vector<std::string>{"s11", "s21", "s12", "s22"};
        std::vector<std::string> head{"frequency_hz"};
        for (const auto &p : params)
            head.push_back("rel_" + p);
        head.push_back("zero_reference");
        std::string csv = csv_line(head);

        std::vector<double> max_e(params.size(), 0.0), sum_e(params.size(), 0.0);
        std::size_t zero_refs = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            std::vector<std::string> c{num(b.frequency_hz(i))};
            bool zero = false;
            for (std::size_t p = 0; p < params.size(); ++p)
            {
                const RelativeError e = relative_error(a.values[i][p], b.values[i][p]);
                zero = zero || e.absolute;
                max_e[p] = std::max(max_e[p], e.value);
                sum_e[p] += e.value;
                c.push_back(num(e.value));
            }
            zero_refs += zero ? 1 : 0;
            c.push_back(zero ? "1" : "0");
            csv += csv_line(c);
        }
        if (out_csv.has_parent_path())
            ensure_dir(out_csv.parent_path());
        write_file_atomic(out_csv, csv);

        json summary{{"command", "compare"}, {"exit_code", 0}, {"points", a.size()}, {"zero_reference_points", zero_refs}};
        json stats = json::object();
        for (std::size_t p = 0; p < params.size(); ++p)
            stats[params[p]] = {{"max", max_e[p]}, {"mean", a.size() ? sum_e[p] / static_cast<double>(a.size()) : 0.0}};
        summary["relative_error"] = stats;
        CommandOutcome out;
        out.summary = summary.dump();
        return out;
    });
}

// ---- fit report -------------------------------------------------------------------------

CommandOutcome cmd_fit_report(const fs::path &trace_path, const fs::path &out_csv, const CommandContext &ctx)
{
    return guarded("fit-report", ctx, [&]() -> CommandOutcome {
        const auto lines = split_lines(read_text_file(trace_path));
        if (lines.empty())
            throw Error(ErrorKind::ParseError, trace_path.string() + ": empty trace");
        const auto head = split_csv_line(lines[0]);
        if (head.size() < 2 || head[0] != "generation" || head[1] != "best_objective")
            throw Error(ErrorKind::ParseError, trace_path.string() + ": not a fit trace");
        const std::vector<std::string> names(head.begin() + 2, head.end());

        fs::path sidecar = trace_path;
        sidecar.replace_extension(".truth.json");
        std::map<std::string, double> truth;
        const bool has_truth = fs::exists(sidecar);
        if (has_truth)
        {
            const json t = read_json_file(sidecar);
            if (!t.contains("theta") || !t.at("theta").is_array())
                throw Error(ErrorKind::ParseError, sidecar.string() + ": missing theta array");
            for (const auto &e : t.at("theta"))
                truth[e.at("name").get<std::string>()] = e.at("value").get<double>();
        }
        std::vector<std::size_t> truth_cols;
        std::vector<std::string> out_head{"generation", "best_objective"};
        for (std::size_t k = 0; k < names.size(); ++k)
            if (truth.count(names[k]))
            {
                truth_cols.push_back(k);
                out_head.push_back("rel_err_" + names[k]);
            }
        std::string csv = csv_line(out_head);

        bool monotone = true;
        double prev = std::numeric_limits<double>::infinity();
        double last_obj = 0.0;
        std::vector<double> last_err(truth_cols.size(), 0.0);
        for (std::size_t l = 1; l < lines.size(); ++l)
        {
            const auto c = split_csv_line(lines[l]);
            if (c.size() != head.size())
                throw Error(ErrorKind::ParseError, trace_path.string() + ": line " + std::to_string(l + 1) +
                                                       " has the wrong number of fields");
            const double obj = csv_number(c[1], l + 1);
            monotone = monotone && obj <= prev;
            prev = obj;
            last_obj = obj;
            std::vector<std::string> row{c[0], num(obj)};
            for (std::size_t k = 0; k < truth_cols.size(); ++k)
            {
                const std::size_t col = truth_cols[k];
                const double v = csv_number(c[2 + col], l + 1);
                const double e = relative_error(v, truth[names[col]]).value;
                last_err[k] = e;
                row.push_back(num(e));
            }
            csv += csv_line(row);
        }
        if (out_csv.has_parent_path())
            ensure_dir(out_csv.parent_path());
        write_file_atomic(out_csv, csv);

        json summary{{"command", "fit-report"},
                     {"exit_code", 0},
                     {"generations", lines.size() - 1},
                     {"final_objective", last_obj},
                     {"monotone", monotone},
                     {"truth", has_truth}};
        if (!truth_cols.empty())
            summary["max_final_relative_error"] = *std::max_element(last_err.begin(), last_err.end());
        if (!has_truth)
            ctx.emit(LogLevel::Info, "no truth sidecar; parameter-error columns omitted");
        CommandOutcome out;
        out.summary = summary.dump();
        return out;
    });
}

} // namespace srm
