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

#define SRMCAL_BUILDING 1
#include "srmcal/srmcal.h"

#include "srm/commands.hpp"
#include "srm/errors.hpp"
#include "srm/manifest.hpp"
#include "srm/rf_core.hpp"
#include "srm/srm_engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <thread>

struct srm_context
{
    std::size_t threads = 0;
    srm_log_fn log = nullptr;
    void *log_user = nullptr;
};

struct srm_session
{
    srm::LoadedSession loaded;
};

struct srm_calibration
{
    srm::CalibrationResult result;
};

namespace
{

thread_local std::string g_last_error;

srm_status fail(srm_status code, std::string message)
{
    g_last_error = std::move(message);
    return code;
}

srm_status ok()
{
    g_last_error.clear();
    return SRM_OK;
}

template <class Fn>
srm_status guard(Fn &&fn) noexcept
{
    try
    {
        return fn();
    }
    catch (const srm::Error &e)
    {
        return fail(static_cast<srm_status>(srm::category(e.kind())), e.what());
    }
    catch (const std::bad_alloc &)
    {
        return fail(SRM_ERR_NUMERICAL, "out of memory");
    }
    catch (const std::exception &e)
    {
        return fail(SRM_ERR_VALIDATION, e.what());
    }
    catch (...)
    {
        return fail(SRM_ERR_VALIDATION, "unknown error");
    }
}

std::size_t resolved_threads(const srm_context *ctx)
{
    const std::size_t t = ctx ? ctx->threads : 0;
    if (t != 0)
        return t;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

srm::CommandContext command_context(const srm_context *ctx)
{
    srm::CommandContext c;
    c.threads = resolved_threads(ctx);
    if (ctx && ctx->log)
    {
        srm_log_fn fn = ctx->log;
        void *user = ctx->log_user;
        c.log = [fn, user](srm::LogLevel level, const std::string &msg) {
            fn(static_cast<srm_log_level>(static_cast<int>(level)), msg.c_str(), user);
        };
    }
    return c;
}

char *dup_string(const std::string &s)
{
    char *p = static_cast<char *>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

srm_status finish(const srm::CommandOutcome &out, char **summary_json)
{
    if (summary_json)
        *summary_json = dup_string(out.summary);
    if (out.exit_code == 0)
        return ok();
    return fail(static_cast<srm_status>(out.exit_code), out.message);
}

std::optional<std::uint64_t> seed_arg(int has_seed, uint64_t seed)
{
    return has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt;
}

srm::Complex2x2 load_matrix(const double *p)
{
    return {{p[0], p[1]}, {p[2], p[3]}, {p[4], p[5]}, {p[6], p[7]}};
}

void store(srm::cplx v, double *p)
{
    p[0] = v.real();
    p[1] = v.imag();
}

void store_matrix(const srm::Complex2x2 &m, double *p)
{
    store(m.q11, p);
    store(m.q12, p + 2);
    store(m.q21, p + 4);
    store(m.q22, p + 6);
}

#define SRM_REQUIRE(cond, what)                                                                                        \
    do                                                                                                                 \
    {                                                                                                                  \
        if (!(cond))                                                                                                   \
            return fail(SRM_ERR_VALIDATION, std::string("InvalidArgument: ") + (what));                               \
    } while (0)

} // namespace

extern "C" {

const char *srm_version(void) { return srm::kVersion.data(); }

const char *srm_last_error(void) { return g_last_error.c_str(); }

void srm_string_free(char *s) { std::free(s); }

srm_status srm_context_create(srm_context **out)
{
    SRM_REQUIRE(out, "out is null");
    return guard([&] {
        *out = new srm_context();
        return ok();
    });
}

void srm_context_destroy(srm_context *ctx) { delete ctx; }

srm_status srm_context_set_threads(srm_context *ctx, size_t threads)
{
    SRM_REQUIRE(ctx, "context is null");
    ctx->threads = threads;
    return ok();
}

srm_status srm_context_set_log(srm_context *ctx, srm_log_fn fn, void *user)
{
    SRM_REQUIRE(ctx, "context is null");
    ctx->log = fn;
    ctx->log_user = user;
    return ok();
}

srm_status srm_cmd_synth(srm_context *ctx, const char *manifest, const char *out_dir, int has_seed, uint64_t seed,
                         char **summary_json)
{
    SRM_REQUIRE(manifest && out_dir, "manifest and out_dir are required");
    return guard([&] {
        return finish(srm::cmd_synth(manifest, out_dir, seed_arg(has_seed, seed), command_context(ctx)),
                      summary_json);
    });
}

srm_status srm_cmd_calibrate(srm_context *ctx, const char *manifest, const char *match_mode, const char *out_dir,
                             int has_seed, uint64_t seed, char **summary_json)
{
    SRM_REQUIRE(manifest && out_dir, "manifest and out_dir are required");
    std::optional<srm::MatchMode> mode;
    if (match_mode)
    {
        mode = srm::parse_match_mode(match_mode);
        SRM_REQUIRE(mode, std::string("unknown match mode '") + match_mode + "'");
    }
    return guard([&] {
        return finish(srm::cmd_calibrate(manifest, mode, out_dir, seed_arg(has_seed, seed), command_context(ctx)),
                      summary_json);
    });
}

srm_status srm_cmd_apply(srm_context *ctx, const char *terms_dir, const char *raw_dut, const char *out_file,
                         char **summary_json)
{
    SRM_REQUIRE(terms_dir && raw_dut && out_file, "terms_dir, raw_dut and out_file are required");
    return guard([&] { return finish(srm::cmd_apply(terms_dir, raw_dut, out_file, command_context(ctx)), summary_json); });
}

srm_status srm_cmd_compare(srm_context *ctx, const char *file_a, const char *file_b, const char *out_csv,
                           char **summary_json)
{
    SRM_REQUIRE(file_a && file_b && out_csv, "file_a, file_b and out_csv are required");
    return guard([&] { return finish(srm::cmd_compare(file_a, file_b, out_csv, command_context(ctx)), summary_json); });
}

srm_status srm_cmd_fit_report(srm_context *ctx, const char *trace_csv, const char *out_csv, char **summary_json)
{
    SRM_REQUIRE(trace_csv && out_csv, "trace_csv and out_csv are required");
    return guard([&] { return finish(srm::cmd_fit_report(trace_csv, out_csv, command_context(ctx)), summary_json); });
}

srm_status srm_session_load(const char *manifest, srm_session **out)
{
    SRM_REQUIRE(manifest && out, "manifest and out are required");
    *out = nullptr;
    return guard([&] {
        auto s = std::make_unique<srm_session>(srm_session{srm::load_session(manifest)});
        *out = s.release();
        return ok();
    });
}

void srm_session_free(srm_session *session) { delete session; }

size_t srm_session_size(const srm_session *session) { return session ? session->loaded.session.size() : 0; }

srm_status srm_session_frequencies(const srm_session *session, double *out, size_t capacity)
{
    SRM_REQUIRE(session && (out || capacity == 0), "session and out are required");
    const auto &f = session->loaded.session.frequencies;
    const std::size_t n = std::min(capacity, f.size());
    std::copy_n(f.begin(), n, out);
    return ok();
}

srm_status srm_calibrate(srm_context *ctx, const srm_session *session, const char *match_mode, srm_calibration **out)
{
    SRM_REQUIRE(session && out, "session and out are required");
    *out = nullptr;
    std::optional<srm::MatchMode> mode;
    if (match_mode)
    {
        mode = srm::parse_match_mode(match_mode);
        SRM_REQUIRE(mode, std::string("unknown match mode '") + match_mode + "'");
    }
    return guard([&] {
        const srm::CommandContext cc = command_context(ctx);
        const auto &loaded = session->loaded;
        const srm::MatchDefinition def =
            srm::resolve_match(loaded, mode ? *mode : loaded.manifest.calibration.match_mode, cc);
        srm::CalibrationOptions opt;
        opt.tolerate_failures = loaded.manifest.calibration.tolerate_failures;
        opt.threads = cc.threads;
        auto cal = std::make_unique<srm_calibration>();
        cal->result = srm::calibrate_session(loaded.session, def.match_a, def.match_b, opt);
        const auto gaps = srm::interpolate_failures(cal->result);
        *out = cal.release();
        if (!gaps.empty())
            return fail(SRM_ERR_NUMERICAL, "RankCollapse: " + std::to_string(gaps.size()) +
                                               " frequency point(s) failed without a neighbour to interpolate");
        return ok();
    });
}

void srm_calibration_free(srm_calibration *cal) { delete cal; }

size_t srm_calibration_size(const srm_calibration *cal) { return cal ? cal->result.frequencies.size() : 0; }

srm_status srm_calibration_error_terms(const srm_calibration *cal, size_t index, double *out)
{
    SRM_REQUIRE(cal && out, "calibration and out are required");
    SRM_REQUIRE(index < cal->result.frequencies.size(), "index out of range");
    const auto &b = cal->result.boxes[index];
    const auto &d = cal->result.diagnostics[index];
    store_matrix(b.a, out);
    store_matrix(b.b, out + 8);
    store(b.k, out + 16);
    out[18] = d.failed && !d.interpolated ? 2.0 : (d.interpolated ? 1.0 : 0.0);
    return ok();
}

srm_status srm_calibration_correct(const srm_calibration *cal, const double *s_raw, size_t count, double *s_out)
{
    SRM_REQUIRE(cal && s_raw && s_out, "calibration, s_raw and s_out are required");
    SRM_REQUIRE(count == cal->result.frequencies.size(), "count differs from the calibration size");
    return guard([&] {
        std::vector<srm::TwoPortRecord> raw(count);
        for (std::size_t i = 0; i < count; ++i)
            raw[i] = {cal->result.frequencies[i], load_matrix(s_raw + 8 * i), srm::Representation::S};
        const auto corrected = srm::apply_correction(cal->result, raw);
        for (std::size_t i = 0; i < count; ++i)
            store_matrix(corrected[i], s_out + 8 * i);
        return ok();
    });
}

srm_status srm_s_to_t(const double *s, double *t)
{
    SRM_REQUIRE(s && t, "s and t are required");
    return guard([&] {
        store_matrix(srm::s_to_t(load_matrix(s)), t);
        return ok();
    });
}

srm_status srm_t_to_s(const double *t, double *s)
{
    SRM_REQUIRE(s && t, "s and t are required");
    return guard([&] {
        store_matrix(srm::t_to_s(load_matrix(t)), s);
        return ok();
    });
}

} // extern "C"
