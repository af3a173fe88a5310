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

// srmcal command-line front end. Talks to the library only through the C API.

#include "srmcal/srmcal.h"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace
{

struct ContextDeleter
{
    void operator()(srm_context *c) const { srm_context_destroy(c); }
};
using ContextPtr = std::unique_ptr<srm_context, ContextDeleter>;

void log_sink(srm_log_level level, const char *message, void *)
{
    switch (level)
    {
    case SRM_LOG_DEBUG: spdlog::debug("{}", message); break;
    case SRM_LOG_INFO: spdlog::info("{}", message); break;
    case SRM_LOG_WARN: spdlog::warn("{}", message); break;
    case SRM_LOG_ERROR: spdlog::error("{}", message); break;
    }
}

std::size_t default_threads()
{
    if (const char *env = std::getenv("SRMCAL_THREADS"))
    {
        try
        {
            return static_cast<std::size_t>(std::stoul(env));
        }
        catch (const std::exception &)
        {
            spdlog::warn("ignoring SRMCAL_THREADS='{}'", env);
        }
    }
    return 0;
}

int report(srm_status status, char *summary)
{
    if (summary)
    {
        std::cout << summary << '\n';
        srm_string_free(summary);
    }
    if (status != SRM_OK)
        std::cerr << "srmcal: " << srm_last_error() << '\n';
    return static_cast<int>(status);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"srmcal: SRM two-port VNA calibration with match-model extraction"};
    app.set_version_flag("--version", std::string(srm_version()));
    app.require_subcommand(1);
    app.fallthrough();

    std::size_t threads = default_threads();
    std::string log_level = "info";
    app.add_option("--threads", threads, "Worker threads (0 = all cores; default from SRMCAL_THREADS)")
        ->capture_default_str();
    app.add_option("--log-level", log_level, "debug, info, warn or error")
        ->check(CLI::IsMember({"debug", "info", "warn", "error"}))
        ->capture_default_str();

    std::string manifest, out, match_mode;
    std::optional<std::uint64_t> seed;

    auto *synth = app.add_subcommand("synth", "Generate a synthetic measurement session");
    synth->add_option("--manifest", manifest, "Synthesis manifest (JSON)")->required();
    synth->add_option("--out", out, "Output directory")->required();
    synth->add_option("--seed", seed, "Overrides the box and noise seeds");

    auto *calibrate = app.add_subcommand("calibrate", "Solve error terms for a measurement session");
    calibrate->add_option("--manifest", manifest, "Session manifest (JSON)")->required();
    calibrate->add_option("--out", out, "Output directory")->required();
    calibrate->add_option("--match-mode", match_mode, "ideal, model-file or fit (default: manifest)")
        ->check(CLI::IsMember({"ideal", "model-file", "fit"}));
    calibrate->add_option("--seed", seed, "Overrides the fit seed");

    std::string terms_dir, raw;
    auto *apply = app.add_subcommand("apply", "Correct a raw two-port with stored error terms");
    apply->add_option("TERMS_DIR", terms_dir, "Directory holding error_terms.csv")->required();
    apply->add_option("RAW", raw, "Raw .s2p")->required();
    apply->add_option("--out", out, "Corrected .s2p")->required();

    std::string file_a, file_b;
    auto *compare = app.add_subcommand("compare", "Relative error between two Touchstone files");
    compare->add_option("A", file_a, "Touchstone file")->required();
    compare->add_option("B", file_b, "Reference Touchstone file")->required();
    compare->add_option("--out", out, "Output CSV")->required();

    std::string trace;
    auto *fit_report = app.add_subcommand("fit-report", "Summarise a fit trace");
    fit_report->add_option("TRACE", trace, "fit_trace.csv")->required();
    fit_report->add_option("--out", out, "Output CSV")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    auto logger = spdlog::stderr_color_mt("srmcal");
    logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::from_str(log_level));

    srm_context *raw_ctx = nullptr;
    if (srm_context_create(&raw_ctx) != SRM_OK)
    {
        std::cerr << "srmcal: " << srm_last_error() << '\n';
        return 1;
    }
    ContextPtr ctx(raw_ctx);
    srm_context_set_threads(ctx.get(), threads);
    srm_context_set_log(ctx.get(), &log_sink, nullptr);

    char *summary = nullptr;
    const int has_seed = seed ? 1 : 0;
    const std::uint64_t seed_value = seed.value_or(0);

    srm_status status = SRM_ERR_VALIDATION;
    if (*synth)
        status = srm_cmd_synth(ctx.get(), manifest.c_str(), out.c_str(), has_seed, seed_value, &summary);
    else if (*calibrate)
        status = srm_cmd_calibrate(ctx.get(), manifest.c_str(), match_mode.empty() ? nullptr : match_mode.c_str(),
                                   out.c_str(), has_seed, seed_value, &summary);
    else if (*apply)
        status = srm_cmd_apply(ctx.get(), terms_dir.c_str(), raw.c_str(), out.c_str(), &summary);
    else if (*compare)
        status = srm_cmd_compare(ctx.get(), file_a.c_str(), file_b.c_str(), out.c_str(), &summary);
    else if (*fit_report)
        status = srm_cmd_fit_report(ctx.get(), trace.c_str(), out.c_str(), &summary);
    return report(status, summary);
}
