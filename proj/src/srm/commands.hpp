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

// Batch commands behind the CLI. Each returns an exit code (0 ok,
// 1 validation, 2 numerical, 3 I/O) and a JSON summary; none throws.
// Output files are listed in docs/outputs.md.

#ifndef SRM_COMMANDS_HPP
#define SRM_COMMANDS_HPP

#include "manifest.hpp"
#include "match_fit.hpp"
#include "srm_engine.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace srm
{

inline constexpr std::string_view kVersion = "0.1.0";

enum class LogLevel
{
    Debug,
    Info,
    Warn,
    Error
};

struct CommandContext
{
    std::size_t threads = 1;
    std::function<void(LogLevel, const std::string &)> log;

    void emit(LogLevel level, const std::string &message) const
    {
        if (log)
            log(level, message);
    }
};

struct CommandOutcome
{
    int exit_code = 0;
    std::string summary; // JSON object
    std::string message; // diagnostic for nonzero exit codes
};

CommandOutcome cmd_synth(const std::filesystem::path &manifest, const std::filesystem::path &out_dir,
                         std::optional<std::uint64_t> seed, const CommandContext &ctx = {});

CommandOutcome cmd_calibrate(const std::filesystem::path &manifest, std::optional<MatchMode> mode,
                             const std::filesystem::path &out_dir, std::optional<std::uint64_t> seed,
                             const CommandContext &ctx = {});

CommandOutcome cmd_apply(const std::filesystem::path &terms_dir, const std::filesystem::path &raw_dut,
                         const std::filesystem::path &out_file, const CommandContext &ctx = {});

CommandOutcome cmd_compare(const std::filesystem::path &file_a, const std::filesystem::path &file_b,
                           const std::filesystem::path &out_csv, const CommandContext &ctx = {});

// Truth columns are added when "<trace stem>.truth.json" exists next to
// the trace.
CommandOutcome cmd_fit_report(const std::filesystem::path &trace_csv, const std::filesystem::path &out_csv,
                              const CommandContext &ctx = {});

// ---- building blocks shared with the C API and tests -----------------------

struct FitOutcome
{
    std::vector<std::string> names;              // parameter names
    std::vector<FitReport> reports;              // one (symmetric) or two (port A, port B)
    std::vector<std::vector<cplx>> match;        // match definition per port (A, B)
};

// Match-model extraction for a loaded session.
FitOutcome run_fit(const LoadedSession &loaded, const DEConfig &config);

struct MatchDefinition
{
    std::vector<cplx> match_a;
    std::vector<cplx> match_b;
    std::optional<FitOutcome> fitted; // fit mode only
};

// Match reflections per port for the given mode; runs the fit in fit mode.
MatchDefinition resolve_match(const LoadedSession &loaded, MatchMode mode, const CommandContext &ctx = {});

// Ideal flat match definition from the match model's DC resistance.
std::vector<cplx> ideal_match(const LoadedSession &loaded);

std::string format_error_terms_csv(const CalibrationResult &result);
// Throws ParseError.
CalibrationResult parse_error_terms_csv(std::string_view text);

} // namespace srm

#endif
