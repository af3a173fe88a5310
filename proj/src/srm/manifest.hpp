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

// Session manifest (JSON). The grammar is documented in docs/manifest.md.

#ifndef SRM_MANIFEST_HPP
#define SRM_MANIFEST_HPP

#include "circuit_model.hpp"
#include "differential_evolution.hpp"
#include "srm_engine.hpp"
#include "synth_bench.hpp"
#include "touchstone.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace srm
{

struct OnePortFiles
{
    std::string label;
    std::filesystem::path port_a;
    std::filesystem::path port_b;
    std::optional<cplx> nominal;
};

struct NetworkLoadFile
{
    std::string label;
    std::filesystem::path file;
};

struct MeasurementFiles
{
    std::vector<OnePortFiles> oneports;
    std::vector<NetworkLoadFile> network_loads;
    std::optional<std::filesystem::path> net;
    std::optional<std::filesystem::path> dut;
};

enum class MatchMode
{
    Ideal,
    ModelFile,
    Fit
};

std::optional<MatchMode> parse_match_mode(std::string_view text);
std::string_view to_string(MatchMode mode);

struct CalibrationSettings
{
    MatchMode match_mode = MatchMode::Fit;
    std::optional<std::filesystem::path> match_definition_a; // model-file mode, .s1p
    std::optional<std::filesystem::path> match_definition_b;
    bool tolerate_failures = true;
};

struct FitSettings
{
    bool symmetric = true;
    std::vector<std::string> standards; // labels; empty = every modelled one-port
    std::uint64_t seed = 1;
    std::size_t population = 0;
    double mutation_min = 0.3;
    double mutation_max = 0.9;
    double crossover = 0.9;
    std::size_t max_generations = 1000;
    double tolerance = 1e-12;
    double abs_tolerance = 0.0;

    DEConfig de_config(std::size_t threads) const;
};

struct SynthSettings
{
    ErrorBoxSpec boxes;
    TwoPortModel network;
    std::optional<TwoPortModel> dut;
    std::optional<std::vector<double>> theta; // defaults to the stored free values
    double noise_sigma = 0.0;
    std::uint64_t noise_seed = 1;
    FrequencyUnit unit = FrequencyUnit::GHz;
};

struct Manifest
{
    std::filesystem::path base_dir;
    double z_ref = 50.0;
    std::optional<std::vector<double>> frequencies;
    std::string match_label = "match";
    CascadePort cascade_port = CascadePort::A;
    std::vector<OnePortModel> models;
    std::optional<MeasurementFiles> measurements;
    CalibrationSettings calibration;
    FitSettings fit;
    std::optional<SynthSettings> synth;
    std::optional<std::filesystem::path> truth; // ground-truth sidecar of synthetic sessions

    std::filesystem::path resolve(const std::filesystem::path &p) const;
    // Index of the model with the given name, if any.
    std::optional<std::size_t> model_index(std::string_view name) const;
    // Kit for synthesis; throws MissingRole when the synth section is absent.
    StandardsKit kit() const;
};

// Throws ParseError / ModelSyntaxError / InvalidArgument.
Manifest parse_manifest(std::string_view json_text, const std::filesystem::path &base_dir);
// Throws Io in addition.
Manifest read_manifest(const std::filesystem::path &path);

// Parses a single model object; used by parse_manifest and tests.
OnePortModel parse_model_json(std::string_view json_text, double z_ref = 50.0);

struct LoadedSession
{
    Manifest manifest;
    MeasurementSession session;
};

// Reads every referenced file and validates roles and axes. Throws
// MissingRole / AxisMismatch / ModelSyntaxError / ParseError / Io.
LoadedSession load_session(const std::filesystem::path &manifest_path);
LoadedSession load_session(Manifest manifest);

// Reflection of a model at 0 Hz with its stored values.
cplx dc_reflection(const OnePortModel &model);

} // namespace srm

#endif
