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

// Touchstone v1 (.s1p / .s2p) reader and writer.
//
// Frequencies are kept as written (raw value plus unit) so that a
// read-write cycle reproduces them exactly. MA and DB pairs are converted
// to complex on load: MA -> m e^{j a deg}, DB -> 10^(d/20) e^{j a deg}.

#ifndef SRM_TOUCHSTONE_HPP
#define SRM_TOUCHSTONE_HPP

#include "rf_core.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srm
{

enum class FrequencyUnit
{
    Hz,
    kHz,
    MHz,
    GHz
};

enum class DataFormat
{
    RI,
    MA,
    DB
};

double unit_scale(FrequencyUnit unit);
std::string_view to_string(FrequencyUnit unit);
std::string_view to_string(DataFormat format);

struct TouchstoneData
{
    int ports = 1;
    FrequencyUnit unit = FrequencyUnit::GHz;
    DataFormat format = DataFormat::RI; // format of the source file
    double reference_ohm = 50.0;
    std::vector<std::string> comments;
    std::vector<double> raw_frequency;      // in `unit`
    std::vector<std::vector<cplx>> values;  // 1 entry (S11) or 4 (S11 S21 S12 S22)

    std::size_t size() const { return raw_frequency.size(); }
    double frequency_hz(std::size_t i) const { return raw_frequency[i] * unit_scale(unit); }
    std::vector<double> frequencies_hz() const;

    // One-port column; throws InvalidArgument for two-port data.
    std::vector<cplx> reflection() const;
    // Two-port S-matrices; throws InvalidArgument for one-port data.
    std::vector<Complex2x2> s_matrices() const;

    static TouchstoneData one_port(std::span<const double> frequencies_hz, std::span<const cplx> s11,
                                   FrequencyUnit unit = FrequencyUnit::GHz);
    static TouchstoneData two_port(std::span<const double> frequencies_hz, std::span<const Complex2x2> s,
                                   FrequencyUnit unit = FrequencyUnit::GHz);
};

// Throws ParseError (with line number) / NonMonotonicFrequency.
TouchstoneData parse_touchstone(std::string_view text, int ports, std::string_view source = "<text>");
// Port count from the extension. Throws Io / ParseError / NonMonotonicFrequency.
TouchstoneData read_touchstone(const std::filesystem::path &path);

struct TouchstoneWriteOptions
{
    DataFormat format = DataFormat::RI;
    std::vector<std::string> header; // emitted as '!' lines before the data comments
};

std::string format_touchstone(const TouchstoneData &data, const TouchstoneWriteOptions &options = {});
// Atomic write. Throws Io.
void write_touchstone(const std::filesystem::path &path, const TouchstoneData &data,
                      const TouchstoneWriteOptions &options = {});

// Writes to a sibling temporary and renames it into place. Throws Io.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);
std::string read_text_file(const std::filesystem::path &path);

} // namespace srm

#endif
