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

#include "touchstone.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace srm
{

double unit_scale(FrequencyUnit unit)
{
    switch (unit)
    {
    case FrequencyUnit::Hz: return 1.0;
    case FrequencyUnit::kHz: return 1e3;
    case FrequencyUnit::MHz: return 1e6;
    case FrequencyUnit::GHz: return 1e9;
    }
    return 1.0;
}

std::string_view to_string(FrequencyUnit unit)
{
    switch (unit)
    {
    case FrequencyUnit::Hz: return "Hz";
    case FrequencyUnit::kHz: return "kHz";
    case FrequencyUnit::MHz: return "MHz";
    case FrequencyUnit::GHz: return "GHz";
    }
    return "Hz";
}

std::string_view to_string(DataFormat format)
{
    switch (format)
    {
    case DataFormat::RI: return "RI";
    case DataFormat::MA: return "MA";
    case DataFormat::DB: return "DB";
    }
    return "RI";
}

std::vector<double> TouchstoneData::frequencies_hz() const
{
    std::vector<double> f(size());
    for (std::size_t i = 0; i < size(); ++i)
        f[i] = frequency_hz(i);
    return f;
}

std::vector<cplx> TouchstoneData::reflection() const
{
    if (ports != 1)
        throw Error(ErrorKind::InvalidArgument, "expected one-port Touchstone data");
    std::vector<cplx> out(size());
    for (std::size_t i = 0; i < size(); ++i)
        out[i] = values[i][0];
    return out;
}

std::vector<Complex2x2> TouchstoneData::s_matrices() const
{
    if (ports != 2)
        throw Error(ErrorKind::InvalidArgument, "expected two-port Touchstone data");
    std::vector<Complex2x2> out(size());
    for (std::size_t i = 0; i < size(); ++i)
        out[i] = {values[i][0], values[i][2], values[i][1], values[i][3]};
    return out;
}

TouchstoneData TouchstoneData::one_port(std::span<const double> frequencies_hz, std::span<const cplx> s11,
                                        FrequencyUnit unit)
{
    if (frequencies_hz.size() != s11.size())
        throw Error(ErrorKind::InvalidArgument, "frequency and data lengths differ");
    TouchstoneData d;
    d.ports = 1;
    d.unit = unit;
    for (std::size_t i = 0; i < s11.size(); ++i)
    {
        d.raw_frequency.push_back(frequencies_hz[i] / unit_scale(unit));
        d.values.push_back({s11[i]});
    }
    return d;
}

TouchstoneData TouchstoneData::two_port(std::span<const double> frequencies_hz, std::span<const Complex2x2> s,
                                        FrequencyUnit unit)
{
    if (frequencies_hz.size() != s.size())
        throw Error(ErrorKind::InvalidArgument, "frequency and data lengths differ");
    TouchstoneData d;
    d.ports = 2;
    d.unit = unit;
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        d.raw_frequency.push_back(frequencies_hz[i] / unit_scale(unit));
        d.values.push_back({s[i].q11, s[i].q21, s[i].q12, s[i].q22});
    }
    return d;
}

namespace
{

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size())
    {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            out.push_back(line.substr(start, i - start));
    }
    return out;
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, const std::string &what)
{
    throw Error(ErrorKind::ParseError, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view token, std::string_view source, std::size_t line)
{
    if (!token.empty() && token.front() == '+')
        token.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        parse_fail(source, line, "invalid number '" + std::string(token) + "'");
    return v;
}

cplx from_pair(DataFormat format, double x, double y)
{
    switch (format)
    {
    case DataFormat::RI: return {x, y};
    case DataFormat::MA: return std::polar(x, y * std::numbers::pi / 180.0);
    case DataFormat::DB: return std::polar(std::pow(10.0, x / 20.0), y * std::numbers::pi / 180.0);
    }
    return {x, y};
}

} // namespace

TouchstoneData parse_touchstone(std::string_view text, int ports, std::string_view source)
{
    if (ports != 1 && ports != 2)
        throw Error(ErrorKind::InvalidArgument, "only one- and two-port Touchstone files are supported");
    TouchstoneData d;
    d.ports = ports;
    d.format = DataFormat::MA; // Touchstone default when the option line omits it
    const std::size_t per_record = 1 + 2 * static_cast<std::size_t>(ports * ports);

    bool seen_option = false;
    std::vector<double> pending;
    std::size_t record_line = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);

        if (const std::size_t bang = line.find('!'); bang != std::string_view::npos)
        {
            std::string_view comment = line.substr(bang + 1);
            if (!comment.empty() && comment.front() == ' ')
                comment.remove_prefix(1);
            d.comments.emplace_back(comment);
            line = line.substr(0, bang);
        }
        const auto tokens = split_ws(line);
        if (tokens.empty())
            continue;
        if (tokens.front().front() == '[')
            parse_fail(source, line_no, "Touchstone v2 keywords are not supported (v1 only)");
        if (tokens.front().front() == '#')
        {
            if (seen_option)
                continue; // only the first option line counts
            if (!d.raw_frequency.empty() || !pending.empty())
                parse_fail(source, line_no, "option line after data");
            seen_option = true;
            std::vector<std::string> opts;
            for (auto t : tokens)
                opts.push_back(lower(t));
            if (opts.front() != "#")
                opts.front().erase(0, 1);
            else
                opts.erase(opts.begin());
            for (std::size_t k = 0; k < opts.size(); ++k)
            {
                const std::string &o = opts[k];
                if (o == "hz") d.unit = FrequencyUnit::Hz;
                else if (o == "khz") d.unit = FrequencyUnit::kHz;
                else if (o == "mhz") d.unit = FrequencyUnit::MHz;
                else if (o == "ghz") d.unit = FrequencyUnit::GHz;
                else if (o == "ri") d.format = DataFormat::RI;
                else if (o == "ma") d.format = DataFormat::MA;
                else if (o == "db") d.format = DataFormat::DB;
                else if (o == "s") continue;
                else if (o == "y" || o == "z" || o == "h" || o == "g")
                    parse_fail(source, line_no, "only S-parameters are supported");
                else if (o == "r")
                {
                    if (k + 1 >= opts.size())
                        parse_fail(source, line_no, "reference resistance missing after R");
                    d.reference_ohm = parse_number(opts[++k], source, line_no);
                    if (!(d.reference_ohm > 0.0))
                        parse_fail(source, line_no, "reference resistance must be positive");
                }
                else
                    parse_fail(source, line_no, "unknown option '" + o + "'");
            }
            continue;
        }
        for (auto t : tokens)
        {
            if (pending.empty())
                record_line = line_no;
            pending.push_back(parse_number(t, source, line_no));
            if (pending.size() == per_record)
            {
                const double f = pending[0];
                if (!std::isfinite(f) || f < 0.0)
                    parse_fail(source, record_line, "invalid frequency");
                if (!d.raw_frequency.empty() && !(f > d.raw_frequency.back()))
                    throw Error(ErrorKind::NonMonotonicFrequency, std::string(source) + ":" +
                                                                      std::to_string(record_line) +
                                                                      ": frequencies must be strictly increasing");
                std::vector<cplx> row;
                for (std::size_t k = 1; k < per_record; k += 2)
                    row.push_back(from_pair(d.format, pending[k], pending[k + 1]));
                d.raw_frequency.push_back(f);
                d.values.push_back(std::move(row));
                pending.clear();
            }
        }
        if (!pending.empty() && ports == 1)
            parse_fail(source, record_line, "one-port row needs 3 values");
    }
    if (!pending.empty())
        parse_fail(source, record_line,
                   "incomplete data row (" + std::to_string(pending.size()) + " of " + std::to_string(per_record) +
                       " values)");
    return d;
}

std::string read_text_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw Error(ErrorKind::Io, "read error on '" + path.string() + "'");
    return ss.str();
}

TouchstoneData read_touchstone(const std::filesystem::path &path)
{
    const std::string ext = lower(path.extension().string());
    int ports = 0;
    if (ext == ".s1p")
        ports = 1;
    else if (ext == ".s2p")
        ports = 2;
    else if (ext == ".ts")
        throw Error(ErrorKind::ParseError, path.string() + ": Touchstone v2 (.ts) files are not supported");
    else
        throw Error(ErrorKind::ParseError, path.string() + ": unrecognised Touchstone extension '" + ext + "'");
    const std::string text = read_text_file(path);
    return parse_touchstone(text, ports, path.string());
}

namespace
{

void append_number(std::string &out, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    out += buf;
}

std::pair<double, double> to_pair(DataFormat format, cplx v)
{
    switch (format)
    {
    case DataFormat::RI: return {v.real(), v.imag()};
    case DataFormat::MA: return {std::abs(v), std::arg(v) * 180.0 / std::numbers::pi};
    case DataFormat::DB: return {20.0 * std::log10(std::abs(v)), std::arg(v) * 180.0 / std::numbers::pi};
    }
    return {v.real(), v.imag()};
}

} // namespace

std::string format_touchstone(const TouchstoneData &data, const TouchstoneWriteOptions &options)
{
    std::string out;
    for (const auto &h : options.header)
        out += "! " + h + "\n";
    for (const auto &c : data.comments)
        out += "! " + c + "\n";
    out += "# " + std::string(to_string(data.unit)) + " S " + std::string(to_string(options.format)) + " R ";
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", data.reference_ohm);
        out += buf;
    }
    out += "\n";
    const std::size_t width = data.ports == 1 ? 1 : 4;
    for (std::size_t i = 0; i < data.size(); ++i)
    {
        if (data.values[i].size() != width)
            throw Error(ErrorKind::InvalidArgument, "row " + std::to_string(i) + " has the wrong number of values");
        append_number(out, data.raw_frequency[i]);
        for (const cplx v : data.values[i])
        {
            const auto [x, y] = to_pair(options.format, v);
            out += ' ';
            append_number(out, x);
            out += ' ';
            append_number(out, y);
        }
        out += '\n';
    }
    return out;
}

void write_touchstone(const std::filesystem::path &path, const TouchstoneData &data,
                      const TouchstoneWriteOptions &options)
{
    write_file_atomic(path, format_touchstone(data, options));
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw Error(ErrorKind::Io, "write error on '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
    {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot move '" + tmp.string() + "' to '" + path.string() + "'");
    }
}

} // namespace srm
