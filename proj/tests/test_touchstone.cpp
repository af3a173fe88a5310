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

#include "doctest.h"

#include "srm/errors.hpp"
#include "srm/touchstone.hpp"
#include "support/random.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

using namespace srm;
namespace fs = std::filesystem;

namespace
{

ErrorKind kind_of(auto &&fn)
{
    try
    {
        fn();
    }
    catch (const Error &e)
    {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Io;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

fs::path scratch_dir(const char *name)
{
    const fs::path p = fs::temp_directory_path() / ("srm_touchstone_" + std::string(name));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

TouchstoneData random_two_port(testkit::Draw &d, std::size_t n)
{
    TouchstoneData t;
    t.ports = 2;
    double f = d.uniform(0.01, 1.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        t.raw_frequency.push_back(f);
        f += d.uniform(1e-6, 2.0);
        t.values.push_back({d.complex(2.0), d.complex(2.0), d.complex(2.0), d.complex(1e-9)});
    }
    return t;
}

} // namespace

TEST_SUITE("touchstone")
{
    TEST_CASE("RI round trip is value exact")
    {
        testkit::Draw d(51);
        for (int k = 0; k < 20; ++k)
        {
            const TouchstoneData t = random_two_port(d, 30);
            const TouchstoneData back = parse_touchstone(format_touchstone(t), 2);
            REQUIRE(back.size() == t.size());
            for (std::size_t i = 0; i < t.size(); ++i)
            {
                CHECK(bit_equal(back.raw_frequency[i], t.raw_frequency[i]));
                for (std::size_t c = 0; c < 4; ++c)
                {
                    CHECK(bit_equal(back.values[i][c].real(), t.values[i][c].real()));
                    CHECK(bit_equal(back.values[i][c].imag(), t.values[i][c].imag()));
                }
            }
        }
    }

    TEST_CASE("MA and DB conversions")
    {
        testkit::Draw d(52);
        const TouchstoneData t = random_two_port(d, 50);
        for (DataFormat fmt : {DataFormat::MA, DataFormat::DB})
        {
            const TouchstoneData back = parse_touchstone(format_touchstone(t, {fmt, {}}), 2);
            CHECK(back.format == fmt);
            for (std::size_t i = 0; i < t.size(); ++i)
                for (std::size_t c = 0; c < 4; ++c)
                    CHECK(std::abs(back.values[i][c] - t.values[i][c]) < 1e-12 * std::max(1.0, std::abs(t.values[i][c])));
        }
    }

    TEST_CASE("option line, units and reference impedance")
    {
        const TouchstoneData t = parse_touchstone("! c1\n#  mhz   s   db   r 75\n100 -6.0206 90\n", 1);
        CHECK(t.unit == FrequencyUnit::MHz);
        CHECK(t.format == DataFormat::DB);
        CHECK(t.reference_ohm == 75.0);
        CHECK(t.frequency_hz(0) == 100e6);
        CHECK(std::abs(t.values[0][0] - cplx(0.0, 0.5)) < 1e-5);
        CHECK(t.comments.size() == 1);
    }

    TEST_CASE("defaults without an option line are GHz, MA, 50 ohm")
    {
        const TouchstoneData t = parse_touchstone("1 0.5 180\n", 1);
        CHECK(t.unit == FrequencyUnit::GHz);
        CHECK(t.format == DataFormat::MA);
        CHECK(t.reference_ohm == 50.0);
        CHECK(std::abs(t.values[0][0] - cplx(-0.5, 0.0)) < 1e-15);
    }

    TEST_CASE("two-port column order is S11 S21 S12 S22")
    {
        const TouchstoneData t = parse_touchstone("# Hz S RI\n1 1 0 2 0 3 0 4 0\n", 2);
        const Complex2x2 s = t.s_matrices()[0];
        CHECK(s.q11 == cplx(1.0));
        CHECK(s.q21 == cplx(2.0));
        CHECK(s.q12 == cplx(3.0));
        CHECK(s.q22 == cplx(4.0));
        const TouchstoneData w = TouchstoneData::two_port(std::vector<double>{1.0}, std::vector<Complex2x2>{s},
                                                          FrequencyUnit::Hz);
        CHECK(w.values[0][1] == cplx(2.0));
    }

    TEST_CASE("whitespace, blank lines, comments and wrapped records")
    {
        const char *text = "\n! header\n\t# GHz S RI R 50 ! trailing\n\n"
                           "1.0  0.1 0.0\t0.9 0.0 ! comment\n"
                           "   0.9 0.0   0.1 0.0\n"
                           "! between\n"
                           "2.0 0.2 0 0.8 0 0.8 0 0.2 0\n";
        const TouchstoneData t = parse_touchstone(text, 2);
        REQUIRE(t.size() == 2);
        CHECK(t.values[0][3] == cplx(0.1));
        CHECK(t.values[1][1] == cplx(0.8));
    }

    TEST_CASE("writer layout")
    {
        const std::vector<double> f{1e9, 2e9};
        const std::vector<cplx> s{cplx(0.25, -0.5), cplx(0.5, 0.125)};
        const std::string text = format_touchstone(TouchstoneData::one_port(f, s), {DataFormat::RI, {"srmcal test", "seed 3"}});
        CHECK(text.rfind("! srmcal test\n! seed 3\n# GHz S RI R 50\n", 0) == 0);
        CHECK(text.find("1.0000000000000000e+00 2.5000000000000000e-01 -5.0000000000000000e-01") != std::string::npos);
        CHECK(text.find('E') == std::string::npos);
    }

    TEST_CASE("parse errors carry line numbers")
    {
        try
        {
            parse_touchstone("# GHz S RI\n1 0.1 0.2\n2 0.1\n", 1, "f.s1p");
            FAIL("expected ParseError");
        }
        catch (const Error &e)
        {
            CHECK(e.kind() == ErrorKind::ParseError);
            CHECK(std::string(e.what()).find("f.s1p:3") != std::string::npos);
        }
        CHECK(kind_of([] { parse_touchstone("# GHz S RI\n1 0.1 abc\n", 1); }) == ErrorKind::ParseError);
        CHECK(kind_of([] { parse_touchstone("# GHz Y RI\n1 0.1 0.2\n", 1); }) == ErrorKind::ParseError);
        CHECK(kind_of([] { parse_touchstone("[Version] 2.0\n", 1); }) == ErrorKind::ParseError);
        CHECK(kind_of([] { parse_touchstone("# GHz S RI\n1 0 0 0 0 0 0\n", 2); }) == ErrorKind::ParseError);
        CHECK(kind_of([] { parse_touchstone("# GHz S RI\n2 0 0\n1 0 0\n", 1); }) == ErrorKind::NonMonotonicFrequency);
    }

    TEST_CASE("accessor guards")
    {
        const TouchstoneData one = parse_touchstone("1 0.5 0\n", 1);
        CHECK(kind_of([&] { one.s_matrices(); }) == ErrorKind::InvalidArgument);
        const TouchstoneData two = parse_touchstone("1 0 0 1 0 1 0 0 0\n", 2);
        CHECK(kind_of([&] { two.reflection(); }) == ErrorKind::InvalidArgument);
    }

    TEST_CASE("files: extensions, atomic writes, missing files")
    {
        const fs::path dir = scratch_dir("files");
        const std::vector<double> f{1e9, 2e9, 3e9};
        const std::vector<cplx> s{0.1, 0.2, 0.3};
        write_touchstone(dir / "a.s1p", TouchstoneData::one_port(f, s));
        CHECK(fs::exists(dir / "a.s1p"));
        CHECK_FALSE(fs::exists(dir / "a.s1p.tmp"));
        const TouchstoneData back = read_touchstone(dir / "a.s1p");
        CHECK(back.ports == 1);
        CHECK(back.frequencies_hz() == f);
        CHECK(back.reflection() == s);

        write_file_atomic(dir / "a.s1p", "1 0.5 0\n");
        CHECK(read_touchstone(dir / "a.s1p").size() == 1);

        write_file_atomic(dir / "x.ts", "[Version] 2.0\n");
        CHECK(kind_of([&] { read_touchstone(dir / "x.ts"); }) == ErrorKind::ParseError);
        CHECK(kind_of([&] { read_touchstone(dir / "missing.s2p"); }) == ErrorKind::Io);
        CHECK(kind_of([&] { write_file_atomic(dir / "no" / "such" / "dir.s1p", "x"); }) == ErrorKind::Io);
        fs::remove_all(dir);
    }
}
