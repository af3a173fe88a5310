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
#include "srm/synth_bench.hpp"
#include "support/kits.hpp"
#include "support/random.hpp"

#include <cmath>

using namespace srm;

TEST_SUITE("synth_bench")
{
    TEST_CASE("counter generator is order independent and uniform")
    {
        CHECK(counter_hash(1, 2, 3) == counter_hash(1, 2, 3));
        CHECK(counter_hash(1, 2, 3) != counter_hash(1, 2, 4));
        CHECK(counter_hash(1, 2, 3) != counter_hash(2, 2, 3));
        double mean = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i)
        {
            const double u = counter_uniform(9, 1, static_cast<std::uint64_t>(i));
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
            mean += u / n;
        }
        CHECK(std::abs(mean - 0.5) < 0.01);
    }

    TEST_CASE("normal pairs have unit variance")
    {
        double m = 0.0, v = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i)
        {
            const auto [a, b] = counter_normal_pair(4, 7, static_cast<std::uint64_t>(i));
            m += (a + b) / (2.0 * n);
            v += (a * a + b * b) / (2.0 * n);
        }
        CHECK(std::abs(m) < 0.02);
        CHECK(std::abs(v - 1.0) < 0.03);
    }

    TEST_CASE("random smooth boxes respect their caps")
    {
        const RandomSmoothSpec spec{17, 0.3, 0.05};
        for (int box = 0; box < 2; ++box)
        {
            Complex2x2 prev = random_smooth_box_s(spec, box, 0.0);
            for (int i = 1; i <= 200; ++i)
            {
                const Complex2x2 s = random_smooth_box_s(spec, box, i / 200.0);
                CHECK(std::abs(s.q11) <= 0.3 + 1e-12);
                CHECK(std::abs(s.q22) <= 0.3 + 1e-12);
                CHECK(s.q12 == s.q21);
                CHECK((s - prev).max_abs() < 0.1);
                prev = s;
            }
        }
        CHECK(random_smooth_box_s(spec, 0, 0.5) == random_smooth_box_s(spec, 0, 0.5));
        CHECK_FALSE(random_smooth_box_s(spec, 0, 0.5) == random_smooth_box_s(spec, 1, 0.5));
    }

    TEST_CASE("realized boxes are normalised")
    {
        const auto f = linear_axis(1e9, 50e9, 11);
        for (const auto &e : realize_boxes(ErrorBoxSpec::random_smooth({3, 0.3, 0.05}), f))
        {
            CHECK(e.a.q22 == cplx(1.0));
            CHECK(e.b.q22 == cplx(1.0));
            CHECK_NOTHROW(e.validate());
        }
        for (const auto &e : realize_boxes(ErrorBoxSpec::identity(), f))
        {
            CHECK(e.a == Complex2x2::identity());
            CHECK(e.k == cplx(1.0));
        }
        CHECK_THROWS_AS(realize_boxes(ErrorBoxSpec::explicit_boxes(std::vector<ErrorBoxSet>(3)), f), Error);
        CHECK_THROWS_AS(realize_boxes(ErrorBoxSpec::random_smooth({3, 1.5, 0.05}), f), Error);
    }

    TEST_CASE("one-port embedding at either side")
    {
        const Complex2x2 s{cplx(0.1, -0.2), cplx(0.8, 0.1), cplx(0.8, 0.1), cplx(-0.15, 0.05)};
        const cplx rho(0.3, 0.4);
        const cplx at_a = s.q11 + s.q12 * s.q21 * rho / (1.0 - s.q22 * rho);
        const cplx at_b = s.q22 + s.q12 * s.q21 * rho / (1.0 - s.q11 * rho);
        CHECK(std::abs(embed_one_port(s_to_t(s), rho, Side::A) - at_a) < 1e-14);
        CHECK(std::abs(embed_one_port(s_to_t(s), rho, Side::B) - at_b) < 1e-14);
    }

    TEST_CASE("two-port models")
    {
        const LineValues v = testkit::fixture_line();
        const TwoPortModel whole = TwoPortModel::line(2e-3, v);
        const TwoPortModel halves = TwoPortModel::cascade({{1e-3, v}, {1e-3, v}});
        for (double f : {1e9, 100e9})
            CHECK((whole.s_parameters(0, f) - halves.s_parameters(0, f)).max_abs() < 1e-13);
        const Complex2x2 s{0.1, 0.9, 0.9, 0.1};
        const TwoPortModel data = TwoPortModel::from_s({s, s});
        CHECK(data.s_parameters(1, 5e9) == s);
    }

    TEST_CASE("identity boxes leave the standards unchanged")
    {
        const auto kit = testkit::paper_kit();
        const auto f = linear_axis(1e9, 150e9, 12);
        const auto ss = generate_session(kit, ErrorBoxSpec::identity(), f, testkit::true_theta(kit));
        CHECK_NOTHROW(ss.session.validate());
        REQUIRE(ss.truth.rho.size() == 3);
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            const OnePortModel &m = kit.oneports[0];
            CHECK(std::abs(ss.truth.match_rho[i] - m.reflection(m.stored_values(), f[i])) < 1e-15);
            CHECK(ss.session.oneports[0].gamma_a[i] == ss.truth.rho[0][i]);
            CHECK(ss.session.oneports[2].gamma_b[i] == ss.truth.rho[2][i]);
            CHECK(testkit::relative_matrix_error(t_to_s(ss.session.net[i]), ss.truth.net_s[i]) < 1e-13);
            CHECK(testkit::relative_matrix_error(t_to_s(ss.session.dut[i]), ss.truth.dut_s[i]) < 1e-13);
        }
    }

    TEST_CASE("generation is deterministic and thread independent")
    {
        const auto kit = testkit::paper_kit();
        const auto f = linear_axis(1e9, 150e9, 25);
        const auto spec = ErrorBoxSpec::random_smooth({8, 0.3, 0.05});
        const auto one = generate_session(kit, spec, f, testkit::true_theta(kit), 1);
        const auto three = generate_session(kit, spec, f, testkit::true_theta(kit), 3);
        CHECK(one.session.net == three.session.net);
        CHECK(one.session.oneports[1].gamma_a == three.session.oneports[1].gamma_a);
        CHECK(one.session.network_loads[2].gamma_n == three.session.network_loads[2].gamma_n);
    }

    TEST_CASE("theta overrides the stored values")
    {
        const auto kit = testkit::paper_kit();
        const auto f = linear_axis(1e9, 150e9, 4);
        auto theta = testkit::true_theta(kit);
        theta[1] = 40e-12;
        const auto ss = generate_session(kit, ErrorBoxSpec::identity(), f, theta);
        OnePortModel m = kit.oneports[0];
        m.param("series.L0").value = 40e-12;
        CHECK(std::abs(ss.truth.match_rho[3] - m.reflection(m.stored_values(), f[3])) < 1e-15);
        CHECK(ss.truth.theta == theta);
    }

    TEST_CASE("noise statistics and determinism")
    {
        const auto kit = testkit::paper_kit();
        const auto f = linear_axis(1e9, 150e9, 400);
        const auto ss = generate_session(kit, ErrorBoxSpec::identity(), f, testkit::true_theta(kit));
        const MeasurementSession clean = add_noise(ss.session, 0.0, 1);
        CHECK(clean.oneports[0].gamma_a == ss.session.oneports[0].gamma_a);
        const double sigma = 1e-3;
        const MeasurementSession noisy = add_noise(ss.session, sigma, 5);
        double power = 0.0;
        std::size_t count = 0;
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t i = 0; i < f.size(); ++i)
            {
                power += std::norm(noisy.oneports[s].gamma_a[i] - ss.session.oneports[s].gamma_a[i]);
                ++count;
            }
        CHECK(std::abs(power / count / (sigma * sigma) - 1.0) < 0.1);
        CHECK(add_noise(ss.session, sigma, 5).oneports[0].gamma_a == noisy.oneports[0].gamma_a);
        CHECK_FALSE(add_noise(ss.session, sigma, 6).oneports[0].gamma_a == noisy.oneports[0].gamma_a);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(noisy.network_loads[k].gamma_other == noisy.oneports[k].gamma_b);
    }

    TEST_CASE("relative error metric")
    {
        CHECK(relative_error(cplx(1.1, 0.0), cplx(1.0, 0.0)).value == doctest::Approx(0.1).epsilon(1e-12));
        const auto z = relative_error(cplx(0.0, 0.2), cplx(0.0));
        CHECK(z.absolute);
        CHECK(z.value == doctest::Approx(0.2));
        const Complex2x2 t{1.0, 2.0, 3.0, 4.0};
        CHECK(max_relative_error(1.1 * t, t) == doctest::Approx(0.1).epsilon(1e-12));
    }

    TEST_CASE("linear axis")
    {
        const auto f = linear_axis(1e9, 150e9, 150);
        CHECK(f.size() == 150);
        CHECK(f.front() == 1e9);
        CHECK(f.back() == 150e9);
        CHECK(f[1] - f[0] == doctest::Approx(1e9));
        CHECK(linear_axis(2.0, 3.0, 1) == std::vector<double>{2.0});
    }

    TEST_CASE("kit validation")
    {
        auto kit = testkit::paper_kit();
        CHECK_NOTHROW(kit.validate());
        kit.match_label = "load";
        CHECK_THROWS_AS(kit.validate(), Error);
    }
}
