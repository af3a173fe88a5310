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

#include "srm/linalg.hpp"
#include "support/random.hpp"

using namespace srm;

TEST_SUITE("linalg")
{
    TEST_CASE("nullspace of a rank-3 matrix")
    {
        testkit::Draw d(21);
        for (int trial = 0; trial < 100; ++trial)
        {
            Vector4c x;
            for (int i = 0; i < 4; ++i)
                x[i] = d.complex();
            x.normalize();
            DesignMatrix m(6, 4);
            for (int r = 0; r < 6; ++r)
            {
                Vector4c row;
                for (int i = 0; i < 4; ++i)
                    row[i] = d.complex();
                // Remove the component along x so that m x = 0.
                const cplx c = (row.transpose() * x).value();
                row -= c * x.conjugate();
                m.row(r) = row.transpose();
            }
            const NullspaceSolution ns = nullspace(m);
            CHECK((m * ns.vector).norm() < 1e-12);
            CHECK(std::abs(std::abs(ns.vector.dot(x)) - 1.0) < 1e-10);
            CHECK(ns.singular_values[3] < 1e-12 * ns.singular_values[0]);
            CHECK(ns.singular_values[0] >= ns.singular_values[1]);
        }
    }

    TEST_CASE("singular values are padded below four rows")
    {
        DesignMatrix m(3, 4);
        m << 1.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0;
        const auto sv = singular_values(m);
        CHECK(sv[0] == doctest::Approx(3.0));
        CHECK(sv[1] == doctest::Approx(2.0));
        CHECK(sv[2] == doctest::Approx(1.0));
        CHECK(sv[3] == 0.0);
    }

    TEST_CASE("small and dynamic variants agree")
    {
        testkit::Draw d(22);
        DesignMatrix m(5, 4);
        SmallDesignMatrix s(5, 4);
        for (int r = 0; r < 5; ++r)
            for (int c = 0; c < 4; ++c)
                s(r, c) = m(r, c) = d.complex();
        const auto a = singular_values(m);
        const auto b = singular_values(s);
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(a[i] - b[i]) < 1e-13);
    }

    TEST_CASE("row normalisation leaves zero rows alone")
    {
        DesignMatrix m(2, 4);
        m << 3.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0;
        normalize_rows(m);
        CHECK(m.row(0).norm() == doctest::Approx(1.0));
        CHECK(m.row(1).norm() == 0.0);
    }
}
