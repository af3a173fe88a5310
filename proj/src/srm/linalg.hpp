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

// Small dense helpers around Eigen's SVD for the four-column design
// matrices used throughout calibration and fitting.

#ifndef SRM_LINALG_HPP
#define SRM_LINALG_HPP

#include "rf_core.hpp"

#include <Eigen/Dense>

#include <array>

namespace srm
{

using DesignMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, 4>;
// Stack-allocated variant for the fitting hot loop (at most 8 rows).
using SmallDesignMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, 4, Eigen::RowMajor, 8, 4>;
using Vector4c = Eigen::Matrix<cplx, 4, 1>;

struct NullspaceSolution
{
    Vector4c vector;                       // unit-norm right singular vector of sigma_4
    std::array<double, 4> singular_values; // descending, zero-padded below 4 rows
};

// Smallest right singular vector of a matrix with 4 columns.
NullspaceSolution nullspace(const DesignMatrix &m);

// Descending singular values, zero-padded to 4 entries.
std::array<double, 4> singular_values(const DesignMatrix &m);
std::array<double, 4> singular_values(const SmallDesignMatrix &m);

// Scales every nonzero row to unit Euclidean norm in place.
template <class Matrix>
void normalize_rows(Matrix &m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        const double n = m.row(r).norm();
        if (n > 0.0)
            m.row(r) /= n;
    }
}

} // namespace srm

#endif
