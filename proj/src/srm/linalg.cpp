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

#include "linalg.hpp"

namespace srm
{

namespace
{
std::array<double, 4> padded(const Eigen::VectorXd &values)
{
    std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
    for (Eigen::Index i = 0; i < values.size() && i < 4; ++i)
        out[static_cast<std::size_t>(i)] = values[i];
    return out;
}
} // namespace

NullspaceSolution nullspace(const DesignMatrix &m)
{
    Eigen::JacobiSVD<DesignMatrix> svd(m, Eigen::ComputeFullV);
    return {svd.matrixV().col(3), padded(svd.singularValues())};
}

std::array<double, 4> singular_values(const DesignMatrix &m)
{
    Eigen::JacobiSVD<DesignMatrix> svd(m);
    return padded(svd.singularValues());
}

std::array<double, 4> singular_values(const SmallDesignMatrix &m)
{
    Eigen::JacobiSVD<SmallDesignMatrix> svd(m);
    return padded(svd.singularValues());
}

} // namespace srm
