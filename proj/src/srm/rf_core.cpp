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

#include "rf_core.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>

namespace srm
{

namespace
{
constexpr double kTiny = 1e-300;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
} // namespace

double Complex2x2::frobenius_norm() const
{
    return std::sqrt(std::norm(q11) + std::norm(q12) + std::norm(q21) + std::norm(q22));
}

double Complex2x2::max_abs() const
{
    return std::max({std::abs(q11), std::abs(q12), std::abs(q21), std::abs(q22)});
}

Complex2x2 Complex2x2::inverse() const
{
    const cplx d = det();
    if (std::abs(d) < kTiny)
        throw Error(ErrorKind::SingularMatrix, "2x2 matrix is not invertible");
    return (1.0 / d) * adjugate();
}

bool Complex2x2::is_finite() const { return finite(q11) && finite(q12) && finite(q21) && finite(q22); }

void ErrorBoxSet::validate() const
{
    if (a.q22 != cplx(1.0) || b.q22 != cplx(1.0))
        throw Error(ErrorKind::InvalidArgument, "error boxes must be normalised to a22 = b22 = 1");
    if (std::abs(a.det()) < kTiny || std::abs(b.det()) < kTiny)
        throw Error(ErrorKind::InvalidArgument, "error boxes must be invertible");
    if (std::abs(k) < kTiny)
        throw Error(ErrorKind::InvalidArgument, "transmission term k must be nonzero");
}

Complex2x2 s_to_t(const Complex2x2 &s)
{
    if (std::abs(s.q21) < kTiny)
        throw Error(ErrorKind::SingularConversion, "S21 vanishes; T-parameters undefined");
    const cplx inv = 1.0 / s.q21;
    return {-s.det() * inv, s.q11 * inv, -s.q22 * inv, inv};
}

Complex2x2 t_to_s(const Complex2x2 &t)
{
    if (std::abs(t.q22) < kTiny)
        throw Error(ErrorKind::SingularConversion, "T22 vanishes; S-parameters undefined");
    const cplx inv = 1.0 / t.q22;
    return {t.q12 * inv, t.det() * inv, inv, -t.q21 * inv};
}

TwoPortRecord s_to_t(const TwoPortRecord &rec)
{
    if (rec.representation == Representation::T)
        return rec;
    return {rec.frequency, s_to_t(rec.matrix), Representation::T};
}

TwoPortRecord t_to_s(const TwoPortRecord &rec)
{
    if (rec.representation == Representation::S)
        return rec;
    return {rec.frequency, t_to_s(rec.matrix), Representation::S};
}

cplx mobius(const Complex2x2 &q, cplx z)
{
    const cplx den = q.q21 * z + q.q22;
    if (std::abs(den) < kTiny)
        throw Error(ErrorKind::PoleAtInput, "Mobius map evaluated at its pole");
    return (q.q11 * z + q.q12) / den;
}

cplx mobius_inverse(const Complex2x2 &q, cplx w)
{
    if (std::abs(q.det()) < kTiny)
        throw Error(ErrorKind::SingularMatrix, "Mobius coefficient matrix is singular");
    // adj(q) represents the inverse map up to scale.
    return mobius(q.adjugate(), w);
}

Complex2x2 port_b_mobius_matrix(const Complex2x2 &b)
{
    return kPermutation * b.inverse() * kPermutation;
}

Complex2x2 swap_ports_t(const Complex2x2 &t)
{
    return kPermutation * t.inverse() * kPermutation;
}

} // namespace srm
