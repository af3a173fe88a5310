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

// Complex 2x2 network algebra.
//
// T-parameters follow the wave ordering [b1; a1] = T [a2; b2], i.e.
//
//     T = 1/S21 * [ -det(S)  S11 ]
//                 [ -S22     1   ]
//
// With this ordering a one-port load rho seen through a two-port with
// T-matrix Q measures mobius(Q, rho), and cascading is a plain matrix
// product. Coefficient matrices of Mobius maps are never normalised
// implicitly; every consumer relies on scale invariance instead.

#ifndef SRM_RF_CORE_HPP
#define SRM_RF_CORE_HPP

#include <complex>

namespace srm
{

using cplx = std::complex<double>;

struct Complex2x2
{
    cplx q11{};
    cplx q12{};
    cplx q21{};
    cplx q22{};

    static constexpr Complex2x2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    cplx det() const { return q11 * q22 - q12 * q21; }
    cplx trace() const { return q11 + q22; }
    Complex2x2 transpose() const { return {q11, q21, q12, q22}; }
    double frobenius_norm() const;
    double max_abs() const;

    // Throws SingularMatrix when |det| < 1e-300.
    Complex2x2 inverse() const;
    // Adjugate; equals det * inverse without the division.
    Complex2x2 adjugate() const { return {q22, -q12, -q21, q11}; }

    bool is_finite() const;

    friend Complex2x2 operator*(const Complex2x2 &a, const Complex2x2 &b)
    {
        return {a.q11 * b.q11 + a.q12 * b.q21, a.q11 * b.q12 + a.q12 * b.q22,
                a.q21 * b.q11 + a.q22 * b.q21, a.q21 * b.q12 + a.q22 * b.q22};
    }
    friend Complex2x2 operator*(cplx s, const Complex2x2 &a) { return {s * a.q11, s * a.q12, s * a.q21, s * a.q22}; }
    friend Complex2x2 operator*(const Complex2x2 &a, cplx s) { return s * a; }
    friend Complex2x2 operator+(const Complex2x2 &a, const Complex2x2 &b)
    {
        return {a.q11 + b.q11, a.q12 + b.q12, a.q21 + b.q21, a.q22 + b.q22};
    }
    friend Complex2x2 operator-(const Complex2x2 &a, const Complex2x2 &b)
    {
        return {a.q11 - b.q11, a.q12 - b.q12, a.q21 - b.q21, a.q22 - b.q22};
    }
    friend bool operator==(const Complex2x2 &, const Complex2x2 &) = default;
};

// P = P^T = P^-1.
inline constexpr Complex2x2 kPermutation{0.0, 1.0, 1.0, 0.0};

enum class Representation
{
    S,
    T
};

struct TwoPortRecord
{
    double frequency = 0.0; // Hz
    Complex2x2 matrix{};
    Representation representation = Representation::S;
};

// Normalised error-box triple: a22 = b22 = 1, k carries the transmission term.
struct ErrorBoxSet
{
    Complex2x2 a = Complex2x2::identity();
    Complex2x2 b = Complex2x2::identity();
    cplx k{1.0, 0.0};

    // Throws InvalidArgument when the normalisation or invertibility
    // invariants do not hold.
    void validate() const;
};

Complex2x2 s_to_t(const Complex2x2 &s);
Complex2x2 t_to_s(const Complex2x2 &t);
TwoPortRecord s_to_t(const TwoPortRecord &rec);
TwoPortRecord t_to_s(const TwoPortRecord &rec);

inline Complex2x2 cascade(const Complex2x2 &t1, const Complex2x2 &t2) { return t1 * t2; }

// (q11 z + q12) / (q21 z + q22). Throws PoleAtInput at the pole.
cplx mobius(const Complex2x2 &q, cplx z);
// Inverse map. Throws SingularMatrix for singular q, PoleAtInput when w is
// the image of the pole.
cplx mobius_inverse(const Complex2x2 &q, cplx w);

// Coefficient matrix P B^-1 P of the port-B measurement map
// Gamma_b = (b11 rho - b21) / (1 - b12 rho).
Complex2x2 port_b_mobius_matrix(const Complex2x2 &b);

// T-matrix of the same two-port with its ports exchanged: P T^-1 P.
Complex2x2 swap_ports_t(const Complex2x2 &t);

} // namespace srm

#endif
