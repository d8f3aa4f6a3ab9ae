// onebit: channel estimation for massive MIMO uplinks with one-bit ADCs
// Copyright (C) 2026 The onebit authors
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

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace onebit
{
    using cdouble = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RMatrix = Eigen::MatrixXd;
    using RVector = Eigen::VectorXd;

    inline constexpr double pi = 3.141592653589793238462643383279502884;

    // Power gain of the one-bit quantizer's linear part: 2/pi.
    inline constexpr double two_over_pi = 2.0 / pi;

    inline double to_db(double linear) { return 10.0 * std::log10(linear); }
    inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

    // (X + X^H) / 2
    inline CMatrix hermitian_part(const CMatrix &X) { return (X + X.adjoint()) * 0.5; }

    // Frobenius norm of X - X^H, zero for exactly Hermitian input.
    inline double hermitian_defect(const CMatrix &X) { return (X - X.adjoint()).norm(); }

    // Smallest eigenvalue of a Hermitian matrix (only the lower triangle is read).
    double min_eigenvalue(const CMatrix &X);
    double max_eigenvalue(const CMatrix &X);

    // Factor S with S * S^H = X for Hermitian PSD X. Cholesky when the smallest
    // eigenvalue exceeds 1e-10, otherwise eigendecomposition with clamped spectrum.
    CMatrix hermitian_sqrt(const CMatrix &X);

    // Moore-Penrose pseudo-inverse with singular values below rel_tol * sigma_max
    // treated as zero. Returns the numerical rank through `rank` when non-null.
    CMatrix pseudo_inverse(const CMatrix &X, double rel_tol = 1e-10, Eigen::Index *rank = nullptr);
}
