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

#include <string_view>
#include <vector>

namespace onebit::theory
{
    // Closed-form analysis for uncorrelated channels (R = I) with tau = K and a
    // common temporal coefficient eta for all users.
    struct Params
    {
        int K = 1;
        double rho = 0.0;   // pilot SNR, linear
        double eta = 0.0;   // common temporal correlation
        double alpha = 1.0; // TPE coefficient

        // (2/pi) K rho / (K rho + 1)
        double beta() const;
        // Throws unless 0 < beta < 2/pi, 0 <= eta <= 1 and 0 < alpha < 2.
        void validate() const;
    };

    // 1 - beta
    double blmmse_nmse(int K, double rho);

    struct Recursion
    {
        std::vector<double> m_pred; // m_{i|i-1}, i = 1..slots; m_{1|0} = 1
        std::vector<double> m_filt; // m_{i|i}
    };

    // m_{i|i} = (1 - (2a - a^2 (1 - b) - a^2 b m) b m) m and
    // m_{i+1|i} = eta^2 m_{i|i} + 1 - eta^2, from m_{1|0} = 1.
    Recursion nmse_recursion(const Params &p, std::size_t slots);

    // One application of the prediction map f(x) = eta^2 filt(x) + 1 - eta^2.
    double prediction_map(const Params &p, double x);

    // Unique root of f(x) = x on (0, 1) by bisection to machine precision. eta = 0 gives 1
    // and eta = 1 gives 0.
    double fixed_point_gamma(const Params &p);

    // 2 / (1 - beta (1 - m_pred)); never below 2.
    double alpha_upper_bound(double beta, double m_pred);

    // Order of the dominant matrix-inversion cost per slot.
    enum class Estimator
    {
        Blmmse,
        Kfb,
        Tpe,
    };
    std::string_view complexity_order(Estimator e);
    double inversion_cost(Estimator e, int M, int tau, int L = 1);
}
