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

#include <vector>

#include "onebit/linalg.hpp"

namespace onebit
{
    // Per-user terms of the achievable-rate lower bound for one channel draw.
    struct RateBreakdown
    {
        std::vector<double> per_user_rate; // bits/s/Hz
        std::vector<double> signal;        // S_k
        std::vector<double> interference;  // IUI_k
        std::vector<double> quant_noise;   // QN_k (estimation error + thermal + quantization)
        double sum_rate = 0.0;
    };

    // Scalar Bussgang gain of the data phase under channel hardening:
    // sqrt(2/pi) / sqrt(K rho_d + 1).
    double data_bussgang_operator(int K, double rho_d);

    // Exact diagonal sqrt(2/pi) diag(rho_d H H^H + I)^{-1/2} for one realization.
    RVector data_bussgang_exact(const CMatrix &H, double rho_d);

    // W^T = (H^H H)^{-1} H^H, K x M. Throws when H is rank deficient.
    CMatrix zf_combiner(const CMatrix &H_hat);

    // Signal, interference and noise terms with a ZF combiner built from H_hat,
    // the hardened data Bussgang gain and C_q = (1 - 2/pi) I.
    RateBreakdown achievable_rates(const CMatrix &H_true, const CMatrix &H_hat, double rho_d);
}
