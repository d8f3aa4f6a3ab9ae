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

#include "onebit/rate.hpp"

#include <cmath>

#include "onebit/error.hpp"

namespace onebit
{
    double data_bussgang_operator(int K, double rho_d)
    {
        require(K >= 1, ErrorCode::InvalidArgument, "K must be positive");
        require(rho_d >= 0.0, ErrorCode::InvalidArgument, "data SNR must be non-negative");
        return std::sqrt(two_over_pi) * std::sqrt(1.0 / (static_cast<double>(K) * rho_d + 1.0));
    }

    RVector data_bussgang_exact(const CMatrix &H, double rho_d)
    {
        require(rho_d >= 0.0, ErrorCode::InvalidArgument, "data SNR must be non-negative");
        // diag(H H^H)_m = ||row m||^2
        RVector d = rho_d * H.rowwise().squaredNorm().array() + 1.0;
        return std::sqrt(two_over_pi) * d.array().rsqrt();
    }

    CMatrix zf_combiner(const CMatrix &H_hat)
    {
        require(H_hat.rows() >= H_hat.cols() && H_hat.cols() >= 1, ErrorCode::DimensionMismatch,
                "ZF needs at least as many antennas as users");
        CMatrix gram = H_hat.adjoint() * H_hat;
        Eigen::LLT<CMatrix> llt(gram);
        bool ok = llt.info() == Eigen::Success;
        if (ok)
        {
            const RVector d = CMatrix(llt.matrixL()).diagonal().real();
            ok = d.minCoeff() > 1e-7 * d.maxCoeff(); // Gram condition number below 1e14
        }
        if (!ok)
            fail(ErrorCode::Numerical, "estimated channel matrix is rank deficient; ZF combiner undefined");
        return llt.solve(H_hat.adjoint());
    }

    RateBreakdown achievable_rates(const CMatrix &H_true, const CMatrix &H_hat, double rho_d)
    {
        require(H_true.rows() == H_hat.rows() && H_true.cols() == H_hat.cols(), ErrorCode::DimensionMismatch,
                "true and estimated channels must have equal shape");
        const Eigen::Index K = H_hat.cols();
        const double a = data_bussgang_operator(static_cast<int>(K), rho_d);
        const double cq = 1.0 - two_over_pi;

        const CMatrix Wt = zf_combiner(H_hat);  // K x M, row k is w_k^T
        const CMatrix E = H_true - H_hat;       // estimation error, column j is eps_j
        const CMatrix WH = a * (Wt * H_hat);    // (k, j) = w_k^T A h_hat_j
        const CMatrix WE = a * (Wt * E);        // (k, j) = w_k^T A eps_j

        RateBreakdown out;
        out.per_user_rate.resize(K);
        out.signal.resize(K);
        out.interference.resize(K);
        out.quant_noise.resize(K);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double w_norm2 = Wt.row(k).squaredNorm();
            double iui = 0.0;
            for (Eigen::Index j = 0; j < K; ++j)
                if (j != k)
                    iui += std::norm(WH(k, j));
            const double s = rho_d * std::norm(WH(k, k));
            iui *= rho_d;
            // w^T C_q w^* with C_q = (1 - 2/pi) I, plus ||w^T A||^2 for thermal noise.
            const double qn = rho_d * WE.row(k).squaredNorm() + a * a * w_norm2 + cq * w_norm2;

            const auto idx = static_cast<std::size_t>(k);
            out.signal[idx] = s;
            out.interference[idx] = iui;
            out.quant_noise[idx] = qn;
            out.per_user_rate[idx] = std::log2(1.0 + s / (iui + qn));
            out.sum_rate += out.per_user_rate[idx];
        }
        return out;
    }
}
