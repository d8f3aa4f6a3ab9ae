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

#include "onebit/quantization.hpp"

#include <algorithm>
#include <cmath>

#include "onebit/error.hpp"

namespace onebit
{
    PilotMatrix PilotMatrix::attach(Eigen::Index antennas, double pilot_snr) const
    {
        require(antennas >= 1, ErrorCode::InvalidArgument, "antenna count must be positive");
        require(pilot_snr >= 0.0, ErrorCode::InvalidArgument, "pilot SNR must be non-negative");
        PilotMatrix out = *this;
        out.M = antennas;
        out.rho = pilot_snr;
        const double amp = std::sqrt(pilot_snr);
        out.phi_bar = CMatrix::Zero(tau * antennas, K * antennas);
        for (Eigen::Index t = 0; t < tau; ++t)
            for (Eigen::Index k = 0; k < K; ++k)
                out.phi_bar.block(t * antennas, k * antennas, antennas, antennas).diagonal().setConstant(amp * phi(t, k));
        return out;
    }

    CVector PilotMatrix::expand(const CVector &h) const
    {
        require(attached(), ErrorCode::InvalidArgument, "pilot matrix has no antenna count / SNR attached");
        require(h.size() == M * K, ErrorCode::DimensionMismatch, "channel length must equal M*K");
        Eigen::Map<const CMatrix> H(h.data(), M, K);
        CMatrix Y = std::sqrt(rho) * (H * phi.transpose());
        return Eigen::Map<const CVector>(Y.data(), Y.size());
    }

    PilotMatrix dft_pilots(Eigen::Index tau, Eigen::Index K)
    {
        require(K >= 1, ErrorCode::InvalidArgument, "at least one user is required");
        require(tau >= K, ErrorCode::InvalidArgument, "pilot length must be at least the number of users");
        PilotMatrix out;
        out.tau = tau;
        out.K = K;
        out.phi.resize(tau, K);
        for (Eigen::Index m = 0; m < tau; ++m)
            for (Eigen::Index n = 0; n < K; ++n)
            {
                // Reduce the exponent modulo tau so large products keep full precision.
                const auto e = static_cast<double>((m * n) % tau);
                out.phi(m, n) = std::polar(1.0, -2.0 * pi * e / static_cast<double>(tau));
            }
        return out;
    }

    CVector one_bit_quantize(const CVector &y)
    {
        static const double s = 1.0 / std::sqrt(2.0);
        CVector r(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i)
        {
            const double re = y[i].real() >= 0.0 ? s : -s;
            const double im = y[i].imag() >= 0.0 ? s : -s;
            r[i] = {re, im};
        }
        return r;
    }

    ReceivedPilots received_pilot_signal(const ChannelState &H, const PilotMatrix &pilots, const CVector &noise)
    {
        require(H.M == pilots.M && H.users() == pilots.K, ErrorCode::DimensionMismatch,
                "channel and pilot dimensions disagree");
        require(noise.size() == pilots.M * pilots.tau, ErrorCode::DimensionMismatch, "noise length must equal M*tau");
        ReceivedPilots out;
        out.y = pilots.expand(H.h) + noise;
        out.n = noise;
        return out;
    }

    ReceivedPilots received_pilot_signal(const ChannelState &H, const PilotMatrix &pilots, Rng &rng)
    {
        return received_pilot_signal(H, pilots, rng.complex_normal(pilots.M * pilots.tau));
    }

    BussgangModel bussgang_operator(const PilotMatrix &pilots, const SpatialCorrelation &R_agg)
    {
        require(pilots.attached(), ErrorCode::InvalidArgument, "pilot matrix has no antenna count / SNR attached");
        const Eigen::Index M = pilots.M;
        const Eigen::Index K = pilots.K;
        const Eigen::Index tau = pilots.tau;
        require(R_agg.dim() == M * K, ErrorCode::DimensionMismatch, "correlation dimension must equal M*K");

        BussgangModel model;
        if (R_agg.block_dim == M)
        {
            // Block (t, s) of Phi_bar R Phi_bar^H is rho * sum_k phi_tk conj(phi_sk) R_k.
            model.C_y = CMatrix::Zero(M * tau, M * tau);
            for (Eigen::Index t = 0; t < tau; ++t)
                for (Eigen::Index s = 0; s < tau; ++s)
                {
                    auto block = model.C_y.block(t * M, s * M, M, M);
                    for (Eigen::Index k = 0; k < K; ++k)
                        block += (pilots.rho * pilots.phi(t, k) * std::conj(pilots.phi(s, k))) *
                                 R_agg.matrix.block(k * M, k * M, M, M);
                }
        }
        else
        {
            model.C_y = pilots.phi_bar * R_agg.matrix * pilots.phi_bar.adjoint();
        }
        model.C_y.diagonal().array() += 1.0;

        model.a.resize(M * tau);
        for (Eigen::Index i = 0; i < M * tau; ++i)
            model.a[i] = std::sqrt(two_over_pi / model.C_y(i, i).real());
        return model;
    }

    CMatrix arcsin_covariance(const CMatrix &C_y)
    {
        require(C_y.rows() == C_y.cols(), ErrorCode::DimensionMismatch, "covariance must be square");
        const Eigen::Index n = C_y.rows();
        RVector inv_sd(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double d = C_y(i, i).real();
            require(d > 0.0, ErrorCode::InvalidArgument, "covariance diagonal must be strictly positive");
            inv_sd[i] = 1.0 / std::sqrt(d);
        }

        CMatrix C_r(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const double w = inv_sd[i] * inv_sd[j];
                const double x = std::clamp(w * C_y(i, j).real(), -1.0, 1.0);
                const double y = std::clamp(w * C_y(i, j).imag(), -1.0, 1.0);
                C_r(i, j) = two_over_pi * cdouble(std::asin(x), std::asin(y));
            }
        // The normalized diagonal is exactly one; pin it against rounding.
        C_r.diagonal().setOnes();
        return C_r;
    }

    std::pair<CMatrix, CMatrix> quantization_noise_covariance(BussgangModel &model)
    {
        require(model.C_y.size() > 0 && model.a.size() == model.C_y.rows(), ErrorCode::InvalidArgument,
                "Bussgang model needs C_y and A");
        if (model.C_r.size() == 0)
            model.C_r = arcsin_covariance(model.C_y);

        const RVector &a = model.a;
        CMatrix ACyA = a.cast<cdouble>().asDiagonal() * model.C_y * a.cast<cdouble>().asDiagonal();
        model.C_q = hermitian_part(model.C_r - ACyA);
        model.C_n_eff = model.C_q;
        model.C_n_eff.diagonal().array() += a.array().square().cast<cdouble>();
        return {model.C_q, model.C_n_eff};
    }

    std::shared_ptr<const ObservationModel> make_observation_model(const PilotMatrix &pilots,
                                                                   const SpatialCorrelation &R_agg)
    {
        auto model = std::make_shared<ObservationModel>();
        model->pilots = pilots;
        model->bussgang = bussgang_operator(pilots, R_agg);
        quantization_noise_covariance(model->bussgang);
        model->phi_tilde = model->bussgang.a.cast<cdouble>().asDiagonal() * pilots.phi_bar;
        return model;
    }

    QuantizedObservation quantize_pilot_slot(const ChannelState &H, std::shared_ptr<const ObservationModel> model,
                                             Rng &rng)
    {
        require(model != nullptr, ErrorCode::InvalidArgument, "observation model is required");
        auto received = received_pilot_signal(H, model->pilots, rng);
        QuantizedObservation obs;
        obs.slot = H.slot;
        obs.r = one_bit_quantize(received.y);
        obs.model = std::move(model);
        return obs;
    }

    QuantizedObservation quantize_pilot_slot(const ChannelState &H, const PilotMatrix &pilots,
                                             const SpatialCorrelation &R_agg, Rng &rng)
    {
        return quantize_pilot_slot(H, make_observation_model(pilots, R_agg), rng);
    }

    QuantizedObservation gaussian_pilot_slot(const ChannelState &H, std::shared_ptr<const ObservationModel> model,
                                             const CMatrix &noise_sqrt, Rng &rng)
    {
        require(model != nullptr, ErrorCode::InvalidArgument, "observation model is required");
        const auto n = model->phi_tilde.rows();
        require(noise_sqrt.rows() == n && noise_sqrt.cols() == n, ErrorCode::DimensionMismatch,
                "noise factor must be M*tau square");
        QuantizedObservation obs;
        obs.slot = H.slot;
        obs.r = model->phi_tilde * H.h + noise_sqrt * rng.complex_normal(n);
        obs.model = std::move(model);
        return obs;
    }
}
