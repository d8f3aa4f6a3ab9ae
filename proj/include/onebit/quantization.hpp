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

#include <cstdint>
#include <memory>
#include <utility>

#include "onebit/channel.hpp"

namespace onebit
{
    // tau x K pilot matrix. After attach(), `phi_bar` holds the expanded
    // M*tau x M*K matrix Phi (x) sqrt(rho) I_M acting on the stacked channel.
    struct PilotMatrix
    {
        Eigen::Index tau = 0;
        Eigen::Index K = 0;
        Eigen::Index M = 0;
        double rho = 0.0;
        CMatrix phi;
        CMatrix phi_bar;

        PilotMatrix attach(Eigen::Index antennas, double pilot_snr) const;
        bool attached() const { return M > 0; }

        // Phi_bar * h without forming the Kronecker product: vec(sqrt(rho) H Phi^T).
        CVector expand(const CVector &h) const;
    };

    // Bussgang linearization r = A y + q of the one-bit quantizer.
    struct BussgangModel
    {
        RVector a;       // diagonal of A, strictly positive
        CMatrix C_y;     // received-signal covariance
        CMatrix C_r;     // quantized-signal covariance (arcsin law)
        CMatrix C_q;     // quantization-noise covariance
        CMatrix C_n_eff; // A A^H + C_q

        CMatrix A() const { return a.cast<cdouble>().asDiagonal(); }
    };

    // Everything the estimators need to interpret one-bit pilot observations.
    // Static while the pilots and the correlation stay fixed, so it is shared.
    struct ObservationModel
    {
        PilotMatrix pilots;
        BussgangModel bussgang;
        CMatrix phi_tilde; // A * Phi_bar
    };

    struct QuantizedObservation
    {
        std::uint64_t slot = 0;
        CVector r;
        std::shared_ptr<const ObservationModel> model;

        const BussgangModel &bussgang() const { return model->bussgang; }
        const CMatrix &phi_tilde() const { return model->phi_tilde; }
    };

    // First K columns of the tau x tau DFT matrix, entries e^{-j 2 pi m n / tau}.
    PilotMatrix dft_pilots(Eigen::Index tau, Eigen::Index K);

    // Entrywise (sign(Re) + j sign(Im)) / sqrt(2) with sign(0) = +1.
    CVector one_bit_quantize(const CVector &y);

    struct ReceivedPilots
    {
        CVector y;
        CVector n;
    };
    ReceivedPilots received_pilot_signal(const ChannelState &H, const PilotMatrix &pilots, const CVector &noise);
    ReceivedPilots received_pilot_signal(const ChannelState &H, const PilotMatrix &pilots, Rng &rng);

    // A and C_y for the given pilots and aggregate correlation; the remaining
    // covariances are left empty.
    BussgangModel bussgang_operator(const PilotMatrix &pilots, const SpatialCorrelation &R_agg);

    // (2/pi)(arcsin(X) + j arcsin(Y)) with X, Y the diagonally normalized real
    // and imaginary parts of C_y.
    CMatrix arcsin_covariance(const CMatrix &C_y);

    // Fills C_q = C_r - A C_y A^H and C_n_eff = A A^H + C_q (computing C_r when
    // missing) and returns them.
    std::pair<CMatrix, CMatrix> quantization_noise_covariance(BussgangModel &model);

    // Full linearized model: Bussgang operator, arcsin law, noise covariances, A * Phi_bar.
    std::shared_ptr<const ObservationModel> make_observation_model(const PilotMatrix &pilots,
                                                                   const SpatialCorrelation &R_agg);

    QuantizedObservation quantize_pilot_slot(const ChannelState &H, std::shared_ptr<const ObservationModel> model,
                                             Rng &rng);
    QuantizedObservation quantize_pilot_slot(const ChannelState &H, const PilotMatrix &pilots,
                                             const SpatialCorrelation &R_agg, Rng &rng);

    // Quantizer bypass: r = Phi_tilde h + n_eff with n_eff ~ CN(0, C_n_eff) truly
    // Gaussian. `noise_sqrt` must satisfy noise_sqrt * noise_sqrt^H = C_n_eff.
    QuantizedObservation gaussian_pilot_slot(const ChannelState &H, std::shared_ptr<const ObservationModel> model,
                                             const CMatrix &noise_sqrt, Rng &rng);
}
