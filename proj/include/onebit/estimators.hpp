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
#include <span>
#include <vector>

#include "onebit/channel.hpp"
#include "onebit/quantization.hpp"

namespace onebit
{
    // How the Kalman gain inverts the innovation covariance.
    struct GainStrategy
    {
        enum class Kind
        {
            Exact,
            Tpe,
        };

        Kind kind = Kind::Exact;
        int order = 1;      // TPE order L
        double alpha = 0.5; // TPE convergence coefficient

        static GainStrategy exact() { return {}; }
        // Requires L >= 1 and 0 < alpha < 2.
        static GainStrategy tpe(int order, double alpha);
    };

    // Filter state carried between slots: h_{i|i} and M_{i|i}.
    struct KalmanState
    {
        std::uint64_t slot = 0;
        CVector h_hat;
        CMatrix M_filt;
        TemporalStats stats;
        std::shared_ptr<const SpatialCorrelation> R_agg;

        double normalized_trace() const { return M_filt.trace().real() / static_cast<double>(M_filt.rows()); }
    };

    // h_LS = pinv(Phi_bar) r. Throws when the expanded pilots are rank deficient.
    CVector ls_estimate(const QuantizedObservation &obs, const PilotMatrix &pilots);

    // (1/N) sum h h^H, Hermitian-symmetrized and with negative eigenvalues
    // floored at zero. The returned correlation carries a square-root factor.
    SpatialCorrelation sample_correlation(std::span<const CVector> samples);

    // Rescales a correlation estimate to unit diagonal, D^{-1/2} R D^{-1/2}.
    // Entries whose variance vanishes become uncorrelated unit-variance entries.
    CMatrix unit_diagonal(const CMatrix &R);

    // Per-user sampled correlations from stacked M*K estimates (e.g. LS
    // estimates of past slots), aggregated block-diagonally.
    SpatialCorrelation sampled_aggregate_correlation(std::span<const CVector> stacked, Eigen::Index M,
                                                     bool rescale_diagonal = true);

    // h = C_h Phi_tilde^H C_r^{-1} r with C_h = R_agg.
    CVector blmmse_estimate(const QuantizedObservation &obs, const SpatialCorrelation &R_agg);

    // BLMMSE with the combining matrix precomputed for a static model.
    class BlmmseEstimator
    {
    public:
        BlmmseEstimator(const SpatialCorrelation &R_agg, std::shared_ptr<const ObservationModel> model);
        CVector estimate(const CVector &r) const { return W_ * r; }
        const CMatrix &matrix() const { return W_; }

    private:
        CMatrix W_;
    };

    // alpha * sum_{l=0}^{L} (I - alpha X)^l by Horner accumulation (L products).
    // Warns when alpha is outside (0, 2 / lambda_max(X)).
    CMatrix tpe_inverse(const CMatrix &X, double alpha, int order);

    KalmanState kfb_init(std::shared_ptr<const SpatialCorrelation> R_agg, TemporalStats stats);
    KalmanState kfb_init(const SpatialCorrelation &R_agg, TemporalStats stats);

    // One predict / gain / correct cycle. With a TPE gain the approximated
    // gain is also used in the M_{i|i} update.
    KalmanState kfb_step(const KalmanState &state, const QuantizedObservation &obs, const GainStrategy &gain);

    // The filter's covariance recursion does not depend on the observations,
    // so the gains of the first `slots` slots are computed once and shared by
    // every Monte-Carlo trial with the same statistics.
    class GainSchedule
    {
    public:
        GainSchedule(const SpatialCorrelation &R_agg, const TemporalStats &stats,
                     std::shared_ptr<const ObservationModel> model, const GainStrategy &gain, std::size_t slots);

        std::size_t slots() const { return gains_.size(); }

        // h_{i|i} from h_{i-1|i-1} and r_i, for slot i in [1, slots()].
        CVector step(const CVector &h_prev, const CVector &r, std::size_t slot) const;

        const CMatrix &gain(std::size_t slot) const { return gains_.at(slot - 1); }
        // trace(M_{i|i-1}) / MK and trace(M_{i|i}) / MK for slot i (1-based index i-1).
        const std::vector<double> &predicted_nmse() const { return m_pred_; }
        const std::vector<double> &filtered_nmse() const { return m_filt_; }

    private:
        std::shared_ptr<const ObservationModel> model_;
        CVector eta_;
        std::vector<CMatrix> gains_;
        std::vector<double> m_pred_;
        std::vector<double> m_filt_;
    };
}
