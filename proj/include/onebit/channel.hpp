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
#include <span>
#include <vector>

#include "onebit/linalg.hpp"
#include "onebit/rng.hpp"

namespace onebit
{
    // Spatial correlation of one user (dim = M) or the block-diagonal aggregate
    // over K users (dim = M*K, block_dim = M). `sqrt_factor` satisfies
    // sqrt_factor * sqrt_factor^H = matrix.
    struct SpatialCorrelation
    {
        Eigen::Index M = 0;
        double r = 0.0;
        double theta = 0.0;
        CMatrix matrix;
        CMatrix sqrt_factor;
        Eigen::Index block_dim = 0;

        Eigen::Index dim() const { return matrix.rows(); }
        Eigen::Index blocks() const { return block_dim > 0 ? dim() / block_dim : 1; }

        // S * g exploiting the block-diagonal structure when present.
        CVector apply_sqrt(const CVector &g) const;

        // Wrap an arbitrary Hermitian PSD matrix, computing its square-root factor.
        static SpatialCorrelation from_matrix(CMatrix matrix, Eigen::Index block_dim = 0);
    };

    struct TemporalStats
    {
        std::vector<double> eta;
        std::vector<double> zeta;

        TemporalStats() = default;
        explicit TemporalStats(std::vector<double> eta);
        static TemporalStats common(double eta, std::size_t K) { return TemporalStats(std::vector<double>(K, eta)); }

        std::size_t users() const { return eta.size(); }
    };

    // h stacks the per-user M-vectors: h = [h_1; h_2; ...; h_K].
    struct ChannelState
    {
        std::uint64_t slot = 0;
        Eigen::Index M = 0;
        CVector h;

        Eigen::Index users() const { return M > 0 ? h.size() / M : 0; }
        auto user(Eigen::Index k) const { return h.segment(k * M, M); }
        auto user(Eigen::Index k) { return h.segment(k * M, M); }

        // M x K matrix whose column k is h_k.
        CMatrix as_matrix() const { return Eigen::Map<const CMatrix>(h.data(), M, users()); }
    };

    // Exponential model: entry (m, n), m < n, equals (r e^{j theta})^{n - m}.
    SpatialCorrelation exponential_correlation(Eigen::Index M, double r, double theta);

    // Block-diagonal MK x MK correlation with the users' blocks in order.
    SpatialCorrelation aggregate_correlation(std::span<const SpatialCorrelation> per_user);

    // Temporal correlation J0(2 pi f_D t) with f_D = v f_c / c.
    double jakes_coefficient(double speed_kmh, double carrier_hz, double interval_s);

    ChannelState init_channel(const SpatialCorrelation &R_agg, Rng &rng);

    // h_{i,k} = eta_k h_{i-1,k} + zeta_k R_k^{1/2} g_{i,k}
    ChannelState evolve_channel(const ChannelState &prev, const TemporalStats &stats,
                                const SpatialCorrelation &R_agg, Rng &rng);
}
