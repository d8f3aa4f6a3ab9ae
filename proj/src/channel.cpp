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

#include "onebit/channel.hpp"

#include <cmath>
#include <string>

#include "onebit/error.hpp"

namespace onebit
{
    namespace
    {
        constexpr double speed_of_light = 3.0e8;
    }

    CVector SpatialCorrelation::apply_sqrt(const CVector &g) const
    {
        require(g.size() == dim(), ErrorCode::DimensionMismatch, "innovation length does not match correlation dimension");
        if (block_dim <= 0 || block_dim == dim())
            return sqrt_factor * g;

        CVector out(g.size());
        for (Eigen::Index b = 0; b < blocks(); ++b)
        {
            auto S = sqrt_factor.block(b * block_dim, b * block_dim, block_dim, block_dim);
            out.segment(b * block_dim, block_dim).noalias() = S * g.segment(b * block_dim, block_dim);
        }
        return out;
    }

    SpatialCorrelation SpatialCorrelation::from_matrix(CMatrix matrix, Eigen::Index block_dim)
    {
        require(matrix.rows() == matrix.cols() && matrix.rows() > 0, ErrorCode::DimensionMismatch,
                "correlation matrix must be square and non-empty");
        SpatialCorrelation out;
        out.M = block_dim > 0 ? block_dim : matrix.rows();
        out.block_dim = block_dim > 0 ? block_dim : matrix.rows();
        require(matrix.rows() % out.block_dim == 0, ErrorCode::DimensionMismatch,
                "block size does not divide correlation dimension");

        out.matrix = std::move(matrix);
        out.sqrt_factor = CMatrix::Zero(out.dim(), out.dim());
        for (Eigen::Index b = 0; b < out.blocks(); ++b)
        {
            auto at = b * out.block_dim;
            out.sqrt_factor.block(at, at, out.block_dim, out.block_dim) =
                hermitian_sqrt(out.matrix.block(at, at, out.block_dim, out.block_dim));
        }
        return out;
    }

    TemporalStats::TemporalStats(std::vector<double> eta_in) : eta(std::move(eta_in))
    {
        zeta.reserve(eta.size());
        for (double e : eta)
        {
            require(e >= 0.0 && e <= 1.0, ErrorCode::InvalidArgument, "temporal correlation must lie in [0, 1]");
            zeta.push_back(std::sqrt(1.0 - e * e));
        }
    }

    SpatialCorrelation exponential_correlation(Eigen::Index M, double r, double theta)
    {
        require(M >= 1, ErrorCode::InvalidArgument, "antenna count must be positive");
        require(r >= 0.0 && r < 1.0, ErrorCode::InvalidArgument, "spatial correlation magnitude must satisfy 0 <= r < 1");
        require(theta >= 0.0 && theta < 2.0 * pi, ErrorCode::InvalidArgument, "phase must lie in [0, 2pi)");

        const cdouble rk = std::polar(r, theta);
        CMatrix R = CMatrix::Identity(M, M);
        // Powers built by repeated multiplication keep the Toeplitz structure exact.
        cdouble power = 1.0;
        for (Eigen::Index d = 1; d < M; ++d)
        {
            power *= rk;
            for (Eigen::Index m = 0; m + d < M; ++m)
            {
                R(m, m + d) = power;
                R(m + d, m) = std::conj(power);
            }
        }

        auto out = SpatialCorrelation::from_matrix(std::move(R));
        out.r = r;
        out.theta = theta;
        return out;
    }

    SpatialCorrelation aggregate_correlation(std::span<const SpatialCorrelation> per_user)
    {
        require(!per_user.empty(), ErrorCode::InvalidArgument, "at least one user is required");
        const Eigen::Index M = per_user.front().dim();
        for (const auto &R : per_user)
            require(R.dim() == M, ErrorCode::DimensionMismatch, "all users must share the same antenna count");

        const auto K = static_cast<Eigen::Index>(per_user.size());
        SpatialCorrelation out;
        out.M = M;
        out.block_dim = M;
        out.r = per_user.front().r;
        out.matrix = CMatrix::Zero(M * K, M * K);
        out.sqrt_factor = CMatrix::Zero(M * K, M * K);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            out.matrix.block(k * M, k * M, M, M) = per_user[k].matrix;
            out.sqrt_factor.block(k * M, k * M, M, M) = per_user[k].sqrt_factor;
        }
        return out;
    }

    double jakes_coefficient(double speed_kmh, double carrier_hz, double interval_s)
    {
        require(speed_kmh >= 0.0, ErrorCode::InvalidArgument, "speed must be non-negative");
        require(carrier_hz > 0.0, ErrorCode::InvalidArgument, "carrier frequency must be positive");
        require(interval_s > 0.0, ErrorCode::InvalidArgument, "slot interval must be positive");
        const double doppler = (speed_kmh / 3.6) * carrier_hz / speed_of_light;
        return std::cyl_bessel_j(0.0, 2.0 * pi * doppler * interval_s);
    }

    ChannelState init_channel(const SpatialCorrelation &R_agg, Rng &rng)
    {
        ChannelState state;
        state.slot = 0;
        state.M = R_agg.block_dim > 0 ? R_agg.block_dim : R_agg.dim();
        state.h = R_agg.apply_sqrt(rng.complex_normal(R_agg.dim()));
        return state;
    }

    ChannelState evolve_channel(const ChannelState &prev, const TemporalStats &stats,
                                const SpatialCorrelation &R_agg, Rng &rng)
    {
        require(prev.h.size() == R_agg.dim(), ErrorCode::DimensionMismatch, "channel length does not match correlation");
        require(static_cast<Eigen::Index>(stats.users()) == prev.users(), ErrorCode::DimensionMismatch,
                "temporal statistics must have one entry per user");

        CVector innovation = R_agg.apply_sqrt(rng.complex_normal(R_agg.dim()));
        ChannelState next;
        next.slot = prev.slot + 1;
        next.M = prev.M;
        next.h.resize(prev.h.size());
        for (Eigen::Index k = 0; k < prev.users(); ++k)
        {
            const double eta = stats.eta[static_cast<std::size_t>(k)];
            const double zeta = stats.zeta[static_cast<std::size_t>(k)];
            next.user(k) = eta * prev.user(k) + zeta * innovation.segment(k * prev.M, prev.M);
        }
        return next;
    }
}
