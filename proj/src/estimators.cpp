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

#include "onebit/estimators.hpp"

#include <cmath>
#include <sstream>

#include "onebit/error.hpp"

namespace onebit
{
    namespace
    {
        // eta (x) I_M as a vector of per-entry coefficients.
        RVector expand_per_user(const std::vector<double> &per_user, Eigen::Index M)
        {
            RVector out(static_cast<Eigen::Index>(per_user.size()) * M);
            for (std::size_t k = 0; k < per_user.size(); ++k)
                out.segment(static_cast<Eigen::Index>(k) * M, M).setConstant(per_user[k]);
            return out;
        }

        // eta M eta^H + zeta R zeta^H with diagonal eta, zeta.
        CMatrix predict_covariance(const CMatrix &M_filt, const CMatrix &R, const RVector &eta, const RVector &zeta)
        {
            CMatrix out = (eta * eta.transpose()).cast<cdouble>().cwiseProduct(M_filt);
            out += (zeta * zeta.transpose()).cast<cdouble>().cwiseProduct(R);
            return out;
        }

        struct Update
        {
            CMatrix gain;
            CMatrix M_filt;
        };

        Update kalman_update(const CMatrix &M_pred, const ObservationModel &model, const GainStrategy &strategy)
        {
            const CMatrix &Pt = model.phi_tilde;
            CMatrix PtM = Pt * M_pred; // Phi_tilde M_{i|i-1}
            CMatrix X = model.bussgang.C_n_eff + PtM * Pt.adjoint();
            X = hermitian_part(X);

            Update out;
            if (strategy.kind == GainStrategy::Kind::Exact)
            {
                Eigen::LLT<CMatrix> llt(X);
                if (llt.info() != Eigen::Success)
                    fail(ErrorCode::Numerical, "innovation covariance is not positive definite");
                // X and M are Hermitian, so K = M Phi^H X^{-1} = (X^{-1} Phi M)^H.
                out.gain = llt.solve(PtM).adjoint();
            }
            else
            {
                out.gain = PtM.adjoint() * tpe_inverse(X, strategy.alpha, strategy.order);
            }
            out.M_filt = M_pred - out.gain * PtM;
            out.M_filt = hermitian_part(out.M_filt);
            return out;
        }
    }

    GainStrategy GainStrategy::tpe(int order, double alpha)
    {
        require(order >= 1, ErrorCode::InvalidArgument, "TPE order must be at least 1");
        require(alpha > 0.0 && alpha < 2.0, ErrorCode::InvalidArgument, "TPE coefficient must satisfy 0 < alpha < 2");
        GainStrategy g;
        g.kind = Kind::Tpe;
        g.order = order;
        g.alpha = alpha;
        return g;
    }

    CVector ls_estimate(const QuantizedObservation &obs, const PilotMatrix &pilots)
    {
        require(pilots.attached(), ErrorCode::InvalidArgument, "pilot matrix has no antenna count / SNR attached");
        require(obs.r.size() == pilots.M * pilots.tau, ErrorCode::DimensionMismatch, "observation length must equal M*tau");
        if (pilots.rho <= 0.0)
            fail(ErrorCode::Numerical, "expanded pilot matrix is rank deficient (zero pilot power)");

        // pinv(Phi (x) sqrt(rho) I) = pinv(Phi) (x) I / sqrt(rho)
        Eigen::Index rank = 0;
        CMatrix phi_pinv = pseudo_inverse(pilots.phi, 1e-10, &rank);
        if (rank < pilots.K)
            fail(ErrorCode::Numerical, "pilot matrix is rank deficient");

        Eigen::Map<const CMatrix> Rq(obs.r.data(), pilots.M, pilots.tau);
        CMatrix H = (Rq * phi_pinv.transpose()) / std::sqrt(pilots.rho);
        return Eigen::Map<const CVector>(H.data(), H.size());
    }

    SpatialCorrelation sample_correlation(std::span<const CVector> samples)
    {
        require(!samples.empty(), ErrorCode::InvalidArgument, "sample list is empty");
        const Eigen::Index n = samples.front().size();
        CMatrix R = CMatrix::Zero(n, n);
        for (const auto &h : samples)
        {
            require(h.size() == n, ErrorCode::DimensionMismatch, "samples must share one length");
            R.selfadjointView<Eigen::Lower>().rankUpdate(h);
        }
        R = R.selfadjointView<Eigen::Lower>();
        R /= static_cast<double>(samples.size());
        R = hermitian_part(R);

        Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
        if (es.eigenvalues().minCoeff() < 0.0)
        {
            RVector floored = es.eigenvalues().cwiseMax(0.0);
            R = es.eigenvectors() * floored.cast<cdouble>().asDiagonal() * es.eigenvectors().adjoint();
            R = hermitian_part(R);
        }
        return SpatialCorrelation::from_matrix(std::move(R));
    }

    CMatrix unit_diagonal(const CMatrix &R)
    {
        const Eigen::Index n = R.rows();
        RVector scale(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double d = R(i, i).real();
            scale[i] = d > 1e-300 ? 1.0 / std::sqrt(d) : 0.0;
        }
        CMatrix out = scale.cast<cdouble>().asDiagonal() * R * scale.cast<cdouble>().asDiagonal();
        out.diagonal().setOnes();
        return out;
    }

    SpatialCorrelation sampled_aggregate_correlation(std::span<const CVector> stacked, Eigen::Index M,
                                                     bool rescale_diagonal)
    {
        require(!stacked.empty(), ErrorCode::InvalidArgument, "sample list is empty");
        require(M >= 1 && stacked.front().size() % M == 0, ErrorCode::DimensionMismatch,
                "sample length must be a multiple of M");
        const Eigen::Index K = stacked.front().size() / M;

        std::vector<SpatialCorrelation> per_user;
        std::vector<CVector> user_samples(stacked.size());
        for (Eigen::Index k = 0; k < K; ++k)
        {
            for (std::size_t n = 0; n < stacked.size(); ++n)
                user_samples[n] = stacked[n].segment(k * M, M);
            auto Rk = sample_correlation(user_samples);
            if (rescale_diagonal)
                Rk = SpatialCorrelation::from_matrix(unit_diagonal(Rk.matrix));
            per_user.push_back(std::move(Rk));
        }
        return aggregate_correlation(per_user);
    }

    CVector blmmse_estimate(const QuantizedObservation &obs, const SpatialCorrelation &R_agg)
    {
        require(obs.model != nullptr, ErrorCode::InvalidArgument, "observation carries no model");
        return BlmmseEstimator(R_agg, obs.model).estimate(obs.r);
    }

    BlmmseEstimator::BlmmseEstimator(const SpatialCorrelation &R_agg, std::shared_ptr<const ObservationModel> model)
    {
        require(model != nullptr, ErrorCode::InvalidArgument, "observation model is required");
        const CMatrix &Pt = model->phi_tilde;
        require(R_agg.dim() == Pt.cols(), ErrorCode::DimensionMismatch, "correlation dimension must equal M*K");
        require(model->bussgang.C_r.rows() == Pt.rows(), ErrorCode::InvalidArgument, "model has no quantized covariance");

        Eigen::LLT<CMatrix> llt(model->bussgang.C_r);
        if (llt.info() != Eigen::Success)
            fail(ErrorCode::Numerical, "quantized-signal covariance is singular");
        // W = R Phi^H C_r^{-1} = (C_r^{-1} Phi R)^H
        W_ = llt.solve(Pt * R_agg.matrix).adjoint();
    }

    CMatrix tpe_inverse(const CMatrix &X, double alpha, int order)
    {
        require(X.rows() == X.cols(), ErrorCode::DimensionMismatch, "TPE input must be square");
        require(alpha > 0.0, ErrorCode::InvalidArgument, "TPE coefficient must be positive");
        require(order >= 0, ErrorCode::InvalidArgument, "TPE order must be non-negative");

        const double lambda_max = max_eigenvalue(X);
        if (lambda_max > 0.0 && alpha >= 2.0 / lambda_max)
        {
            std::ostringstream msg;
            msg << "TPE coefficient alpha=" << alpha << " outside convergence region (0, " << 2.0 / lambda_max
                << "); the expansion diverges";
            warn(msg.str());
        }

        const Eigen::Index n = X.rows();
        CMatrix B = -alpha * X;
        B.diagonal().array() += 1.0;
        CMatrix acc = CMatrix::Identity(n, n);
        for (int l = 0; l < order; ++l)
        {
            CMatrix next = B * acc;
            next.diagonal().array() += 1.0;
            acc.swap(next);
        }
        return alpha * acc;
    }

    KalmanState kfb_init(std::shared_ptr<const SpatialCorrelation> R_agg, TemporalStats stats)
    {
        require(R_agg != nullptr, ErrorCode::InvalidArgument, "correlation is required");
        KalmanState s;
        s.slot = 0;
        s.h_hat = CVector::Zero(R_agg->dim());
        s.M_filt = R_agg->matrix;
        s.stats = std::move(stats);
        s.R_agg = std::move(R_agg);
        return s;
    }

    KalmanState kfb_init(const SpatialCorrelation &R_agg, TemporalStats stats)
    {
        return kfb_init(std::make_shared<const SpatialCorrelation>(R_agg), std::move(stats));
    }

    KalmanState kfb_step(const KalmanState &state, const QuantizedObservation &obs, const GainStrategy &gain)
    {
        require(obs.model != nullptr, ErrorCode::InvalidArgument, "observation carries no model");
        require(obs.slot == state.slot + 1, ErrorCode::InvalidArgument, "observation slot must follow the state slot");
        const Eigen::Index N = state.h_hat.size();
        const auto K = static_cast<Eigen::Index>(state.stats.users());
        require(K > 0 && N % K == 0, ErrorCode::DimensionMismatch, "temporal statistics do not match the state");
        require(obs.phi_tilde().cols() == N && obs.r.size() == obs.phi_tilde().rows(), ErrorCode::DimensionMismatch,
                "observation does not match the state");

        const Eigen::Index M = N / K;
        const RVector eta = expand_per_user(state.stats.eta, M);
        const RVector zeta = expand_per_user(state.stats.zeta, M);

        CVector h_pred = eta.cast<cdouble>().cwiseProduct(state.h_hat);
        CMatrix M_pred = predict_covariance(state.M_filt, state.R_agg->matrix, eta, zeta);
        auto update = kalman_update(M_pred, *obs.model, gain);

        KalmanState next;
        next.slot = obs.slot;
        next.h_hat = h_pred + update.gain * (obs.r - obs.phi_tilde() * h_pred);
        next.M_filt = std::move(update.M_filt);
        next.stats = state.stats;
        next.R_agg = state.R_agg;
        return next;
    }

    GainSchedule::GainSchedule(const SpatialCorrelation &R_agg, const TemporalStats &stats,
                               std::shared_ptr<const ObservationModel> model, const GainStrategy &gain,
                               std::size_t slots)
        : model_(std::move(model))
    {
        require(model_ != nullptr, ErrorCode::InvalidArgument, "observation model is required");
        const Eigen::Index N = R_agg.dim();
        const auto K = static_cast<Eigen::Index>(stats.users());
        require(K > 0 && N % K == 0 && model_->phi_tilde.cols() == N, ErrorCode::DimensionMismatch,
                "statistics, correlation and model disagree");
        const Eigen::Index M = N / K;
        const RVector eta = expand_per_user(stats.eta, M);
        const RVector zeta = expand_per_user(stats.zeta, M);
        eta_ = eta.cast<cdouble>();

        CMatrix M_filt = R_agg.matrix;
        const double norm = static_cast<double>(N);
        gains_.reserve(slots);
        for (std::size_t i = 0; i < slots; ++i)
        {
            CMatrix M_pred = predict_covariance(M_filt, R_agg.matrix, eta, zeta);
            m_pred_.push_back(M_pred.trace().real() / norm);
            auto update = kalman_update(M_pred, *model_, gain);
            gains_.push_back(std::move(update.gain));
            M_filt = std::move(update.M_filt);
            m_filt_.push_back(M_filt.trace().real() / norm);
        }
    }

    CVector GainSchedule::step(const CVector &h_prev, const CVector &r, std::size_t slot) const
    {
        require(slot >= 1 && slot <= gains_.size(), ErrorCode::InvalidArgument, "slot outside the precomputed schedule");
        CVector h_pred = eta_.cwiseProduct(h_prev);
        CVector innovation = r - model_->phi_tilde * h_pred;
        return h_pred + gains_[slot - 1] * innovation;
    }
}
