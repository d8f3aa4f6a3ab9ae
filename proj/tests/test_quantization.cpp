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

#include <doctest.h>

#include "onebit/error.hpp"
#include "onebit/quantization.hpp"

using namespace onebit;

namespace
{
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    SpatialCorrelation correlated(Eigen::Index M, Eigen::Index K, double r)
    {
        std::vector<SpatialCorrelation> users;
        for (Eigen::Index k = 0; k < K; ++k)
            users.push_back(exponential_correlation(M, r, 0.7 * static_cast<double>(k)));
        return aggregate_correlation(users);
    }

    CMatrix random_covariance(Rng &rng, Eigen::Index n)
    {
        CMatrix G(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                G(i, j) = rng.complex_normal();
        return hermitian_part(G * G.adjoint() + 0.05 * CMatrix::Identity(n, n));
    }
}

TEST_CASE("DFT pilots")
{
    const auto p1 = dft_pilots(1, 1);
    CHECK(p1.phi.rows() == 1);
    CHECK(std::abs(p1.phi(0, 0) - cdouble(1.0, 0.0)) <= 1e-15);

    const auto p2 = dft_pilots(2, 2);
    CHECK(std::abs(p2.phi(1, 1) - cdouble(-1.0, 0.0)) <= 1e-15);
    CHECK((p2.phi.transpose() * p2.phi.conjugate() - 2.0 * CMatrix::Identity(2, 2)).norm() <= 1e-12);

    const auto p8 = dft_pilots(8, 8);
    CHECK((p8.phi.transpose() * p8.phi.conjugate() - 8.0 * CMatrix::Identity(8, 8)).norm() <= 1e-10);
    CHECK((p8.phi.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-14);

    const auto p_long = dft_pilots(6, 4);
    CHECK((p_long.phi.transpose() * p_long.phi.conjugate() - 6.0 * CMatrix::Identity(4, 4)).norm() <= 1e-10);
    CHECK_THROWS_AS(dft_pilots(2, 3), Error);
}

TEST_CASE("one-bit quantizer")
{
    CVector y(4);
    y << cdouble(1, 1), cdouble(-0.3, 2), cdouble(0, -1e-300), cdouble(0, 0);
    const auto r = one_bit_quantize(y);
    CHECK(r(0) == cdouble(inv_sqrt2, inv_sqrt2));
    CHECK(r(1) == cdouble(-inv_sqrt2, inv_sqrt2));
    CHECK(r(2) == cdouble(inv_sqrt2, -inv_sqrt2));
    CHECK(r(3) == cdouble(inv_sqrt2, inv_sqrt2));
    CHECK(one_bit_quantize(3.7 * y) == r);
}

TEST_CASE("received pilot signal")
{
    const Eigen::Index M = 3, K = 2, tau = 2;
    const auto R = correlated(M, K, 0.4);
    const auto pilots = dft_pilots(tau, K).attach(M, 2.0);
    Rng rng(1, Stream::Test);
    const auto H = init_channel(R, rng);

    const auto clean = received_pilot_signal(H, pilots, CVector::Zero(M * tau));
    CHECK((clean.y - pilots.phi_bar * H.h).norm() <= 1e-12);
    CHECK((pilots.expand(H.h) - pilots.phi_bar * H.h).norm() <= 1e-12);

    ChannelState scalar{0, 1, CVector::Constant(1, cdouble(1, 0))};
    const auto one = received_pilot_signal(scalar, dft_pilots(1, 1).attach(1, 4.0), CVector::Zero(1));
    CHECK(std::abs(one.y(0) - cdouble(2, 0)) <= 1e-15);

    ChannelState zero{0, M, CVector::Zero(M * K)};
    const auto only_noise = received_pilot_signal(zero, pilots, rng);
    CHECK(only_noise.y == only_noise.n);

    const int N = 100000;
    RVector power = RVector::Zero(M * tau);
    for (int n = 0; n < N; ++n)
        power += received_pilot_signal(zero, pilots, rng).y.cwiseAbs2();
    CHECK(((power / N).array() - 1.0).abs().maxCoeff() <= 0.02);
}

TEST_CASE("Bussgang operator")
{
    SUBCASE("zero pilot power")
    {
        const auto R = correlated(4, 1, 0.5);
        const auto bg = bussgang_operator(dft_pilots(1, 1).attach(4, 0.0), R);
        CHECK((bg.a.array() - std::sqrt(two_over_pi)).abs().maxCoeff() <= 1e-15);
    }
    SUBCASE("scalar form for DFT pilots and unit-diagonal R")
    {
        const Eigen::Index M = 6, K = 8;
        const double rho = std::pow(10.0, -0.5);
        const auto R = correlated(M, K, 0.8);
        const auto pilots = dft_pilots(K, K).attach(M, rho);
        const auto bg = bussgang_operator(pilots, R);
        const double scalar = std::sqrt(two_over_pi / (K * rho + 1.0));
        CHECK(std::abs(scalar - 0.42466) <= 1e-4);
        CHECK((bg.a.array() - scalar).abs().maxCoeff() <= 1e-10);

        const CMatrix signal = pilots.phi_bar * R.matrix * pilots.phi_bar.adjoint();
        CHECK((signal.diagonal().array() - K * rho).abs().maxCoeff() <= 1e-10);

        // Dense path on the same matrix, without the block hint.
        const auto dense = bussgang_operator(pilots, SpatialCorrelation::from_matrix(R.matrix));
        CHECK((dense.C_y - bg.C_y).norm() <= 1e-10);
        CHECK((dense.C_y - (signal + CMatrix::Identity(M * K, M * K))).norm() <= 1e-10);
        CHECK((dense.a.array() - scalar).abs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("arcsin law")
{
    CHECK((arcsin_covariance(2.5 * CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)).norm() <= 1e-15);

    CMatrix C(2, 2);
    C << 1.0, 0.5, 0.5, 1.0;
    const auto Cr = arcsin_covariance(C);
    CHECK(Cr(0, 1).real() == doctest::Approx(1.0 / 3.0));
    CHECK(Cr(0, 1).imag() == doctest::Approx(0.0));

    Rng rng(2, Stream::Test);
    const auto Cy = random_covariance(rng, 6);
    const auto Cr6 = arcsin_covariance(Cy);
    for (int i = 0; i < 6; ++i)
        CHECK(Cr6(i, i) == cdouble(1.0, 0.0));
    CHECK(hermitian_defect(Cr6) <= 1e-14);

    CHECK_THROWS_AS(arcsin_covariance(CMatrix::Zero(2, 2)), Error);
}

TEST_CASE("quantization noise covariance")
{
    SUBCASE("uncorrelated channel")
    {
        const Eigen::Index M = 4, K = 8;
        const double rho = std::pow(10.0, -0.5);
        const auto R = correlated(M, K, 0.0);
        auto bg = bussgang_operator(dft_pilots(K, K).attach(M, rho), R);
        const auto [C_q, C_n] = quantization_noise_covariance(bg);
        const auto I = CMatrix::Identity(M * K, M * K);
        CHECK((C_q - (1.0 - two_over_pi) * I).norm() <= 1e-12);
        const double beta = two_over_pi * K * rho / (K * rho + 1.0);
        CHECK((C_n - (1.0 - beta) * I).norm() <= 1e-12);
        CHECK(std::abs((1.0 - beta) - 0.54376) <= 1e-4);
        CHECK((bg.C_r - I).norm() <= 1e-12);
    }
    SUBCASE("positive semidefinite for random inputs")
    {
        Rng rng(3, Stream::Test);
        for (int trial = 0; trial < 20; ++trial)
        {
            BussgangModel bg;
            bg.C_y = random_covariance(rng, 5);
            bg.a = (two_over_pi / bg.C_y.diagonal().real().array()).sqrt().matrix();
            const auto [C_q, C_n] = quantization_noise_covariance(bg);
            CHECK(min_eigenvalue(C_q) >= -1e-8);
            CHECK(hermitian_defect(C_q) <= 1e-12);
            CHECK((C_n - (bg.A() * bg.A().adjoint() + C_q)).norm() <= 1e-12);
        }
    }
}

TEST_CASE("quantized pilot slot")
{
    const Eigen::Index M = 2, K = 2;
    const auto R = correlated(M, K, 0.5);
    const auto pilots = dft_pilots(K, K).attach(M, 2.0);
    const auto model = make_observation_model(pilots, R);
    CHECK((model->phi_tilde - model->bussgang.A() * pilots.phi_bar).norm() <= 1e-15);

    Rng rng(4, Stream::Test);
    const auto H = init_channel(R, rng);
    const auto obs = quantize_pilot_slot(H, model, rng);
    for (Eigen::Index i = 0; i < obs.r.size(); ++i)
    {
        CHECK(std::abs(std::abs(obs.r(i).real()) - inv_sqrt2) == 0.0);
        CHECK(std::abs(std::abs(obs.r(i).imag()) - inv_sqrt2) == 0.0);
    }

    Rng a(9, Stream::PilotNoise, 1), b(9, Stream::PilotNoise, 1);
    CHECK(quantize_pilot_slot(H, model, a).r == quantize_pilot_slot(H, pilots, R, b).r);

    SUBCASE("Bussgang cross-correlation")
    {
        const int N = 100000;
        const Eigen::Index n = M * K;
        CMatrix cross = CMatrix::Zero(n, n);
        Rng rng2(5, Stream::Test);
        for (int s = 0; s < N; ++s)
        {
            const auto h = init_channel(R, rng2);
            const auto rx = received_pilot_signal(h, pilots, rng2);
            cross.noalias() += one_bit_quantize(rx.y) * rx.y.adjoint();
        }
        const CMatrix expected = model->bussgang.A() * model->bussgang.C_y;
        CHECK((cross / N - expected).cwiseAbs().maxCoeff() <= 0.02);
    }

    SUBCASE("Gaussian bypass has the effective-noise covariance")
    {
        const CMatrix S = hermitian_sqrt(model->bussgang.C_n_eff);
        const int N = 100000;
        CMatrix acc = CMatrix::Zero(M * K, M * K);
        Rng rng3(6, Stream::Test);
        for (int s = 0; s < N; ++s)
        {
            const auto g = gaussian_pilot_slot(H, model, S, rng3);
            const CVector e = g.r - model->phi_tilde * H.h;
            acc.noalias() += e * e.adjoint();
        }
        CHECK((acc / N - model->bussgang.C_n_eff).cwiseAbs().maxCoeff() <= 0.02);
    }
}
