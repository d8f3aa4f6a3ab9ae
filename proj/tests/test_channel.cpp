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
#include "onebit/channel.hpp"

using namespace onebit;

namespace
{
    CMatrix sample_covariance(const std::vector<CVector> &xs)
    {
        CMatrix acc = CMatrix::Zero(xs.front().size(), xs.front().size());
        for (const auto &x : xs)
            acc.noalias() += x * x.adjoint();
        return acc / static_cast<double>(xs.size());
    }
}

TEST_CASE("exponential correlation structure")
{
    SUBCASE("r = 0 gives the identity")
    {
        const auto R = exponential_correlation(3, 0.0, 0.0);
        CHECK((R.matrix - CMatrix::Identity(3, 3)).norm() == 0.0);
    }
    SUBCASE("two antennas")
    {
        const auto R = exponential_correlation(2, 0.5, 0.0);
        CHECK(R.matrix(0, 1).real() == doctest::Approx(0.5));
        CHECK(R.matrix(1, 0).real() == doctest::Approx(0.5));
        CHECK(R.matrix(0, 0).real() == 1.0);
    }
    SUBCASE("invariants")
    {
        const double r = 0.8, theta = 1.3;
        const auto R = exponential_correlation(8, r, theta);
        CHECK(hermitian_defect(R.matrix) <= 1e-12);
        CHECK(min_eigenvalue(R.matrix) >= -1e-10);
        for (int m = 0; m < 8; ++m)
        {
            CHECK(R.matrix(m, m) == cdouble(1.0, 0.0));
            for (int n = m + 1; n < 8; ++n)
                CHECK(std::abs(R.matrix(m, n) - std::pow(std::polar(r, theta), n - m)) <= 1e-12);
        }
        CHECK((R.sqrt_factor * R.sqrt_factor.adjoint() - R.matrix).norm() <= 1e-8);
    }
    SUBCASE("near-singular correlation keeps a valid square root")
    {
        const auto R = exponential_correlation(16, 0.999999, 0.7);
        CHECK((R.sqrt_factor * R.sqrt_factor.adjoint() - R.matrix).norm() <= 1e-8);
    }
    SUBCASE("rejects invalid parameters")
    {
        CHECK_THROWS_AS(exponential_correlation(0, 0.5, 0.0), Error);
        CHECK_THROWS_AS(exponential_correlation(4, 1.0, 0.0), Error);
        CHECK_THROWS_AS(exponential_correlation(4, -0.1, 0.0), Error);
        CHECK_THROWS_AS(exponential_correlation(4, 0.5, 2.0 * pi), Error);
    }
}

TEST_CASE("aggregate correlation")
{
    const auto R1 = exponential_correlation(3, 0.6, 0.4);
    const auto single = aggregate_correlation(std::vector<SpatialCorrelation>{R1});
    CHECK((single.matrix - R1.matrix).norm() == 0.0);

    const auto eye = exponential_correlation(2, 0.0, 0.0);
    const auto two = aggregate_correlation(std::vector<SpatialCorrelation>{eye, eye});
    CHECK((two.matrix - CMatrix::Identity(4, 4)).norm() == 0.0);

    const auto a = exponential_correlation(2, 0.5, 0.0);
    const auto b = exponential_correlation(2, 0.5, 1.0);
    const auto agg = aggregate_correlation(std::vector<SpatialCorrelation>{a, b});
    CHECK(agg.block_dim == 2);
    CHECK(agg.matrix.block(0, 2, 2, 2).norm() == 0.0);
    CHECK(agg.matrix.block(2, 0, 2, 2).norm() == 0.0);
    CHECK((agg.matrix.block(2, 2, 2, 2) - b.matrix).norm() == 0.0);
    CHECK((agg.sqrt_factor * agg.sqrt_factor.adjoint() - agg.matrix).norm() <= 1e-10);

    CHECK_THROWS_AS(aggregate_correlation(std::vector<SpatialCorrelation>{a, exponential_correlation(3, 0.5, 0.0)}),
                    Error);
}

TEST_CASE("jakes coefficient")
{
    CHECK(jakes_coefficient(0.0, 2.5e9, 5e-3) == 1.0);
    CHECK(std::abs(jakes_coefficient(3.0, 2.5e9, 5e-3) - 0.988) <= 1e-3);
    CHECK(std::abs(jakes_coefficient(10.0, 2.5e9, 5e-3) - 0.872) <= 1e-3);
    CHECK_THROWS_AS(jakes_coefficient(-1.0, 2.5e9, 5e-3), Error);
}

TEST_CASE("temporal statistics")
{
    const TemporalStats s({0.6, 1.0, 0.0});
    CHECK(s.zeta[0] == doctest::Approx(0.8));
    CHECK(s.zeta[1] == 0.0);
    CHECK(s.zeta[2] == 1.0);
    CHECK_THROWS_AS(TemporalStats({1.2}), Error);
    CHECK_THROWS_AS(TemporalStats({-0.1}), Error);
}

TEST_CASE("initial channel statistics")
{
    const int N = 100000;
    SUBCASE("unit variance for R = I")
    {
        const auto R = exponential_correlation(4, 0.0, 0.0);
        Rng rng(1, Stream::Test);
        RVector power = RVector::Zero(4);
        for (int n = 0; n < N; ++n)
            power += init_channel(R, rng).h.cwiseAbs2();
        power /= N;
        CHECK((power.array() - 1.0).abs().maxCoeff() <= 0.02);
    }
    SUBCASE("sample covariance matches R")
    {
        const auto R = exponential_correlation(4, 0.7, 0.5);
        Rng rng(2, Stream::Test);
        std::vector<CVector> xs;
        for (int n = 0; n < N; ++n)
            xs.push_back(init_channel(R, rng).h);
        CHECK((sample_covariance(xs) - R.matrix).cwiseAbs().maxCoeff() <= 0.02);
    }
    SUBCASE("deterministic for a fixed seed")
    {
        const auto R = exponential_correlation(4, 0.7, 0.5);
        Rng a(5, Stream::Channel, 3), b(5, Stream::Channel, 3), c(5, Stream::Channel, 4);
        const auto ha = init_channel(R, a).h;
        CHECK(ha == init_channel(R, b).h);
        CHECK(ha != init_channel(R, c).h);
    }
}

TEST_CASE("channel evolution")
{
    const auto R1 = exponential_correlation(3, 0.6, 0.9);
    const auto R = aggregate_correlation(std::vector<SpatialCorrelation>{R1});

    SUBCASE("eta = 1 freezes the channel")
    {
        Rng rng(3, Stream::Test);
        const auto h0 = init_channel(R, rng);
        const auto h1 = evolve_channel(h0, TemporalStats::common(1.0, 1), R, rng);
        CHECK(h1.h == h0.h);
        CHECK(h1.slot == h0.slot + 1);
    }

    SUBCASE("stationarity and lag-one covariance")
    {
        const double eta = 0.7;
        const auto stats = TemporalStats::common(eta, 1);
        const int N = 100000;
        std::vector<CVector> s1, s5, s20;
        CMatrix lag = CMatrix::Zero(3, 3);
        Rng rng(4, Stream::Test);
        for (int n = 0; n < N; ++n)
        {
            auto h = init_channel(R, rng);
            for (int i = 1; i <= 20; ++i)
            {
                auto next = evolve_channel(h, stats, R, rng);
                if (i == 1)
                    lag.noalias() += next.h * h.h.adjoint();
                h = std::move(next);
                if (i == 1)
                    s1.push_back(h.h);
                if (i == 5)
                    s5.push_back(h.h);
                if (i == 20)
                    s20.push_back(h.h);
            }
        }
        CHECK((sample_covariance(s1) - R.matrix).cwiseAbs().maxCoeff() <= 0.02);
        CHECK((sample_covariance(s5) - R.matrix).cwiseAbs().maxCoeff() <= 0.02);
        CHECK((sample_covariance(s20) - R.matrix).cwiseAbs().maxCoeff() <= 0.02);
        CHECK((lag / N - eta * R.matrix).cwiseAbs().maxCoeff() <= 0.02);
    }

    SUBCASE("eta = 0 forgets the past")
    {
        const auto stats = TemporalStats::common(0.0, 1);
        const int N = 100000;
        CMatrix cross = CMatrix::Zero(3, 3);
        Rng rng(6, Stream::Test);
        for (int n = 0; n < N; ++n)
        {
            const auto h0 = init_channel(R, rng);
            const auto h1 = evolve_channel(h0, stats, R, rng);
            cross.noalias() += h1.h * h0.h.adjoint();
        }
        CHECK((cross / N).cwiseAbs().maxCoeff() <= 0.02);
    }

    SUBCASE("per-user coefficients")
    {
        const auto R2 = aggregate_correlation(std::vector<SpatialCorrelation>{R1, R1});
        Rng rng(7, Stream::Test);
        const auto h0 = init_channel(R2, rng);
        const auto h1 = evolve_channel(h0, TemporalStats({1.0, 0.5}), R2, rng);
        CHECK(h1.user(0) == h0.user(0));
        CHECK(h1.user(1) != h0.user(1));
        CHECK(h1.as_matrix().cols() == 2);
        CHECK(h1.as_matrix().col(1) == h1.user(1));
        CHECK_THROWS_AS(evolve_channel(h0, TemporalStats::common(0.5, 3), R2, rng), Error);
    }
}
