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

#include "onebit/theory.hpp"

#include <cmath>
#include <sstream>

#include "onebit/error.hpp"
#include "onebit/linalg.hpp"

namespace onebit::theory
{
    double Params::beta() const
    {
        const double krho = static_cast<double>(K) * rho;
        return two_over_pi * krho / (krho + 1.0);
    }

    void Params::validate() const
    {
        require(K >= 1, ErrorCode::InvalidArgument, "K must be positive");
        require(rho >= 0.0, ErrorCode::InvalidArgument, "rho must be non-negative");
        const double b = beta();
        require(b > 0.0 && b < two_over_pi, ErrorCode::InvalidArgument, "beta must satisfy 0 < beta < 2/pi");
        require(eta >= 0.0 && eta <= 1.0, ErrorCode::InvalidArgument, "eta must lie in [0, 1]");
        require(alpha > 0.0 && alpha < 2.0, ErrorCode::InvalidArgument, "alpha must satisfy 0 < alpha < 2");
    }

    double blmmse_nmse(int K, double rho)
    {
        require(K >= 1, ErrorCode::InvalidArgument, "K must be positive");
        require(rho >= 0.0, ErrorCode::InvalidArgument, "rho must be non-negative");
        if (std::isinf(rho))
            return 1.0 - two_over_pi;
        return 1.0 - Params{K, rho, 0.0, 1.0}.beta();
    }

    namespace
    {
        double filtered(double a, double b, double m)
        {
            return (1.0 - (2.0 * a - a * a * (1.0 - b) - a * a * b * m) * b * m) * m;
        }
    }

    Recursion nmse_recursion(const Params &p, std::size_t slots)
    {
        p.validate();
        require(slots >= 1, ErrorCode::InvalidArgument, "at least one slot is required");
        const double b = p.beta();
        const double e2 = p.eta * p.eta;
        Recursion out;
        out.m_pred.reserve(slots);
        out.m_filt.reserve(slots);
        double m = 1.0;
        for (std::size_t i = 0; i < slots; ++i)
        {
            out.m_pred.push_back(m);
            const double mf = filtered(p.alpha, b, m);
            out.m_filt.push_back(mf);
            m = e2 * mf + (1.0 - e2);
        }
        return out;
    }

    double prediction_map(const Params &p, double x)
    {
        p.validate();
        const double e2 = p.eta * p.eta;
        return e2 * filtered(p.alpha, p.beta(), x) + (1.0 - e2);
    }

    double fixed_point_gamma(const Params &p)
    {
        p.validate();
        if (p.eta == 0.0)
            return 1.0;
        if (p.eta == 1.0)
            return 0.0;

        auto g = [&](double x) { return prediction_map(p, x) - x; };
        double lo = 0.0;
        double hi = 1.0;
        double g_lo = g(lo);
        double g_hi = g(hi);
        if (!(g_lo > 0.0 && g_hi < 0.0))
        {
            std::ostringstream msg;
            msg << "no sign change of f(x) - x on (0, 1): g(0)=" << g_lo << ", g(1)=" << g_hi;
            fail(ErrorCode::Numerical, msg.str());
        }
        // Runs past 1e-12 until the bracket stops shrinking in double precision.
        for (;;)
        {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            if (g(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    double alpha_upper_bound(double beta, double m_pred)
    {
        require(beta >= 0.0 && beta < two_over_pi, ErrorCode::InvalidArgument, "beta must satisfy 0 <= beta < 2/pi");
        require(m_pred > 0.0 && m_pred <= 1.0, ErrorCode::InvalidArgument, "m_pred must lie in (0, 1]");
        const double bound = 2.0 / (1.0 - beta * (1.0 - m_pred));
        require(bound >= 2.0, ErrorCode::Numerical, "alpha bound fell below 2");
        return bound;
    }

    std::string_view complexity_order(Estimator e)
    {
        switch (e)
        {
        case Estimator::Blmmse:
            return "O(M^3 tau^3)";
        case Estimator::Kfb:
            return "O(M^3 tau^3)";
        case Estimator::Tpe:
            return "O(L M^2 tau^2)";
        }
        return "";
    }

    double inversion_cost(Estimator e, int M, int tau, int L)
    {
        const double n = static_cast<double>(M) * static_cast<double>(tau);
        return e == Estimator::Tpe ? static_cast<double>(L) * n * n : n * n * n;
    }
}
