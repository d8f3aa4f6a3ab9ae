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

#include "onebit/rng.hpp"

#include <cmath>

namespace onebit
{
    namespace
    {
        std::seed_seq make_seed_seq(std::uint64_t seed, Stream stream, std::uint64_t trial)
        {
            auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
            auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
            return std::seed_seq{lo(seed), hi(seed), static_cast<std::uint32_t>(stream), lo(trial), hi(trial)};
        }
    }

    Rng::Rng(std::uint64_t seed, Stream stream, std::uint64_t trial)
    {
        auto seq = make_seed_seq(seed, stream, trial);
        engine_.seed(seq);
    }

    cdouble Rng::complex_normal()
    {
        static const double scale = std::sqrt(0.5);
        double re = normal_(engine_);
        double im = normal_(engine_);
        return {scale * re, scale * im};
    }

    CVector Rng::complex_normal(Eigen::Index n)
    {
        CVector v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v[i] = complex_normal();
        return v;
    }

    double Rng::uniform(double lo, double hi)
    {
        std::uniform_real_distribution<double> dist(lo, hi);
        return dist(engine_);
    }
}
