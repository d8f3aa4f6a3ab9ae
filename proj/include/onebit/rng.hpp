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
#include <random>

#include "onebit/linalg.hpp"

namespace onebit
{
    // Independent random streams of one experiment. Every (seed, stream, trial)
    // triple seeds its own engine, so any trial replays standalone and the
    // streams never share state.
    enum class Stream : std::uint32_t
    {
        Phase = 1,      // per-user correlation phases, drawn once per experiment
        Channel = 2,    // channel innovations g_i
        PilotNoise = 3, // receiver noise during pilot slots
        Data = 4,       // data symbols / data-phase noise
        Training = 5,   // channel + noise used to build sampled correlations
        Test = 6,
    };

    class Rng
    {
    public:
        Rng(std::uint64_t seed, Stream stream, std::uint64_t trial = 0);

        // CN(0, 1): real and imaginary parts are each N(0, 1/2).
        cdouble complex_normal();
        CVector complex_normal(Eigen::Index n);
        double uniform(double lo, double hi);

        std::mt19937_64 &engine() { return engine_; }

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };
}
