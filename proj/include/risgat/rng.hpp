// SPDX-License-Identifier: Apache-2.0
//
// risgat: link-level simulator and GAT channel estimator for RIS-assisted satellite IoT
// Copyright (C) 2026 The risgat authors
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

#ifndef RISGAT_RNG_HPP
#define RISGAT_RNG_HPP

#include <cstdint>
#include <random>

namespace risgat {

/// Seeded random stream. Every stochastic routine takes one of these by
/// reference so that runs replay exactly from (master seed, stream id).
///
/// Independent substreams are derived with `Rng::substream(seed, id)`; the
/// same pair always yields the same sequence, which is what makes Monte Carlo
/// results independent of how trials are distributed over workers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream_id) {
        return Rng(mix(seed) ^ mix(stream_id + 0x632be59bd9b4e019ULL));
    }

    // Uniform on [0, 1).
    double uniform() { return uniform_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_(engine_); }
    bool bernoulli(double p) { return uniform() < p; }
    std::uint64_t next_u64() { return engine_(); }

    std::mt19937_64& engine() { return engine_; }

    // splitmix64 finaliser
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace risgat

#endif
