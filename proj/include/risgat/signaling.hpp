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

#ifndef RISGAT_SIGNALING_HPP
#define RISGAT_SIGNALING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "risgat/channel.hpp"
#include "risgat/rng.hpp"

namespace risgat {

using Bits = std::vector<std::uint8_t>;

/// Fibonacci LFSR. `polynomial` holds the generator coefficients with bit k
/// standing for x^k, so x^4 + x^2 + 1 is 0b10101. The register holds the next
/// `degree` outputs, least significant bit first.
struct LfsrConfig {
    std::uint32_t polynomial = 0b10101;
    std::uint32_t seed = 0b0001;
};

Bits lfsr_bits(const LfsrConfig& cfg, std::size_t n);

// 0 -> +1, 1 -> -1
std::vector<double> bpsk_mod(std::span<const std::uint8_t> bits);

/// bit = 0 when Re(r conj(gain_ref)) >= 0, else 1.
Bits bpsk_demod_coherent(const ComplexVec& r, Complex gain_ref);

inline constexpr std::size_t kDefaultPilotLength = 16;

struct PilotSequence {
    Bits bits;
    std::vector<double> symbols;

    std::size_t size() const { return symbols.size(); }
};

PilotSequence make_pilot(const LfsrConfig& cfg = {}, std::size_t m_p = kDefaultPilotLength);

/// sqrt(snr_lin) * gain * x[m] + w[m], w ~ CN(0, 1).
ComplexVec transmit(std::span<const double> symbols, Complex gain, double snr_lin, Rng& rng);

/// Pilot observation with every RIS element at zero phase:
/// r = sqrt(snr_lin) (g^T h) s + w.
ComplexVec synthesize_pilot_rx(const PilotSequence& s, const ComplexVec& h, const ComplexVec& g, double snr_lin,
                               Rng& rng);

/// Pilot, uplink and downlink subframes, each followed by `guard` zero symbols.
struct TddFrame {
    std::size_t m_p = kDefaultPilotLength;
    std::size_t m_u = 64;
    std::size_t m_d = 64;
    std::size_t guard = 1;

    std::size_t length() const { return m_p + m_u + m_d + 3 * guard; }
};

struct FrameContents {
    std::vector<double> pilot;
    Bits uplink;
    Bits downlink;
};

std::vector<double> build_frame(const TddFrame& frame, const PilotSequence& pilot, std::span<const std::uint8_t> ul_bits,
                                std::span<const std::uint8_t> dl_bits);
FrameContents parse_frame(const TddFrame& frame, std::span<const double> stream);

} // namespace risgat

#endif
