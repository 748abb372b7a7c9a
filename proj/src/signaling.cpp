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

#include "risgat/signaling.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "risgat/errors.hpp"

namespace risgat {

Bits lfsr_bits(const LfsrConfig& cfg, std::size_t n) {
    if (n == 0) throw std::invalid_argument("lfsr_bits: n must be at least 1");
    if (cfg.polynomial < 2 || (cfg.polynomial & 1u) == 0)
        throw std::invalid_argument("lfsr_bits: polynomial needs degree >= 1 and a constant term");
    const int degree = std::bit_width(cfg.polynomial) - 1;
    const std::uint32_t state_mask = (1u << degree) - 1u;
    const std::uint32_t taps = cfg.polynomial & state_mask;
    if ((cfg.seed & state_mask) == 0 || (cfg.seed & ~state_mask) != 0)
        throw std::invalid_argument("lfsr_bits: seed must be a nonzero " + std::to_string(degree) + "-bit state");

    std::uint32_t state = cfg.seed;
    Bits out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::uint8_t>(state & 1u);
        const std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(state & taps) & 1);
        state = (state >> 1) | (fb << (degree - 1));
    }
    return out;
}

std::vector<double> bpsk_mod(std::span<const std::uint8_t> bits) {
    std::vector<double> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1) throw std::invalid_argument("bpsk_mod: bits must be 0 or 1");
        out[i] = bits[i] == 0 ? 1.0 : -1.0;
    }
    return out;
}

Bits bpsk_demod_coherent(const ComplexVec& r, Complex gain_ref) {
    if (gain_ref == 0.0) throw std::invalid_argument("bpsk_demod_coherent: zero gain reference");
    Bits out(r.size());
    const Complex ref = std::conj(gain_ref);
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = (r[i] * ref).real() >= 0.0 ? 0 : 1;
    return out;
}

PilotSequence make_pilot(const LfsrConfig& cfg, std::size_t m_p) {
    PilotSequence p;
    p.bits = lfsr_bits(cfg, m_p);
    p.symbols = bpsk_mod(p.bits);
    return p;
}

ComplexVec transmit(std::span<const double> symbols, Complex gain, double snr_lin, Rng& rng) {
    if (!(snr_lin >= 0.0)) throw std::invalid_argument("transmit: SNR must be non-negative");
    ComplexVec r = awgn(symbols.size(), 1.0, rng);
    const Complex a = std::sqrt(snr_lin) * gain;
    for (std::size_t m = 0; m < symbols.size(); ++m) r[m] += a * symbols[m];
    return r;
}

ComplexVec synthesize_pilot_rx(const PilotSequence& s, const ComplexVec& h, const ComplexVec& g, double snr_lin,
                               Rng& rng) {
    if (!(snr_lin > 0.0)) throw std::invalid_argument("synthesize_pilot_rx: SNR must be positive");
    return transmit(s.symbols, cascaded_gain(h, g), snr_lin, rng);
}

std::vector<double> build_frame(const TddFrame& frame, const PilotSequence& pilot, std::span<const std::uint8_t> ul_bits,
                                std::span<const std::uint8_t> dl_bits) {
    if (pilot.size() != frame.m_p || ul_bits.size() != frame.m_u || dl_bits.size() != frame.m_d)
        throw DimensionError("build_frame: segment lengths " + std::to_string(pilot.size()) + "/" +
                             std::to_string(ul_bits.size()) + "/" + std::to_string(dl_bits.size()) +
                             " do not match frame " + std::to_string(frame.m_p) + "/" + std::to_string(frame.m_u) +
                             "/" + std::to_string(frame.m_d));
    std::vector<double> out;
    out.reserve(frame.length());
    auto append = [&](std::span<const double> seg) {
        out.insert(out.end(), seg.begin(), seg.end());
        out.insert(out.end(), frame.guard, 0.0);
    };
    append(pilot.symbols);
    append(bpsk_mod(ul_bits));
    append(bpsk_mod(dl_bits));
    return out;
}

FrameContents parse_frame(const TddFrame& frame, std::span<const double> stream) {
    if (stream.size() != frame.length())
        throw DimensionError("parse_frame: stream has " + std::to_string(stream.size()) + " symbols, frame expects " +
                             std::to_string(frame.length()));
    auto demap = [](std::span<const double> seg) {
        Bits b(seg.size());
        for (std::size_t i = 0; i < seg.size(); ++i) b[i] = seg[i] >= 0.0 ? 0 : 1;
        return b;
    };
    FrameContents c;
    std::size_t pos = 0;
    c.pilot.assign(stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(frame.m_p));
    pos += frame.m_p + frame.guard;
    c.uplink = demap(stream.subspan(pos, frame.m_u));
    pos += frame.m_u + frame.guard;
    c.downlink = demap(stream.subspan(pos, frame.m_d));
    return c;
}

} // namespace risgat
