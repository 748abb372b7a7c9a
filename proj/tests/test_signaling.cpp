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

#include "catch_amalgamated.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "risgat/channel.hpp"
#include "risgat/errors.hpp"
#include "risgat/signaling.hpp"

using namespace risgat;
using Catch::Approx;

namespace {

std::string golden_bits() {
    std::ifstream is(std::string(RISGAT_TEST_DATA) + "/lfsr_x4_x2_1_seed1.txt");
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') return line;
    return {};
}

std::string to_string(const Bits& b) {
    std::string s;
    for (auto v : b) s += static_cast<char>('0' + v);
    return s;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

} // namespace

TEST_CASE("LFSR output matches the golden vector") {
    const std::string golden = golden_bits();
    REQUIRE(golden.size() == 16);
    CHECK(to_string(lfsr_bits({}, 16)) == golden);
    CHECK(to_string(make_pilot().bits) == golden);
}

TEST_CASE("LFSR periods divide 6 for every nonzero seed") {
    for (std::uint32_t seed = 1; seed < 16; ++seed) {
        // state walk of s[n+4] = s[n+2] xor s[n]
        std::vector<int> s;
        for (int i = 0; i < 4; ++i) s.push_back((seed >> i) & 1);
        while (s.size() < 64) s.push_back(s[s.size() - 2] ^ s[s.size() - 4]);
        const Bits got = lfsr_bits({0b10101, seed}, 64);
        for (std::size_t i = 0; i < 64; ++i) CHECK(got[i] == s[i]);
        std::size_t period = 0;
        for (std::size_t p = 1; p <= 15 && period == 0; ++p) {
            bool ok = true;
            for (std::size_t i = 0; i + p < 64; ++i) ok = ok && got[i] == got[i + p];
            if (ok) period = p;
        }
        REQUIRE(period > 0);
        CHECK(6 % period == 0);
    }
}

TEST_CASE("LFSR determinism and seed validation") {
    CHECK(lfsr_bits({0b10101, 9}, 40) == lfsr_bits({0b10101, 9}, 40));
    CHECK_THROWS(lfsr_bits({0b10101, 0}, 16));
    CHECK_THROWS(lfsr_bits({0b10101, 16}, 16));
    CHECK_THROWS(lfsr_bits({}, 0));
}

TEST_CASE("BPSK mapping") {
    const Bits b{0, 1, 0};
    CHECK(bpsk_mod(b) == std::vector<double>{1, -1, 1});
    for (double s : bpsk_mod(lfsr_bits({}, 16))) CHECK(s * s == 1.0);
    const Bits bad{2};
    CHECK_THROWS(bpsk_mod(bad));

    Rng rng(1);
    Bits msg(100);
    for (auto& v : msg) v = static_cast<std::uint8_t>(rng.next_u64() & 1);
    const auto x = bpsk_mod(msg);
    ComplexVec r(x.begin(), x.end());
    CHECK(bpsk_demod_coherent(r, 1.0) == msg);
}

TEST_CASE("coherent demodulation") {
    Rng rng(2);
    Bits msg(64);
    for (auto& v : msg) v = static_cast<std::uint8_t>(rng.next_u64() & 1);
    const Complex gain = std::polar(2.0, 0.7);
    ComplexVec r;
    for (double s : bpsk_mod(msg)) r.push_back(gain * s);
    CHECK(bpsk_demod_coherent(r, gain) == msg);
    const Bits flipped = bpsk_demod_coherent(r, -gain);
    for (std::size_t i = 0; i < msg.size(); ++i) CHECK(flipped[i] == 1 - msg[i]);
    CHECK_THROWS(bpsk_demod_coherent(r, 0.0));
}

TEST_CASE("BPSK over AWGN follows Q(sqrt(2 snr))") {
    for (double db : {0.0, 4.0}) {
        const double snr = db_to_lin(db);
        Rng rng(static_cast<std::uint64_t>(db) + 10);
        const std::size_t n = 400000;
        Bits msg(n);
        for (auto& v : msg) v = static_cast<std::uint8_t>(rng.next_u64() & 1);
        const ComplexVec r = transmit(bpsk_mod(msg), 1.0, snr, rng);
        const Bits d = bpsk_demod_coherent(r, 1.0);
        std::size_t errors = 0;
        for (std::size_t i = 0; i < n; ++i) errors += d[i] != msg[i];
        const double p = q_function(std::sqrt(2.0 * snr));
        const double ber = static_cast<double>(errors) / static_cast<double>(n);
        CHECK(std::abs(ber - p) < 3.0 * std::sqrt(p * (1 - p) / static_cast<double>(n)));
    }
}

TEST_CASE("pilot energy equals its length") {
    for (std::uint32_t seed = 1; seed < 16; ++seed) {
        const PilotSequence p = make_pilot({0b10101, seed});
        double e = 0.0;
        for (double s : p.symbols) e += s * s;
        CHECK(e == 16.0);
        CHECK(p.size() == kDefaultPilotLength);
    }
}

TEST_CASE("synthesized pilots follow the received-signal model") {
    const PilotSequence s = make_pilot();
    const double snr = 250.0;

    // noise-free path: transmit with the noise stream replaced by zeros
    const ComplexVec one{1.0};
    Rng a(3), b(3);
    const ComplexVec r = synthesize_pilot_rx(s, one, one, snr, a);
    const ComplexVec w = awgn(16, 1.0, b);
    for (std::size_t m = 0; m < 16; ++m) CHECK(std::abs(r[m] - w[m] - std::sqrt(snr) * s.symbols[m]) < 1e-12);

    // brute-force g^T I h per symbol
    Rng rng(4);
    const ComplexVec h = sample_rician(8, {}, rng), g = sample_rician(8, {}, rng);
    Complex c = 0.0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) c += g[i] * (i == j ? 1.0 : 0.0) * h[j];
    Rng x(5), y(5);
    const ComplexVec rr = synthesize_pilot_rx(s, h, g, snr, x);
    const ComplexVec ww = awgn(16, 1.0, y);
    for (std::size_t m = 0; m < 16; ++m) CHECK(std::abs(rr[m] - (std::sqrt(snr) * c * s.symbols[m] + ww[m])) < 1e-12);

    Rng p(6), q(6);
    CHECK(synthesize_pilot_rx(s, h, g, snr, p) == synthesize_pilot_rx(s, h, g, snr, q));
}

TEST_CASE("sample mean of an all-ones pilot approaches sqrt(snr) c") {
    PilotSequence ones;
    ones.bits.assign(20000, 0);
    ones.symbols.assign(20000, 1.0);
    const ComplexVec h{Complex(0.6, 0.3)}, g{Complex(-0.2, 0.9)};
    Rng rng(8);
    const ComplexVec r = synthesize_pilot_rx(ones, h, g, 4.0, rng);
    Complex mean = 0.0;
    for (const auto& v : r) mean += v;
    mean /= 20000.0;
    CHECK(std::abs(mean - 2.0 * h[0] * g[0]) < 4.0 / std::sqrt(20000.0));
}

TEST_CASE("TDD frames build and parse") {
    const PilotSequence p = make_pilot();
    Rng rng(1);
    for (std::size_t guard : {0, 1, 3}) {
        TddFrame f{16, 20, 12, guard};
        Bits ul(20), dl(12);
        for (auto& v : ul) v = static_cast<std::uint8_t>(rng.next_u64() & 1);
        for (auto& v : dl) v = static_cast<std::uint8_t>(rng.next_u64() & 1);
        const auto stream = build_frame(f, p, ul, dl);
        CHECK(stream.size() == 16 + 20 + 12 + 3 * guard);
        CHECK(stream.size() == f.length());
        const FrameContents c = parse_frame(f, stream);
        CHECK(c.pilot == p.symbols);
        CHECK(c.uplink == ul);
        CHECK(c.downlink == dl);
        if (guard == 0) {
            std::vector<double> plain = p.symbols;
            for (double s : bpsk_mod(ul)) plain.push_back(s);
            for (double s : bpsk_mod(dl)) plain.push_back(s);
            CHECK(stream == plain);
        } else {
            for (std::size_t k = 0; k < guard; ++k) CHECK(stream[16 + k] == 0.0);
        }
    }
    TddFrame f;
    CHECK_THROWS_AS(build_frame(f, p, Bits(3), Bits(64)), DimensionError);
    CHECK_THROWS_AS(parse_frame(f, std::vector<double>(5)), DimensionError);
}
