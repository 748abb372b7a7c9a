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

#include "risgat/channel.hpp"
#include "risgat/errors.hpp"

using namespace risgat;

namespace {

// Rician mean amplitude, sigma sqrt(pi/2) L_{1/2}(-nu^2 / 2 sigma^2).
double rician_mean(double k, double omega) {
    const double s2 = omega / (2.0 * (k + 1.0));
    const double nu2 = k * omega / (k + 1.0);
    const double x = -nu2 / (2.0 * s2);
    const double lag = std::exp(x / 2.0) *
                       ((1.0 - x) * std::cyl_bessel_i(0.0, -x / 2.0) - x * std::cyl_bessel_i(1.0, -x / 2.0));
    return std::sqrt(s2) * std::sqrt(kPi / 2.0) * lag;
}

// Trapezoid integral of x f(x) over the Rician density.
double integrated_rician_mean(double k, double omega) {
    const double s2 = omega / (2.0 * (k + 1.0));
    const double nu = std::sqrt(k * omega / (k + 1.0));
    const double hi = nu + 40.0 * std::sqrt(s2);
    const int steps = 400000;
    const double dx = hi / steps;
    double acc = 0.0;
    for (int i = 1; i < steps; ++i) {
        const double x = i * dx;
        // exp(-(x-nu)^2/2s2) * I0e(x nu / s2) keeps the terms bounded
        const double z = x * nu / s2;
        const double i0e = std::cyl_bessel_i(0.0, z) * std::exp(-z);
        acc += x * (x / s2) * std::exp(-(x - nu) * (x - nu) / (2.0 * s2)) * i0e;
    }
    return acc * dx;
}

struct Moments {
    double power = 0.0;
    double amplitude = 0.0;
};

Moments moments(const ComplexVec& v) {
    Moments m;
    for (const auto& c : v) {
        m.power += std::norm(c);
        m.amplitude += std::abs(c);
    }
    m.power /= static_cast<double>(v.size());
    m.amplitude /= static_cast<double>(v.size());
    return m;
}

ComplexVec unit_phasors(const std::vector<double>& angles) {
    ComplexVec v;
    for (double a : angles) v.push_back(std::polar(1.0, a));
    return v;
}

} // namespace

TEST_CASE("dB conversions") {
    CHECK(db_to_lin(0.0) == 1.0);
    CHECK(db_to_lin(10.0) == Catch::Approx(10.0));
    CHECK(db_to_lin(-30.0) == Catch::Approx(1e-3));
    CHECK(lin_to_db(db_to_lin(-17.5)) == Catch::Approx(-17.5));
}

TEST_CASE("wrap_phase lands in [-pi, pi)") {
    CHECK(wrap_phase(kPi) == Catch::Approx(-kPi));
    CHECK(wrap_phase(-kPi) == Catch::Approx(-kPi));
    CHECK(wrap_phase(kPi / 2 + 3 * kPi / 4) == Catch::Approx(-3 * kPi / 4));
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform(-50.0, 50.0);
        const double w = wrap_phase(x);
        CHECK(w >= -kPi);
        CHECK(w < kPi);
        CHECK(std::abs(std::remainder(x - w, 2 * kPi)) < 1e-9);
    }
}

TEST_CASE("Rician mean power and mean amplitude at K = 10") {
    Rng rng(11);
    const ComplexVec v = sample_rician(1000000, {10.0, 1.0, 0.0}, rng);
    const Moments m = moments(v);
    CHECK(std::abs(m.power - 1.0) < 0.005);
    const double oracle = rician_mean(10.0, 1.0);
    CHECK(oracle == Catch::Approx(integrated_rician_mean(10.0, 1.0)).epsilon(1e-9));
    CHECK(std::abs(m.amplitude - oracle) < 0.003);
}

TEST_CASE("Rician mean power follows omega across K") {
    for (double k : {0.0, 10.0, 100.0}) {
        for (double omega : {0.5, 2.0}) {
            Rng rng(static_cast<std::uint64_t>(k * 10 + omega));
            const Moments m = moments(sample_rician(200000, {k, omega, 0.3}, rng));
            CHECK(std::abs(m.power / omega - 1.0) < 0.02);
            CHECK(std::abs(m.amplitude - rician_mean(k, omega)) < 0.01 * std::sqrt(omega));
        }
    }
}

TEST_CASE("Rician limits") {
    Rng rng(3);
    for (const auto& c : sample_rician(1000, {1e12, 2.0, 0.8}, rng)) {
        CHECK(std::abs(c) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-5));
        CHECK(std::arg(c) == Catch::Approx(0.8).margin(1e-5));
    }
    // K = 0: circular Gaussian, mean near 0 and power near omega
    const ComplexVec v = sample_rician(200000, {0.0, 1.0, 1.0}, rng);
    Complex mean = 0.0;
    for (const auto& c : v) mean += c;
    mean /= static_cast<double>(v.size());
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(moments(v).power - 1.0) < 0.02);
    CHECK_THROWS(sample_rician(0, {}, rng));
    CHECK_THROWS(sample_rician(4, {-1.0, 1.0, 0.0}, rng));
}

TEST_CASE("uniform phase model keeps the Rician amplitude") {
    Rng rng(5);
    const ComplexVec v = sample_rician(200000, {10.0, 1.0, 0.0}, rng, PhaseModel::uniform);
    CHECK(std::abs(moments(v).amplitude - rician_mean(10.0, 1.0)) < 0.005);
    Complex mean = 0.0;
    for (const auto& c : v) mean += c;
    CHECK(std::abs(mean / 200000.0) < 0.01);
    CHECK(phase_model_from_string(to_string(PhaseModel::uniform)) == PhaseModel::uniform);
    CHECK_THROWS(phase_model_from_string("laplace"));
}

TEST_CASE("draw_channel unit amplitudes") {
    ChannelModel m;
    m.unit_amplitude = true;
    Rng rng(9);
    const auto ch = draw_channel(32, m, rng);
    REQUIRE(ch.h.size() == 32);
    REQUIRE(ch.g.size() == 32);
    for (std::size_t i = 0; i < 32; ++i) {
        CHECK(std::abs(ch.h[i]) == Catch::Approx(1.0));
        CHECK(std::abs(ch.g[i]) == Catch::Approx(1.0));
    }
}

TEST_CASE("RIS phases from estimates") {
    auto p = ris_phases_from_estimates({std::polar(1.0, kPi / 3)}, {std::polar(1.0, kPi / 6)});
    CHECK(p.phi[0] == Catch::Approx(kPi / 2));
    p = ris_phases_from_estimates({2.0, 0.5}, {1.0, 3.0});
    CHECK(p.phi == std::vector<double>{0.0, 0.0});
    CHECK(p.amplitude == std::vector<double>{1.0, 1.0});
    p = ris_phases_from_estimates({std::polar(1.0, kPi / 2)}, {std::polar(1.0, 3 * kPi / 4)});
    CHECK(p.phi[0] == Catch::Approx(-3 * kPi / 4));
    p = ris_phases_from_estimates({0.0, 1.0}, {Complex(0, 1), 0.0});
    CHECK(p.zero_magnitude_events == 2);
    CHECK(p.phi == std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(ris_phases_from_estimates({1.0}, {1.0, 1.0}), DimensionError);
}

TEST_CASE("cascaded gain examples") {
    const ComplexVec h1 = unit_phasors({0.4}), g1 = unit_phasors({-1.1});
    const Complex c1 = cascaded_gain(h1, g1, ris_phases_from_estimates(h1, g1));
    CHECK(c1.real() == Catch::Approx(1.0));
    CHECK(std::abs(c1.imag()) < 1e-12);

    Rng rng(2);
    std::vector<double> th, nu;
    for (int i = 0; i < 16; ++i) {
        th.push_back(rng.uniform(-kPi, kPi));
        nu.push_back(rng.uniform(-kPi, kPi));
    }
    const ComplexVec h = unit_phasors(th), g = unit_phasors(nu);
    const Complex c16 = cascaded_gain(h, g, ris_phases_from_estimates(h, g));
    CHECK(c16.real() == Catch::Approx(16.0));
    CHECK(std::abs(c16.imag()) < 1e-12);
    CHECK(effective_snr(1.0, c16) == Catch::Approx(256.0));

    // brute-force g^T I h
    const ComplexVec hr = sample_rician(8, {}, rng), gr = sample_rician(8, {}, rng);
    Complex ref = 0.0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            if (i == j) ref += gr[i] * hr[j];
    CHECK(std::abs(cascaded_gain(hr, gr) - ref) < 1e-12);
    CHECK(std::abs(cascaded_gain(hr, gr, zero_phases(8)) - ref) < 1e-12);
    CHECK_THROWS_AS(cascaded_gain(hr, ComplexVec(3)), DimensionError);
    CHECK_THROWS_AS(cascaded_gain(hr, gr, zero_phases(4)), DimensionError);
}

TEST_CASE("effective SNR") {
    CHECK(effective_snr(1.0, 0.0) == 0.0);
    CHECK(lin_to_db(effective_snr(1.0, 16.0)) == Catch::Approx(24.08).margin(0.01));
    // doubling N with unit amplitudes and perfect phases: +6 dB
    for (std::size_t n : {8, 16, 32}) {
        const ComplexVec a(n, 1.0), b(2 * n, 1.0);
        const double d = lin_to_db(effective_snr(3.0, cascaded_gain(b, b))) -
                         lin_to_db(effective_snr(3.0, cascaded_gain(a, a)));
        CHECK(d == Catch::Approx(20 * std::log10(2.0)));
    }
    CHECK_THROWS(effective_snr(0.0, 1.0));
}

TEST_CASE("cascaded gain properties") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.next_u64() % 12;
        const ComplexVec h = sample_rician(n, {}, rng), g = sample_rician(n, {}, rng);
        double bound = 0.0;
        for (std::size_t i = 0; i < n; ++i) bound += std::abs(h[i]) * std::abs(g[i]);

        PhaseShiftMatrix rnd = zero_phases(n);
        for (auto& p : rnd.phi) p = rng.uniform(-kPi, kPi);
        const Complex c = cascaded_gain(h, g, rnd);
        CHECK(std::abs(c) <= bound * (1 + 1e-12));

        // common offset on every psi leaves |gain| and effective SNR unchanged
        PhaseShiftMatrix shifted = rnd;
        const double off = rng.uniform(-kPi, kPi);
        for (auto& p : shifted.phi) p = wrap_phase(p + off);
        CHECK(effective_snr(2.0, cascaded_gain(h, g, shifted)) ==
              Catch::Approx(effective_snr(2.0, c)).epsilon(1e-10));

        // perfect phases reach the bound and beat perturbations
        const PhaseShiftMatrix perfect = ris_phases_from_estimates(h, g);
        const Complex cp = cascaded_gain(h, g, perfect);
        CHECK(std::abs(cp) == Catch::Approx(bound).epsilon(1e-12));
        CHECK(std::abs(cp.imag()) < 1e-10);
        for (int k = 0; k < 5; ++k) {
            PhaseShiftMatrix pert = perfect;
            for (auto& p : pert.phi) p = wrap_phase(p + rng.uniform(-0.5, 0.5));
            CHECK(std::abs(cascaded_gain(h, g, pert)) <= std::abs(cp) * (1 + 1e-12));
        }
    }
}

TEST_CASE("AWGN moments") {
    Rng rng(4);
    for (const auto& w : awgn(16, 0.0, rng)) CHECK(w == Complex(0.0));
    const std::size_t n = 1000000;
    const ComplexVec w = awgn(n, 2.0, rng);
    double var = 0.0, cross = 0.0;
    Complex mean = 0.0;
    for (const auto& v : w) {
        var += std::norm(v);
        cross += v.real() * v.imag();
        mean += v;
    }
    var /= static_cast<double>(n);
    cross /= static_cast<double>(n);
    mean /= static_cast<double>(n);
    CHECK(std::abs(var - 2.0) < 0.01);
    CHECK(std::abs(cross) < 0.005);
    const double sigma = 1.0;
    CHECK(std::abs(mean.real()) < 3 * sigma / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(mean.imag()) < 3 * sigma / std::sqrt(static_cast<double>(n)));
    CHECK_THROWS(awgn(4, -1.0, rng));
}

TEST_CASE("Doppler rotation") {
    Rng rng(6);
    const ComplexVec r = awgn(17, 1.0, rng);
    CHECK(apply_doppler(r, 0.0, kDefaultSymbolRate, 0.0) == r);

    const ComplexVec full = apply_doppler(r, kDefaultSymbolRate, kDefaultSymbolRate, 0.0);
    for (std::size_t m = 0; m < r.size(); ++m) CHECK(std::abs(full[m] - r[m]) < 1e-12);

    const double phase0 = 0.3;
    const ComplexVec d = apply_doppler(r, 25e3, 1e6, phase0);
    const double rot = std::arg(d[16] / r[16]);
    CHECK(wrap_phase(rot - phase0) == Catch::Approx(wrap_phase(2 * kPi * 0.4)).margin(1e-12));
    for (std::size_t m = 0; m < r.size(); ++m) CHECK(std::abs(d[m]) == Catch::Approx(std::abs(r[m])));
    CHECK_THROWS(apply_doppler(r, 1.0, 0.0, 0.0));
}
