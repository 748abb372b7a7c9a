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

#include "risgat/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "risgat/errors.hpp"

namespace risgat {

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

double wrap_phase(double x) {
    double y = std::fmod(x + kPi, 2.0 * kPi);
    if (y < 0.0) y += 2.0 * kPi;
    y -= kPi;
    // fmod rounding can land exactly on +pi
    return y >= kPi ? -kPi : y;
}

const char* to_string(PhaseModel m) { return m == PhaseModel::uniform ? "uniform" : "los_gaussian"; }

PhaseModel phase_model_from_string(const std::string& s) {
    if (s == "los_gaussian") return PhaseModel::los_gaussian;
    if (s == "uniform") return PhaseModel::uniform;
    throw std::invalid_argument("unknown phase model '" + s + "' (expected los_gaussian|uniform)");
}

ComplexVec sample_rician(std::size_t n, const RicianParams& p, Rng& rng, PhaseModel model) {
    if (n == 0) throw std::invalid_argument("sample_rician: n must be at least 1");
    if (!(p.k_factor >= 0.0) || !(p.omega > 0.0)) throw std::invalid_argument("sample_rician: need K >= 0, omega > 0");
    const double los_amp = std::sqrt(p.k_factor * p.omega / (p.k_factor + 1.0));
    const double sigma = std::sqrt(p.omega / (2.0 * (p.k_factor + 1.0)));
    const Complex los = std::polar(los_amp, p.los_phase);
    ComplexVec out(n);
    for (auto& c : out) {
        const double re = rng.normal();
        const double im = rng.normal();
        c = los + Complex(sigma * re, sigma * im);
        if (model == PhaseModel::uniform) c = std::polar(std::abs(c), rng.uniform(-kPi, kPi));
    }
    return out;
}

ChannelRealization draw_channel(std::size_t n, const ChannelModel& model, Rng& rng) {
    ChannelRealization ch{sample_rician(n, model.h, rng, model.phase_model),
                          sample_rician(n, model.g, rng, model.phase_model)};
    if (model.unit_amplitude) {
        for (auto& c : ch.h) c = std::polar(1.0, std::arg(c));
        for (auto& c : ch.g) c = std::polar(1.0, std::arg(c));
    }
    return ch;
}

PhaseShiftMatrix zero_phases(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 1.0), 0}; }

PhaseShiftMatrix ris_phases_from_estimates(const ComplexVec& h_hat, const ComplexVec& g_hat) {
    if (h_hat.size() != g_hat.size())
        throw DimensionError("ris_phases_from_estimates: " + std::to_string(h_hat.size()) + " vs " +
                             std::to_string(g_hat.size()) + " coefficients");
    PhaseShiftMatrix out = zero_phases(h_hat.size());
    for (std::size_t i = 0; i < h_hat.size(); ++i) {
        double phi = 0.0;
        if (h_hat[i] == 0.0 || g_hat[i] == 0.0) {
            ++out.zero_magnitude_events;
        } else {
            phi = std::arg(h_hat[i]) + std::arg(g_hat[i]);
        }
        out.phi[i] = wrap_phase(phi);
    }
    return out;
}

Complex cascaded_gain(const ComplexVec& h, const ComplexVec& g, const PhaseShiftMatrix& phi) {
    if (h.size() != g.size() || phi.phi.size() != h.size() || phi.amplitude.size() != h.size())
        throw DimensionError("cascaded_gain: h has " + std::to_string(h.size()) + ", g " + std::to_string(g.size()) +
                             ", phi " + std::to_string(phi.phi.size()) + " entries");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) acc += g[i] * std::polar(phi.amplitude[i], -phi.phi[i]) * h[i];
    return acc;
}

Complex cascaded_gain(const ComplexVec& h, const ComplexVec& g) {
    if (h.size() != g.size())
        throw DimensionError("cascaded_gain: h has " + std::to_string(h.size()) + ", g " + std::to_string(g.size()));
    Complex acc = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) acc += g[i] * h[i];
    return acc;
}

double effective_snr(double pt_xi_over_n0, Complex gain) {
    if (!(pt_xi_over_n0 > 0.0) || !std::isfinite(pt_xi_over_n0))
        throw std::invalid_argument("effective_snr: link budget must be positive and finite");
    return pt_xi_over_n0 * std::norm(gain);
}

ComplexVec awgn(std::size_t len, double n0, Rng& rng) {
    if (!(n0 >= 0.0)) throw std::invalid_argument("awgn: n0 must be non-negative");
    const double s = std::sqrt(n0 / 2.0);
    ComplexVec w(len);
    for (auto& c : w) {
        const double re = rng.normal();
        const double im = rng.normal();
        c = Complex(s * re, s * im);
    }
    return w;
}

ComplexVec apply_doppler(const ComplexVec& r, double f_d, double symbol_rate, double phase0) {
    if (!(symbol_rate > 0.0)) throw std::invalid_argument("apply_doppler: symbol rate must be positive");
    ComplexVec out(r.size());
    for (std::size_t m = 0; m < r.size(); ++m) {
        const double cycles = std::fmod(f_d * static_cast<double>(m) / symbol_rate, 1.0);
        out[m] = r[m] * std::polar(1.0, phase0 + 2.0 * kPi * cycles);
    }
    return out;
}

} // namespace risgat
