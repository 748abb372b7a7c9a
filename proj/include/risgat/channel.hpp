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

#ifndef RISGAT_CHANNEL_HPP
#define RISGAT_CHANNEL_HPP

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "risgat/rng.hpp"

namespace risgat {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

inline constexpr double kPi = std::numbers::pi;

double db_to_lin(double db);
double lin_to_db(double lin);

// Wraps into [-pi, pi).
double wrap_phase(double x);

/// Rician link parameters. `omega` is E[|coefficient|^2].
struct RicianParams {
    double k_factor = 10.0;
    double omega = 1.0;
    double los_phase = 0.0;
};

/// `los_gaussian`: LOS phasor plus circular Gaussian scatter, so the phase
/// follows from the draw. `uniform`: Rician amplitude with an independent
/// uniform phase.
enum class PhaseModel { los_gaussian, uniform };

const char* to_string(PhaseModel m);
PhaseModel phase_model_from_string(const std::string& s);

ComplexVec sample_rician(std::size_t n, const RicianParams& p, Rng& rng, PhaseModel model = PhaseModel::los_gaussian);

/// Both links of the RIS: h (device to RIS) and g (RIS to satellite).
struct ChannelModel {
    RicianParams h;
    RicianParams g;
    PhaseModel phase_model = PhaseModel::los_gaussian;
    // Forces |h_i| = |g_i| = 1 while keeping the drawn phases.
    bool unit_amplitude = false;
};

struct ChannelRealization {
    ComplexVec h;
    ComplexVec g;
};

ChannelRealization draw_channel(std::size_t n, const ChannelModel& model, Rng& rng);

/// Per-element RIS configuration. Amplitudes are 1 (lossless surface).
struct PhaseShiftMatrix {
    std::vector<double> phi;
    std::vector<double> amplitude;
    // Elements whose estimate had zero magnitude; their phase contribution is 0.
    std::size_t zero_magnitude_events = 0;
};

PhaseShiftMatrix ris_phases_from_estimates(const ComplexVec& h_hat, const ComplexVec& g_hat);
PhaseShiftMatrix zero_phases(std::size_t n);

/// g^T diag(A e^{-j phi}) h, i.e. sum beta_i rho_i e^{-j psi_i} with
/// psi_i = phi_i - theta_i - nu_i. Real and maximal when psi_i = 0.
Complex cascaded_gain(const ComplexVec& h, const ComplexVec& g, const PhaseShiftMatrix& phi);
// Unitary phase shift matrix (all phases zero).
Complex cascaded_gain(const ComplexVec& h, const ComplexVec& g);

/// Lumped P_t xi / N_0 times |gain|^2.
double effective_snr(double pt_xi_over_n0, Complex gain);

/// i.i.d. CN(0, n0) samples.
ComplexVec awgn(std::size_t len, double n0, Rng& rng);

inline constexpr double kDefaultSymbolRate = 1e6;

/// r[m] * exp(j (phase0 + 2 pi f_d m / symbol_rate)).
ComplexVec apply_doppler(const ComplexVec& r, double f_d, double symbol_rate, double phase0);

} // namespace risgat

#endif
