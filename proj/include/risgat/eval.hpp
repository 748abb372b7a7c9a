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

#ifndef RISGAT_EVAL_HPP
#define RISGAT_EVAL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "risgat/channel.hpp"
#include "risgat/dataset.hpp"
#include "risgat/gat.hpp"
#include "risgat/signaling.hpp"

namespace risgat {

struct EstimatorOutput {
    ComplexVec h_hat;
    ComplexVec g_hat;
    Complex c_hat;  // sum_i h_hat_i g_hat_i
};

EstimatorOutput gat_estimate(const gat::GatModel& model, const GraphInput& graph);
EstimatorOutput gat_estimate(const gat::GatModel& model, const GraphSample& sample);

/// Least-squares fit of r = sqrt(snr_lin) c s + w for the scalar c.
Complex ls_estimate_cascaded(const ComplexVec& r, const PilotSequence& s, double snr_lin);

struct NmseResult {
    double value = 0.0;
    std::size_t used = 0;
    // Samples with zero-norm truth, left out of the mean.
    std::size_t excluded = 0;
};

// Mean over samples of |est - truth|^2 / |truth|^2.
NmseResult nmse(const std::vector<std::vector<double>>& estimates, const std::vector<std::vector<double>>& truths);
NmseResult nmse(const std::vector<Complex>& estimates, const std::vector<Complex>& truths);

// ---- phase sets -----------------------------------------------------------

enum class PhaseSetId { set1, set2, set3, continuous };

const char* to_string(PhaseSetId id);
PhaseSetId phase_set_from_string(const std::string& s);

/// Permitted RIS phases, ascending.
///
/// set1: -pi + k 2pi/2^b, k < 2^b, covering [-pi, pi).
/// set2: the left half circle (-pi, -pi/2] u [pi/2, pi) in steps of pi/2^b.
/// set3: the right half circle [-pi/2, pi/2] in steps of pi/2^b, both ends kept.
/// continuous: no values, quantization is the identity.
struct PhaseSet {
    PhaseSetId id = PhaseSetId::continuous;
    unsigned n_bit = 0;
    std::vector<double> values;

    std::string tag() const;
};

PhaseSet make_phase_set(PhaseSetId id, unsigned n_bit);

/// Nearest member by circular distance; ties go to the lower index.
double quantize_phase(double phi, const PhaseSet& set);

/// Mean of cos(quantize(phi) - phi) for phi uniform on [-pi, pi).
double quantization_efficiency(const PhaseSet& set, std::size_t draws, std::uint64_t seed);

// ---- NMSE experiment ------------------------------------------------------

struct NmseRow {
    double snr_db = 0.0;
    std::size_t count = 0;
    double nmse_y_gat = 0.0;
    double nmse_c_gat = 0.0;
    double nmse_c_ls = 0.0;
};

struct NmseReport {
    std::vector<NmseRow> rows;  // ascending SNR
    NmseRow overall;            // whole set, snr_db unused
};

NmseReport run_nmse_experiment(const gat::GatModel& model, const std::vector<GraphSample>& test_set,
                               FeatureScaling scaling, std::size_t workers = 1);

// ---- BER experiment -------------------------------------------------------

enum class CsiMode { perfect, gat };

struct BerConfig {
    std::size_t n_ris = 16;
    ChannelModel channel;
    CsiMode csi = CsiMode::perfect;
    PhaseSet phase_set;
    std::vector<double> snrs_db;
    std::size_t message_len = 64;
    std::uint64_t min_errors = 100;
    std::uint64_t max_bits = 10'000'000;
    std::size_t frames_per_block = 64;
    std::uint64_t seed = 1;
    std::uint32_t lfsr_seed = 1;
    std::size_t m_p = kDefaultPilotLength;
    FeatureScaling scaling = FeatureScaling::snr_normalized;
};

struct BerPoint {
    double snr_db = 0.0;
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t frames = 0;
    double ber = 0.0;
    double sigma = 0.0;  // binomial standard error
};

struct BerReport {
    std::string tag;
    std::vector<BerPoint> points;
};

std::string estimator_tag(const BerConfig& cfg);

/// Frame f at SNR index i draws everything from substream (seed, i, f): the
/// channel, pilot noise, message bits and message noise. Frames are processed
/// in fixed-size blocks and the stopping rule is checked between blocks, so the
/// result does not depend on `workers`, and runs that differ only in the phase
/// set see identical channels and noise.
BerReport run_ber_experiment(const BerConfig& cfg, const gat::GatModel* model = nullptr, std::size_t workers = 1);

struct BandPoint {
    double snr_db = 0.0;
    double min = 0.0;
    double mean = 0.0;
    double max = 0.0;
};

struct BandReport {
    std::vector<BerReport> runs;
    std::vector<BandPoint> band;
};

/// Trains `r` models via train_fn(index) and evaluates each with GAT CSI.
BandReport confidence_band(const std::function<gat::GatModel(std::size_t)>& train_fn, std::size_t r,
                           const BerConfig& cfg, std::size_t workers = 1);

// ---- Doppler and histograms ------------------------------------------------

struct DopplerRow {
    double f_d = 0.0;
    NmseReport report;
    double degradation = 1.0;  // overall cascaded NMSE relative to f_d = 0
};

/// Regenerates `test_spec` with each residual Doppler value (same seeds) and
/// evaluates the model. The first entry of `f_d_list` must be 0.
std::vector<DopplerRow> doppler_sweep(const gat::GatModel& model, const DatasetSpec& test_spec,
                                      const std::vector<double>& f_d_list, std::size_t workers = 1);

struct Histogram {
    std::vector<double> edges;  // bins + 1 entries from -pi to pi
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const;
};

Histogram phase_histogram(const std::vector<double>& phases, std::size_t bins);
// angle(h_i g_i) for every element of every realization
std::vector<double> cascaded_phases(const std::vector<ChannelRealization>& channels);
double total_variation(const Histogram& a, const Histogram& b);

// ---- CSV ------------------------------------------------------------------

struct Provenance {
    std::string manifest_hash;
    std::string estimator;
    std::uint64_t seed = 0;
};

std::string csv_header(const Provenance& p, const std::vector<std::string>& extra = {});
std::string nmse_csv(const NmseReport& r, const Provenance& p);
std::string doppler_csv(const std::vector<DopplerRow>& rows, const Provenance& p);
std::string ber_csv(const std::vector<BerReport>& reports, const Provenance& p, const std::vector<std::string>& extra = {});
std::string band_csv(const BandReport& r, const Provenance& p);
std::string histogram_csv(const Histogram& truth, const Histogram& estimate, const Provenance& p);

} // namespace risgat

#endif
