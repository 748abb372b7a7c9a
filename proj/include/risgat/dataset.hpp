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

#ifndef RISGAT_DATASET_HPP
#define RISGAT_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "risgat/channel.hpp"
#include "risgat/gat.hpp"
#include "risgat/graph.hpp"
#include "risgat/kv.hpp"
#include "risgat/signaling.hpp"

namespace risgat {

/// How the received pilot enters the node features.
///
/// `raw`: X = [Re r; Im r].
/// `snr_normalized`: X = [Re r; Im r] / sqrt(snr_lin), i.e. the pilot
///  observation in units of the known link budget. r = X sqrt(snr_lin) in both
///  cases, so the observation is recoverable from the sample's SNR tag.
enum class FeatureScaling { raw, snr_normalized };

const char* to_string(FeatureScaling s);
FeatureScaling feature_scaling_from_string(const std::string& s);

/// One encoded pilot observation plus its channel truth.
struct GraphSample {
    GraphInput graph;      // X 2 x M_p, A = [[0,1],[1,0]], E 2 x 2 x M_p
    Matrix y;              // 1 x 4N: [Re h, Re g, Im h, Im g]
    double snr_db = 0.0;
    ChannelRealization truth;
};

Matrix encode_label(const ComplexVec& h, const ComplexVec& g);
// Inverse of encode_label for a length-4N vector.
ChannelRealization decode_label(std::span<const double> y, std::size_t n_ris);

/// Two-node graph for one pilot observation.
GraphSample encode_sample(const ComplexVec& r, const PilotSequence& s, const ComplexVec& h, const ComplexVec& g,
                          double snr_db, FeatureScaling scaling = FeatureScaling::snr_normalized);

// r recovered from the node features and SNR tag.
ComplexVec received_signal(const GraphSample& sample, FeatureScaling scaling);

/// Initial phase of the residual Doppler ramp. `centered` puts the zero of
/// the ramp at the pilot midpoint; `random` draws it uniformly per frame.
enum class DopplerPhase { centered, random };

const char* to_string(DopplerPhase p);
DopplerPhase doppler_phase_from_string(const std::string& s);

struct DatasetSpec {
    std::size_t n_ris = 16;
    std::size_t m_p = kDefaultPilotLength;
    ChannelModel channel;
    std::vector<double> snrs_db;
    std::size_t samples_per_snr = 1000;
    std::uint64_t seed = 1;
    std::uint32_t lfsr_seed = 1;
    FeatureScaling scaling = FeatureScaling::snr_normalized;
    // Residual Doppler applied to the pilot before encoding; 0 disables it.
    double doppler_hz = 0.0;
    double symbol_rate = kDefaultSymbolRate;
    DopplerPhase doppler_phase = DopplerPhase::centered;
};

// -30:2:0 dB, 1000 per SNR
DatasetSpec default_train_spec(std::size_t n_ris = 16, std::uint64_t seed = 1);
// -30:2:10 dB, 500 per SNR
DatasetSpec default_test_spec(std::size_t n_ris = 16, std::uint64_t seed = 2);

/// Keys are `prefix` + field name. Missing keys keep the value in `base`.
KeyValues spec_to_kv(const DatasetSpec& spec, const std::string& prefix = "spec.");
DatasetSpec spec_from_kv(const KeyValues& kv, const std::string& prefix = "spec.", const DatasetSpec& base = {});

struct Dataset {
    DatasetSpec spec;
    std::vector<GraphSample> samples;  // SNR-major creation order
};

/// Pure function of `spec`: sample k of SNR index i draws from substream
/// (seed, i, k), so the result does not depend on `workers`.
Dataset generate_dataset(const DatasetSpec& spec, std::size_t workers = 1);

/// Stratified by SNR tag: every stratum contributes round(val_ratio * size)
/// samples to validation. Order within each split follows the input order.
std::pair<std::vector<GraphSample>, std::vector<GraphSample>> split_train_val(const std::vector<GraphSample>& samples,
                                                                             double val_ratio, std::uint64_t seed);

std::vector<gat::TrainingSample> to_training_samples(const std::vector<GraphSample>& samples);

inline constexpr std::uint32_t kDatasetFormatVersion = 1;
inline constexpr const char* kGeneratorVersion = "risgat-dataset 1";

/// Writes `path` (the "RISD" tensor blob) and `path` with extension
/// ".manifest". Returns the manifest contents.
KeyValues write_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& path);
std::filesystem::path manifest_path(const std::filesystem::path& dataset_path);

std::uint32_t crc32_of(std::string_view bytes);
std::string hex32(std::uint32_t v);

} // namespace risgat

#endif
