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

#ifndef RISGAT_RUN_CONFIG_HPP
#define RISGAT_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "risgat/dataset.hpp"
#include "risgat/eval.hpp"
#include "risgat/gat.hpp"
#include "risgat/kv.hpp"

namespace risgat {

struct ExperimentConfig {
    std::uint64_t seed = 7;
    CsiMode csi = CsiMode::perfect;
    std::uint64_t min_errors = 100;
    std::uint64_t max_bits = 10'000'000;
    std::size_t message_len = 64;
    std::size_t frames_per_block = 64;

    std::vector<double> doppler_hz{0.0, 5e3, 15e3, 25e3};

    std::vector<double> fig7_n_ris{16, 32, 64};
    std::vector<double> fig7_snrs_db;

    std::size_t band_runs = 5;
    std::vector<double> band_snrs_db;

    std::size_t fig9_n_ris = 32;
    std::vector<double> fig9_bits{1, 2, 3};
    std::vector<double> fig9_snrs_db;

    std::size_t fig10_n_ris = 32;
    std::vector<std::string> fig10_sets{"set1", "set2", "set3"};
    std::vector<double> fig10_bits{2, 3};
    std::vector<double> fig10_snrs_db;
    double fig10_los_phase = 1.5707963267948966;

    std::size_t hist_bins = 36;
};

/// Everything a run needs. Keys: dataset.*, train.*, eval.* (see README).
struct RunConfig {
    DatasetSpec train_data = default_train_spec();
    DatasetSpec test_data = default_test_spec();
    gat::TrainConfig train;
    gat::EdgeMode edge_mode = gat::EdgeMode::concat;
    ExperimentConfig eval;
};

RunConfig default_run_config();

/// Applies `kv` on top of the defaults. Unknown keys and malformed values
/// throw std::invalid_argument.
RunConfig run_config_from_kv(const KeyValues& kv);
// Complete, resolved key set; run_config_from_kv(run_config_to_kv(c)) == c.
KeyValues run_config_to_kv(const RunConfig& c);

/// BER settings shared by the figure commands.
BerConfig ber_config(const RunConfig& c, std::size_t n_ris, const ChannelModel& channel, const PhaseSet& set,
                     const std::vector<double>& snrs_db, CsiMode csi);

struct TrainedModel {
    gat::GatModel model;
    gat::TrainingHistory history;
};

/// Stratified 4:1 split seeded by cfg.seed, then fit. `init_seed` drives the
/// weight initialization, shuffling and dropout.
TrainedModel train_on(const Dataset& data, const gat::TrainConfig& cfg, gat::EdgeMode mode, std::uint64_t init_seed,
                      const std::function<void(const gat::EpochRecord&)>& on_epoch = {});

} // namespace risgat

#endif
