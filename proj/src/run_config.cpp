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

#include "risgat/run_config.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace risgat {

namespace {

std::vector<double> range(double start, double step, double stop) {
    std::vector<double> v;
    for (double x = start; x <= stop + 1e-9; x += step) v.push_back(x);
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

const char* csi_name(CsiMode m) { return m == CsiMode::gat ? "gat" : "perfect"; }

CsiMode csi_from(const std::string& s) {
    if (s == "perfect") return CsiMode::perfect;
    if (s == "gat") return CsiMode::gat;
    throw std::invalid_argument("eval.csi must be perfect or gat, got '" + s + "'");
}

std::size_t to_count(long long v, const std::string& key) {
    if (v < 0) throw std::invalid_argument(key + " must be non-negative");
    return static_cast<std::size_t>(v);
}

const std::set<std::string>& dataset_fields() {
    static const std::set<std::string> f{"n_ris",       "m_p",         "k_factor",       "k_factor_h",
                                         "k_factor_g",  "omega_h",     "omega_g",        "los_phase",
                                         "los_phase_h", "los_phase_g", "phase_model",    "unit_amplitude",
                                         "lfsr_seed",   "feature_scaling", "symbol_rate", "doppler_phase"};
    return f;
}

} // namespace

RunConfig default_run_config() {
    RunConfig c;
    c.eval.fig7_snrs_db = range(-40, 1, -10);
    c.eval.band_snrs_db = range(-30, 2, -10);
    c.eval.fig9_snrs_db = range(-36, 2, -20);
    c.eval.fig10_snrs_db = range(-36, 2, -20);
    return c;
}

RunConfig run_config_from_kv(const KeyValues& kv) {
    RunConfig c = default_run_config();
    if (kv.count("run.seed")) {
        const auto seed = static_cast<std::uint64_t>(kv_int(kv, "run.seed"));
        c.train_data.seed = seed;
        c.test_data.seed = seed + 1;
        c.train.seed = seed;
        c.eval.seed = seed;
    }

    KeyValues shared, train_only, test_only;
    for (const auto& [key, value] : kv) {
        if (key.rfind("dataset.", 0) != 0) continue;
        const std::string f = key.substr(8);
        if (dataset_fields().count(f)) {
            shared[f] = value;
        } else if (f == "train_snrs_db") {
            train_only["snrs_db"] = value;
        } else if (f == "test_snrs_db") {
            test_only["snrs_db"] = value;
        } else if (f == "train_samples_per_snr") {
            train_only["samples_per_snr"] = value;
        } else if (f == "test_samples_per_snr") {
            test_only["samples_per_snr"] = value;
        } else if (f == "train_seed") {
            train_only["seed"] = value;
        } else if (f == "test_seed") {
            test_only["seed"] = value;
        } else {
            throw std::invalid_argument("unknown config key " + key);
        }
    }
    KeyValues tr = shared, te = shared;
    tr.insert(train_only.begin(), train_only.end());
    te.insert(test_only.begin(), test_only.end());
    c.train_data = spec_from_kv(tr, "", c.train_data);
    c.test_data = spec_from_kv(te, "", c.test_data);

    auto& t = c.train;
    auto& e = c.eval;
    for (const auto& [key, value] : kv) {
        if (key.rfind("dataset.", 0) == 0 || key == "run.seed") continue;
        if (key == "train.epochs") t.epochs = to_count(kv_int(kv, key), key);
        else if (key == "train.patience") t.patience = to_count(kv_int(kv, key), key);
        else if (key == "train.batch_size") t.batch_size = to_count(kv_int(kv, key), key);
        else if (key == "train.lr") t.lr = kv_double(kv, key);
        else if (key == "train.l2") t.l2 = kv_double(kv, key);
        else if (key == "train.dropout") t.dropout_rate = kv_double(kv, key);
        else if (key == "train.val_ratio") t.val_ratio = kv_double(kv, key);
        else if (key == "train.seed") t.seed = static_cast<std::uint64_t>(kv_int(kv, key));
        else if (key == "train.edge_mode") c.edge_mode = gat::edge_mode_from_string(value);
        else if (key == "eval.seed") e.seed = static_cast<std::uint64_t>(kv_int(kv, key));
        else if (key == "eval.csi") e.csi = csi_from(value);
        else if (key == "eval.min_errors") e.min_errors = to_count(kv_int(kv, key), key);
        else if (key == "eval.max_bits") e.max_bits = to_count(kv_int(kv, key), key);
        else if (key == "eval.message_len") e.message_len = to_count(kv_int(kv, key), key);
        else if (key == "eval.frames_per_block") e.frames_per_block = to_count(kv_int(kv, key), key);
        else if (key == "eval.doppler_hz") e.doppler_hz = parse_double_list(value);
        else if (key == "eval.fig7_n_ris") e.fig7_n_ris = parse_double_list(value);
        else if (key == "eval.fig7_snrs_db") e.fig7_snrs_db = parse_double_list(value);
        else if (key == "eval.band_runs") e.band_runs = to_count(kv_int(kv, key), key);
        else if (key == "eval.band_snrs_db") e.band_snrs_db = parse_double_list(value);
        else if (key == "eval.fig9_n_ris") e.fig9_n_ris = to_count(kv_int(kv, key), key);
        else if (key == "eval.fig9_bits") e.fig9_bits = parse_double_list(value);
        else if (key == "eval.fig9_snrs_db") e.fig9_snrs_db = parse_double_list(value);
        else if (key == "eval.fig10_n_ris") e.fig10_n_ris = to_count(kv_int(kv, key), key);
        else if (key == "eval.fig10_sets") e.fig10_sets = split_list(value);
        else if (key == "eval.fig10_bits") e.fig10_bits = parse_double_list(value);
        else if (key == "eval.fig10_snrs_db") e.fig10_snrs_db = parse_double_list(value);
        else if (key == "eval.fig10_los_phase") e.fig10_los_phase = kv_double(kv, key);
        else if (key == "eval.hist_bins") e.hist_bins = to_count(kv_int(kv, key), key);
        else throw std::invalid_argument("unknown config key " + key);
    }

    if (c.train_data.n_ris != c.test_data.n_ris || c.train_data.m_p != c.test_data.m_p)
        throw std::invalid_argument("train and test corpora must share n_ris and m_p");
    if (t.epochs == 0 || t.patience < 1 || t.patience > t.epochs)
        throw std::invalid_argument("train.patience must satisfy 1 <= patience <= epochs");
    if (t.batch_size == 0) throw std::invalid_argument("train.batch_size must be positive");
    if (!(t.val_ratio > 0.0 && t.val_ratio < 1.0)) throw std::invalid_argument("train.val_ratio must be in (0, 1)");
    if (!(t.dropout_rate >= 0.0 && t.dropout_rate < 1.0)) throw std::invalid_argument("train.dropout must be in [0, 1)");
    if (!(t.lr > 0.0) || !(t.l2 >= 0.0)) throw std::invalid_argument("train.lr must be positive and train.l2 non-negative");
    if (e.band_runs < 1) throw std::invalid_argument("eval.band_runs must be at least 1");
    if (e.hist_bins < 8) throw std::invalid_argument("eval.hist_bins must be at least 8");
    if (e.message_len == 0 || e.frames_per_block == 0 || e.max_bits == 0)
        throw std::invalid_argument("eval.message_len, eval.frames_per_block and eval.max_bits must be positive");
    if (e.doppler_hz.empty() || e.doppler_hz.front() != 0.0)
        throw std::invalid_argument("eval.doppler_hz must start with 0");
    for (const auto& s : e.fig10_sets) phase_set_from_string(s);
    return c;
}

KeyValues run_config_to_kv(const RunConfig& c) {
    KeyValues kv;
    const KeyValues tr = spec_to_kv(c.train_data, "");
    const KeyValues te = spec_to_kv(c.test_data, "");
    for (const auto& f : dataset_fields()) {
        if (f == "k_factor" || f == "los_phase") continue;
        if (tr.at(f) != te.at(f)) throw std::invalid_argument("dataset." + f + " differs between train and test");
        kv["dataset." + f] = tr.at(f);
    }
    kv["dataset.train_snrs_db"] = tr.at("snrs_db");
    kv["dataset.test_snrs_db"] = te.at("snrs_db");
    kv["dataset.train_samples_per_snr"] = tr.at("samples_per_snr");
    kv["dataset.test_samples_per_snr"] = te.at("samples_per_snr");
    kv["dataset.train_seed"] = tr.at("seed");
    kv["dataset.test_seed"] = te.at("seed");

    const auto& t = c.train;
    kv["train.epochs"] = std::to_string(t.epochs);
    kv["train.patience"] = std::to_string(t.patience);
    kv["train.batch_size"] = std::to_string(t.batch_size);
    kv["train.lr"] = format_double(t.lr);
    kv["train.l2"] = format_double(t.l2);
    kv["train.dropout"] = format_double(t.dropout_rate);
    kv["train.val_ratio"] = format_double(t.val_ratio);
    kv["train.seed"] = std::to_string(t.seed);
    kv["train.edge_mode"] = gat::to_string(c.edge_mode);

    const auto& e = c.eval;
    kv["eval.seed"] = std::to_string(e.seed);
    kv["eval.csi"] = csi_name(e.csi);
    kv["eval.min_errors"] = std::to_string(e.min_errors);
    kv["eval.max_bits"] = std::to_string(e.max_bits);
    kv["eval.message_len"] = std::to_string(e.message_len);
    kv["eval.frames_per_block"] = std::to_string(e.frames_per_block);
    kv["eval.doppler_hz"] = format_double_list(e.doppler_hz);
    kv["eval.fig7_n_ris"] = format_double_list(e.fig7_n_ris);
    kv["eval.fig7_snrs_db"] = format_double_list(e.fig7_snrs_db);
    kv["eval.band_runs"] = std::to_string(e.band_runs);
    kv["eval.band_snrs_db"] = format_double_list(e.band_snrs_db);
    kv["eval.fig9_n_ris"] = std::to_string(e.fig9_n_ris);
    kv["eval.fig9_bits"] = format_double_list(e.fig9_bits);
    kv["eval.fig9_snrs_db"] = format_double_list(e.fig9_snrs_db);
    kv["eval.fig10_n_ris"] = std::to_string(e.fig10_n_ris);
    kv["eval.fig10_sets"] = join(e.fig10_sets);
    kv["eval.fig10_bits"] = format_double_list(e.fig10_bits);
    kv["eval.fig10_snrs_db"] = format_double_list(e.fig10_snrs_db);
    kv["eval.fig10_los_phase"] = format_double(e.fig10_los_phase);
    kv["eval.hist_bins"] = std::to_string(e.hist_bins);
    return kv;
}

BerConfig ber_config(const RunConfig& c, std::size_t n_ris, const ChannelModel& channel, const PhaseSet& set,
                     const std::vector<double>& snrs_db, CsiMode csi) {
    BerConfig b;
    b.n_ris = n_ris;
    b.channel = channel;
    b.csi = csi;
    b.phase_set = set;
    b.snrs_db = snrs_db;
    b.message_len = c.eval.message_len;
    b.min_errors = c.eval.min_errors;
    b.max_bits = c.eval.max_bits;
    b.frames_per_block = c.eval.frames_per_block;
    b.seed = c.eval.seed;
    b.lfsr_seed = c.train_data.lfsr_seed;
    b.m_p = c.train_data.m_p;
    b.scaling = c.train_data.scaling;
    return b;
}

TrainedModel train_on(const Dataset& data, const gat::TrainConfig& cfg, gat::EdgeMode mode, std::uint64_t init_seed,
                      const std::function<void(const gat::EpochRecord&)>& on_epoch) {
    const auto [train, val] = split_train_val(data.samples, cfg.val_ratio, cfg.seed);
    gat::ModelShape shape;
    shape.n_ris = data.spec.n_ris;
    shape.m_p = data.spec.m_p;
    shape.edge_mode = mode;
    TrainedModel out{gat::GatModel(shape, init_seed), {}};
    gat::TrainConfig run = cfg;
    run.seed = init_seed;
    out.history = gat::fit(out.model, to_training_samples(train), to_training_samples(val), run, on_epoch);
    return out;
}

} // namespace risgat
