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

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "risgat/dataset.hpp"
#include "risgat/errors.hpp"
#include "risgat/eval.hpp"
#include "risgat/gat.hpp"
#include "risgat/kv.hpp"
#include "risgat/parallel.hpp"
#include "risgat/run_config.hpp"

namespace fs = std::filesystem;
using namespace risgat;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitMissing = 3;

struct MissingPrerequisite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config;
    std::string out = "run";
    std::vector<std::string> overrides;
    std::size_t workers = 0;
    bool force = false;
    std::size_t n_ris = 0;
    long long seed = -1;
    std::string figure;
};

void log(const std::string& msg) { std::cerr << "[risgat] " << msg << '\n'; }

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw MissingPrerequisite("cannot read " + p.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text;
}

RunConfig load_config(const Options& o, KeyValues& resolved) {
    KeyValues kv;
    try {
        if (!o.config.empty()) {
            if (!fs::exists(o.config)) throw ConfigError("config file " + o.config + " not found");
            kv = read_kv_file(o.config);
        }
        for (const auto& s : o.overrides) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
            kv[s.substr(0, eq)] = s.substr(eq + 1);
        }
        if (o.seed >= 0) kv["run.seed"] = std::to_string(o.seed);
        if (o.n_ris > 0) kv["dataset.n_ris"] = std::to_string(o.n_ris);
        RunConfig c = run_config_from_kv(kv);
        resolved = run_config_to_kv(c);
        return c;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void guard_outputs(const Options& o, const std::vector<fs::path>& outputs) {
    if (o.force) return;
    for (const auto& p : outputs)
        if (fs::exists(p)) throw ConfigError(p.string() + " exists; pass --force to overwrite");
}

fs::path prepare_run_dir(const Options& o, const std::string& command, const KeyValues& resolved) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_text(dir / ("config." + command + ".txt"), "# resolved configuration for " + command + "\n" + format_kv(resolved));
    return dir;
}

std::size_t workers_of(const Options& o) { return o.workers == 0 ? default_workers() : o.workers; }

Dataset require_dataset(const fs::path& p) {
    if (!fs::exists(p) || !fs::exists(manifest_path(p)))
        throw MissingPrerequisite("dataset " + p.string() + " not found; run gen-dataset first");
    return read_dataset(p);
}

gat::GatModel require_model(const fs::path& p, std::optional<std::size_t> n = std::nullopt) {
    if (!fs::exists(p)) throw MissingPrerequisite("weights " + p.string() + " not found; run train first");
    return gat::load_weights(p, n);
}

std::string manifest_hash(const fs::path& dataset) { return hex32(crc32_of(slurp(manifest_path(dataset)))); }

std::string config_hash(const KeyValues& resolved) { return hex32(crc32_of(format_kv(resolved))); }

int cmd_gen_dataset(const Options& o) {
    KeyValues resolved;
    const RunConfig c = load_config(o, resolved);
    const fs::path dir(o.out);
    guard_outputs(o, {dir / "train.risd", dir / "test.risd"});
    prepare_run_dir(o, "gen-dataset", resolved);
    for (const auto& [name, spec] : {std::pair{"train", c.train_data}, std::pair{"test", c.test_data}}) {
        log(std::string("generating ") + name + " corpus: N=" + std::to_string(spec.n_ris) + ", " +
            std::to_string(spec.snrs_db.size()) + " SNR points x " + std::to_string(spec.samples_per_snr));
        const Dataset d = generate_dataset(spec, workers_of(o));
        const KeyValues m = write_dataset(dir / (std::string(name) + ".risd"), d);
        log(std::string("wrote ") + name + ".risd, checksum " + m.at("checksum.file"));
    }
    return 0;
}

int cmd_train(const Options& o) {
    KeyValues resolved;
    const RunConfig c = load_config(o, resolved);
    const fs::path dir(o.out);
    const Dataset data = require_dataset(dir / "train.risd");
    if (data.spec.n_ris != c.train_data.n_ris || data.spec.m_p != c.train_data.m_p)
        throw ConfigError("dataset has N=" + std::to_string(data.spec.n_ris) + ", M_p=" + std::to_string(data.spec.m_p) +
                          " but the configuration asks for N=" + std::to_string(c.train_data.n_ris));
    guard_outputs(o, {dir / "model.gatw", dir / "history.csv"});
    prepare_run_dir(o, "train", resolved);

    log("training on " + std::to_string(data.samples.size()) + " samples");
    const TrainedModel t = train_on(data, c.train, c.edge_mode, c.train.seed, [](const gat::EpochRecord& r) {
        log("epoch " + std::to_string(r.epoch) + " train " + format_double(r.train_loss) + " val " +
            format_double(r.val_loss));
    });
    gat::save_weights(t.model, dir / "model.gatw");
    std::ostringstream h;
    h << csv_header({manifest_hash(dir / "train.risd"), "gat", c.train.seed},
                    {"best_epoch=" + std::to_string(t.history.best_epoch),
                     std::string("stopped_early=") + (t.history.stopped_early ? "1" : "0")})
      << "epoch,train_loss,val_loss\n";
    for (const auto& r : t.history.epochs)
        h << r.epoch << ',' << format_double(r.train_loss) << ',' << format_double(r.val_loss) << '\n';
    write_text(dir / "history.csv", h.str());
    log("best epoch " + std::to_string(t.history.best_epoch) + ", weights in " + (dir / "model.gatw").string());
    return 0;
}

ChannelModel dataset_channel(const RunConfig& c) { return c.train_data.channel; }

int cmd_eval(const Options& o) {
    KeyValues resolved;
    const RunConfig c = load_config(o, resolved);
    const fs::path dir(o.out);
    const std::size_t workers = workers_of(o);
    const std::string& fig = o.figure;
    static const std::map<std::string, std::string> outputs{
        {"fig5", "fig5_nmse.csv"},  {"fig6", "fig6_doppler.csv"}, {"fig7", "fig7_ber.csv"},
        {"fig8", "fig8_band.csv"},  {"fig9", "fig9_bits.csv"},    {"fig10", "fig10_sets.csv"},
        {"fig11", "fig11_hist.csv"}};
    const auto out_it = outputs.find(fig);
    if (out_it == outputs.end()) throw ConfigError("unknown experiment '" + fig + "' (expected fig5..fig11)");
    const fs::path out = dir / out_it->second;
    guard_outputs(o, {out});

    std::string csv;
    if (fig == "fig5") {
        const gat::GatModel model = require_model(dir / "model.gatw");
        const Dataset test = require_dataset(dir / "test.risd");
        prepare_run_dir(o, "eval-" + fig, resolved);
        const NmseReport r = run_nmse_experiment(model, test.samples, test.spec.scaling, workers);
        csv = nmse_csv(r, {manifest_hash(dir / "test.risd"), "gat+ls", test.spec.seed});
    } else if (fig == "fig6") {
        const gat::GatModel model = require_model(dir / "model.gatw");
        prepare_run_dir(o, "eval-" + fig, resolved);
        const auto rows = doppler_sweep(model, c.test_data, c.eval.doppler_hz, workers);
        csv = doppler_csv(rows, {hex32(crc32_of(format_kv(spec_to_kv(c.test_data)))), "gat", c.test_data.seed});
    } else if (fig == "fig7") {
        std::optional<gat::GatModel> model;
        if (c.eval.csi == CsiMode::gat) model = require_model(dir / "model.gatw");
        prepare_run_dir(o, "eval-" + fig, resolved);
        std::vector<BerReport> reports;
        for (double nd : c.eval.fig7_n_ris) {
            const auto n = static_cast<std::size_t>(nd);
            const PhaseSet cont = make_phase_set(PhaseSetId::continuous, 0);
            BerReport p = run_ber_experiment(
                ber_config(c, n, dataset_channel(c), cont, c.eval.fig7_snrs_db, CsiMode::perfect), nullptr, workers);
            p.tag = "N" + std::to_string(n) + ":" + p.tag;
            reports.push_back(p);
            if (model && model->n_ris() == n) {
                BerReport g = run_ber_experiment(
                    ber_config(c, n, dataset_channel(c), cont, c.eval.fig7_snrs_db, CsiMode::gat), &*model, workers);
                g.tag = "N" + std::to_string(n) + ":" + g.tag;
                reports.push_back(g);
            }
        }
        csv = ber_csv(reports, {config_hash(resolved), c.eval.csi == CsiMode::gat ? "perfect,gat" : "perfect",
                                c.eval.seed});
    } else if (fig == "fig8") {
        const Dataset data = require_dataset(dir / "train.risd");
        prepare_run_dir(o, "eval-" + fig, resolved);
        const BerConfig b = ber_config(c, data.spec.n_ris, data.spec.channel, make_phase_set(PhaseSetId::continuous, 0),
                                       c.eval.band_snrs_db, CsiMode::gat);
        const BandReport r = confidence_band(
            [&](std::size_t i) {
                log("band run " + std::to_string(i + 1) + "/" + std::to_string(c.eval.band_runs));
                return train_on(data, c.train, c.edge_mode, c.train.seed + i).model;
            },
            c.eval.band_runs, b, workers);
        csv = band_csv(r, {manifest_hash(dir / "train.risd"), "gat", c.eval.seed});
    } else if (fig == "fig9" || fig == "fig10") {
        std::optional<gat::GatModel> model;
        if (c.eval.csi == CsiMode::gat) model = require_model(dir / "model.gatw");
        prepare_run_dir(o, "eval-" + fig, resolved);
        const bool bits_study = fig == "fig9";
        const std::size_t n = bits_study ? c.eval.fig9_n_ris : c.eval.fig10_n_ris;
        if (model && model->n_ris() != n)
            throw ConfigError("weights are for N=" + std::to_string(model->n_ris()) + " but " + fig + " uses N=" +
                              std::to_string(n));
        ChannelModel ch = dataset_channel(c);
        if (!bits_study) ch.h.los_phase = ch.g.los_phase = c.eval.fig10_los_phase;
        const auto& snrs = bits_study ? c.eval.fig9_snrs_db : c.eval.fig10_snrs_db;
        std::vector<PhaseSet> sets{make_phase_set(PhaseSetId::continuous, 0)};
        const std::vector<std::string> names = bits_study ? std::vector<std::string>{"set1"} : c.eval.fig10_sets;
        const auto& bits = bits_study ? c.eval.fig9_bits : c.eval.fig10_bits;
        for (const auto& name : names)
            for (double b : bits) sets.push_back(make_phase_set(phase_set_from_string(name), static_cast<unsigned>(b)));
        std::vector<BerReport> reports;
        for (const auto& s : sets)
            reports.push_back(run_ber_experiment(ber_config(c, n, ch, s, snrs, c.eval.csi), model ? &*model : nullptr,
                                                 workers));
        csv = ber_csv(reports, {config_hash(resolved), c.eval.csi == CsiMode::gat ? "gat" : "perfect", c.eval.seed},
                      {"n_ris=" + std::to_string(n), "los_phase_h=" + format_double(ch.h.los_phase),
                       "los_phase_g=" + format_double(ch.g.los_phase)});
    } else {
        const gat::GatModel model = require_model(dir / "model.gatw");
        const Dataset test = require_dataset(dir / "test.risd");
        prepare_run_dir(o, "eval-" + fig, resolved);
        std::vector<ChannelRealization> truth(test.samples.size()), est(test.samples.size());
        parallel_for(test.samples.size(), workers, [&](std::size_t k) {
            truth[k] = test.samples[k].truth;
            const EstimatorOutput e = gat_estimate(model, test.samples[k]);
            est[k] = {e.h_hat, e.g_hat};
        });
        csv = histogram_csv(phase_histogram(cascaded_phases(truth), c.eval.hist_bins),
                            phase_histogram(cascaded_phases(est), c.eval.hist_bins),
                            {manifest_hash(dir / "test.risd"), "gat", test.spec.seed});
    }
    write_text(out, csv);
    log("wrote " + out.string());
    return 0;
}

void add_common(CLI::App* app, Options& o) {
    app->add_option("-c,--config", o.config, "key = value configuration file");
    app->add_option("-o,--out", o.out, "run directory")->capture_default_str();
    app->add_option("--set", o.overrides, "override one key, e.g. --set train.epochs=10");
    app->add_option("-w,--workers", o.workers, "parallel Monte Carlo workers (default: all cores)");
    app->add_flag("--force", o.force, "overwrite existing outputs");
    app->add_option("--n-ris", o.n_ris, "number of RIS elements (dataset.n_ris)");
    app->add_option("--seed", o.seed, "master seed (run.seed)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"risgat: RIS-assisted satellite IoT link simulator with a GAT channel estimator"};
    app.require_subcommand(1);
    Options o;
    auto* gen = app.add_subcommand("gen-dataset", "generate train and test corpora");
    auto* train = app.add_subcommand("train", "train the GAT estimator on train.risd");
    auto* ev = app.add_subcommand("eval", "run one figure experiment (fig5..fig11)");
    add_common(gen, o);
    add_common(train, o);
    add_common(ev, o);
    ev->add_option("figure", o.figure, "fig5|fig6|fig7|fig8|fig9|fig10|fig11")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen_dataset(o);
        if (train->parsed()) return cmd_train(o);
        return cmd_eval(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DimensionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const MissingPrerequisite& e) {
        std::cerr << "missing prerequisite: " << e.what() << '\n';
        return kExitMissing;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
