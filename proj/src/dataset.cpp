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

#include "risgat/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "risgat/binio.hpp"
#include "risgat/errors.hpp"
#include "risgat/parallel.hpp"

namespace risgat {

const char* to_string(FeatureScaling s) { return s == FeatureScaling::raw ? "raw" : "snr_normalized"; }

FeatureScaling feature_scaling_from_string(const std::string& s) {
    if (s == "raw") return FeatureScaling::raw;
    if (s == "snr_normalized") return FeatureScaling::snr_normalized;
    throw std::invalid_argument("unknown feature scaling '" + s + "' (expected raw|snr_normalized)");
}

const char* to_string(DopplerPhase p) { return p == DopplerPhase::random ? "random" : "centered"; }

DopplerPhase doppler_phase_from_string(const std::string& s) {
    if (s == "centered") return DopplerPhase::centered;
    if (s == "random") return DopplerPhase::random;
    throw std::invalid_argument("unknown Doppler phase mode '" + s + "' (expected centered|random)");
}

Matrix encode_label(const ComplexVec& h, const ComplexVec& g) {
    if (h.size() != g.size())
        throw DimensionError("encode_label: h has " + std::to_string(h.size()) + ", g " + std::to_string(g.size()));
    const std::size_t n = h.size();
    Matrix y(1, 4 * n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = h[i].real();
        y[n + i] = g[i].real();
        y[2 * n + i] = h[i].imag();
        y[3 * n + i] = g[i].imag();
    }
    return y;
}

ChannelRealization decode_label(std::span<const double> y, std::size_t n_ris) {
    if (y.size() != 4 * n_ris)
        throw DimensionError("decode_label: vector of " + std::to_string(y.size()) + " entries for N=" +
                             std::to_string(n_ris));
    ChannelRealization c{ComplexVec(n_ris), ComplexVec(n_ris)};
    for (std::size_t i = 0; i < n_ris; ++i) {
        c.h[i] = {y[i], y[2 * n_ris + i]};
        c.g[i] = {y[n_ris + i], y[3 * n_ris + i]};
    }
    return c;
}

namespace {

double feature_scale(double snr_db, FeatureScaling scaling) {
    return scaling == FeatureScaling::raw ? 1.0 : 1.0 / std::sqrt(db_to_lin(snr_db));
}

GraphInput pilot_graph(std::span<const double> pilot) {
    GraphInput g;
    g.x = Matrix(2, pilot.size());
    g.adjacency = Matrix{{0.0, 1.0}, {1.0, 0.0}};
    g.edges = EdgeTensor(2, pilot.size());
    std::ranges::copy(pilot, g.edges.edge(0, 1).begin());
    std::ranges::copy(pilot, g.edges.edge(1, 0).begin());
    return g;
}

} // namespace

GraphSample encode_sample(const ComplexVec& r, const PilotSequence& s, const ComplexVec& h, const ComplexVec& g,
                          double snr_db, FeatureScaling scaling) {
    if (r.size() != s.size())
        throw DimensionError("encode_sample: " + std::to_string(r.size()) + " received symbols for a pilot of " +
                             std::to_string(s.size()));
    GraphSample out;
    out.graph = pilot_graph(s.symbols);
    const double k = feature_scale(snr_db, scaling);
    for (std::size_t m = 0; m < r.size(); ++m) {
        out.graph.x(0, m) = r[m].real() * k;
        out.graph.x(1, m) = r[m].imag() * k;
    }
    out.y = encode_label(h, g);
    out.snr_db = snr_db;
    out.truth = {h, g};
    return out;
}

ComplexVec received_signal(const GraphSample& sample, FeatureScaling scaling) {
    const double k = 1.0 / feature_scale(sample.snr_db, scaling);
    ComplexVec r(sample.graph.x.cols());
    for (std::size_t m = 0; m < r.size(); ++m) r[m] = {sample.graph.x(0, m) * k, sample.graph.x(1, m) * k};
    return r;
}

DatasetSpec default_train_spec(std::size_t n_ris, std::uint64_t seed) {
    DatasetSpec s;
    s.n_ris = n_ris;
    s.seed = seed;
    for (int db = -30; db <= 0; db += 2) s.snrs_db.push_back(db);
    s.samples_per_snr = 1000;
    return s;
}

DatasetSpec default_test_spec(std::size_t n_ris, std::uint64_t seed) {
    DatasetSpec s;
    s.n_ris = n_ris;
    s.seed = seed;
    for (int db = -30; db <= 10; db += 2) s.snrs_db.push_back(db);
    s.samples_per_snr = 500;
    return s;
}

KeyValues spec_to_kv(const DatasetSpec& s, const std::string& p) {
    return {
        {p + "n_ris", std::to_string(s.n_ris)},
        {p + "m_p", std::to_string(s.m_p)},
        {p + "k_factor_h", format_double(s.channel.h.k_factor)},
        {p + "k_factor_g", format_double(s.channel.g.k_factor)},
        {p + "omega_h", format_double(s.channel.h.omega)},
        {p + "omega_g", format_double(s.channel.g.omega)},
        {p + "los_phase_h", format_double(s.channel.h.los_phase)},
        {p + "los_phase_g", format_double(s.channel.g.los_phase)},
        {p + "phase_model", to_string(s.channel.phase_model)},
        {p + "unit_amplitude", s.channel.unit_amplitude ? "1" : "0"},
        {p + "snrs_db", format_double_list(s.snrs_db)},
        {p + "samples_per_snr", std::to_string(s.samples_per_snr)},
        {p + "seed", std::to_string(s.seed)},
        {p + "lfsr_seed", std::to_string(s.lfsr_seed)},
        {p + "feature_scaling", to_string(s.scaling)},
        {p + "doppler_hz", format_double(s.doppler_hz)},
        {p + "symbol_rate", format_double(s.symbol_rate)},
        {p + "doppler_phase", to_string(s.doppler_phase)},
    };
}

DatasetSpec spec_from_kv(const KeyValues& kv, const std::string& p, const DatasetSpec& base) {
    DatasetSpec s = base;
    auto has = [&](const char* k) { return kv.count(p + k) > 0; };
    auto count = [&](const char* k) {
        const long long v = kv_int(kv, p + k);
        if (v < 0) throw std::invalid_argument(p + k + " must be non-negative");
        return static_cast<std::size_t>(v);
    };
    if (has("n_ris")) s.n_ris = count("n_ris");
    if (has("m_p")) s.m_p = count("m_p");
    if (has("k_factor")) s.channel.h.k_factor = s.channel.g.k_factor = kv_double(kv, p + "k_factor");
    if (has("k_factor_h")) s.channel.h.k_factor = kv_double(kv, p + "k_factor_h");
    if (has("k_factor_g")) s.channel.g.k_factor = kv_double(kv, p + "k_factor_g");
    if (has("omega_h")) s.channel.h.omega = kv_double(kv, p + "omega_h");
    if (has("omega_g")) s.channel.g.omega = kv_double(kv, p + "omega_g");
    if (has("los_phase")) s.channel.h.los_phase = s.channel.g.los_phase = kv_double(kv, p + "los_phase");
    if (has("los_phase_h")) s.channel.h.los_phase = kv_double(kv, p + "los_phase_h");
    if (has("los_phase_g")) s.channel.g.los_phase = kv_double(kv, p + "los_phase_g");
    if (has("phase_model")) s.channel.phase_model = phase_model_from_string(kv.at(p + "phase_model"));
    if (has("unit_amplitude")) s.channel.unit_amplitude = kv_int(kv, p + "unit_amplitude") != 0;
    if (has("snrs_db")) s.snrs_db = parse_double_list(kv.at(p + "snrs_db"));
    if (has("samples_per_snr")) s.samples_per_snr = count("samples_per_snr");
    if (has("seed")) s.seed = static_cast<std::uint64_t>(kv_int(kv, p + "seed"));
    if (has("lfsr_seed")) s.lfsr_seed = static_cast<std::uint32_t>(kv_int(kv, p + "lfsr_seed"));
    if (has("feature_scaling")) s.scaling = feature_scaling_from_string(kv.at(p + "feature_scaling"));
    if (has("doppler_hz")) s.doppler_hz = kv_double(kv, p + "doppler_hz");
    if (has("symbol_rate")) s.symbol_rate = kv_double(kv, p + "symbol_rate");
    if (has("doppler_phase")) s.doppler_phase = doppler_phase_from_string(kv.at(p + "doppler_phase"));
    if (!(s.symbol_rate > 0.0)) throw std::invalid_argument(p + "symbol_rate must be positive");
    if (s.n_ris == 0 || s.m_p == 0) throw std::invalid_argument(p + "n_ris and " + p + "m_p must be positive");
    if (s.snrs_db.empty()) throw std::invalid_argument(p + "snrs_db is empty");
    return s;
}

Dataset generate_dataset(const DatasetSpec& spec, std::size_t workers) {
    if (spec.n_ris == 0 || spec.m_p == 0 || spec.snrs_db.empty() || spec.samples_per_snr == 0)
        throw std::invalid_argument("generate_dataset: empty specification");
    const PilotSequence pilot = make_pilot(LfsrConfig{0b10101, spec.lfsr_seed}, spec.m_p);
    Dataset data{spec, std::vector<GraphSample>(spec.snrs_db.size() * spec.samples_per_snr)};
    parallel_for(spec.snrs_db.size(), workers, [&](std::size_t si) {
        const double snr_db = spec.snrs_db[si];
        const double snr = db_to_lin(snr_db);
        for (std::size_t k = 0; k < spec.samples_per_snr; ++k) {
            Rng rng = Rng::substream(spec.seed, (static_cast<std::uint64_t>(si) << 32) | k);
            ChannelRealization ch = draw_channel(spec.n_ris, spec.channel, rng);
            ComplexVec r = synthesize_pilot_rx(pilot, ch.h, ch.g, snr, rng);
            if (spec.doppler_hz != 0.0) {
                double phase0 = -2.0 * kPi * spec.doppler_hz * 0.5 * static_cast<double>(spec.m_p - 1) / spec.symbol_rate;
                if (spec.doppler_phase == DopplerPhase::random) {
                    Rng prng = Rng::substream(spec.seed ^ 0xd0bb1e4ULL, (static_cast<std::uint64_t>(si) << 32) | k);
                    phase0 = prng.uniform(-kPi, kPi);
                }
                r = apply_doppler(r, spec.doppler_hz, spec.symbol_rate, phase0);
            }
            data.samples[si * spec.samples_per_snr + k] = encode_sample(r, pilot, ch.h, ch.g, snr_db, spec.scaling);
        }
    });
    return data;
}

std::pair<std::vector<GraphSample>, std::vector<GraphSample>> split_train_val(const std::vector<GraphSample>& samples,
                                                                             double val_ratio, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("split_train_val: empty dataset");
    if (!(val_ratio > 0.0 && val_ratio < 1.0)) throw std::invalid_argument("split_train_val: ratio must be in (0, 1)");
    std::vector<double> order;
    std::map<double, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto& v = strata[samples[i].snr_db];
        if (v.empty()) order.push_back(samples[i].snr_db);
        v.push_back(i);
    }
    std::vector<bool> is_val(samples.size(), false);
    for (std::size_t s = 0; s < order.size(); ++s) {
        std::vector<std::size_t> idx = strata[order[s]];
        Rng rng = Rng::substream(seed, s);
        std::shuffle(idx.begin(), idx.end(), rng.engine());
        const auto n_val = static_cast<std::size_t>(std::llround(val_ratio * static_cast<double>(idx.size())));
        for (std::size_t k = 0; k < n_val; ++k) is_val[idx[k]] = true;
    }
    std::pair<std::vector<GraphSample>, std::vector<GraphSample>> out;
    for (std::size_t i = 0; i < samples.size(); ++i) (is_val[i] ? out.second : out.first).push_back(samples[i]);
    return out;
}

std::vector<gat::TrainingSample> to_training_samples(const std::vector<GraphSample>& samples) {
    std::vector<gat::TrainingSample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back({s.graph, s.y});
    return out;
}

std::uint32_t crc32_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1u << 30));
        crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + pos), chunk);
        pos += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::string hex32(std::uint32_t v) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

std::filesystem::path manifest_path(const std::filesystem::path& dataset_path) {
    auto p = dataset_path;
    return p.replace_extension(".manifest");
}

namespace {

struct Tensor {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<double> data;
};

void write_tensor(std::ostream& os, const Tensor& t) {
    binio::put_u32(os, static_cast<std::uint32_t>(t.name.size()));
    os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    binio::put_u32(os, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) binio::put_u32(os, d);
    for (double v : t.data) binio::put_f64(os, v);
}

Tensor read_tensor(std::istream& is) {
    Tensor t;
    const std::uint32_t len = binio::get_u32(is);
    if (len > 256) throw FormatError("tensor name too long");
    t.name.resize(len);
    if (!is.read(t.name.data(), len)) throw FormatError("unexpected end of file in tensor name");
    const std::uint32_t rank = binio::get_u32(is);
    if (rank > 8) throw FormatError("tensor " + t.name + " has rank " + std::to_string(rank));
    std::size_t count = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
        t.dims.push_back(binio::get_u32(is));
        count *= t.dims.back();
    }
    if (count > (std::size_t{1} << 31)) throw FormatError("tensor " + t.name + " too large");
    t.data.resize(count);
    for (auto& v : t.data) v = binio::get_f64(is);
    return t;
}

std::string tensor_bytes(const Tensor& t) {
    std::ostringstream os(std::ios::binary);
    write_tensor(os, t);
    return os.str();
}

std::vector<Tensor> dataset_tensors(const Dataset& d) {
    const auto s = static_cast<std::uint32_t>(d.samples.size());
    const auto n = static_cast<std::uint32_t>(d.spec.n_ris);
    const auto mp = static_cast<std::uint32_t>(d.spec.m_p);
    Tensor pilot{"pilot", {mp}, {}};
    if (!d.samples.empty()) {
        auto e = d.samples.front().graph.edges.edge(0, 1);
        pilot.data.assign(e.begin(), e.end());
    } else {
        pilot.data = make_pilot(LfsrConfig{0b10101, d.spec.lfsr_seed}, d.spec.m_p).symbols;
    }
    Tensor x{"x", {s, 2, mp}, {}}, y{"y", {s, 4 * n}, {}}, snr{"snr_db", {s}, {}};
    Tensor h{"h", {s, n, 2}, {}}, g{"g", {s, n, 2}, {}};
    for (const auto& smp : d.samples) {
        if (smp.graph.x.rows() != 2 || smp.graph.x.cols() != mp || smp.y.size() != 4 * n ||
            smp.truth.h.size() != n || smp.truth.g.size() != n)
            throw DimensionError("write_dataset: sample shapes do not match the dataset parameters");
        x.data.insert(x.data.end(), smp.graph.x.data().begin(), smp.graph.x.data().end());
        y.data.insert(y.data.end(), smp.y.data().begin(), smp.y.data().end());
        snr.data.push_back(smp.snr_db);
        for (std::size_t i = 0; i < n; ++i) {
            h.data.push_back(smp.truth.h[i].real());
            h.data.push_back(smp.truth.h[i].imag());
            g.data.push_back(smp.truth.g[i].real());
            g.data.push_back(smp.truth.g[i].imag());
        }
    }
    return {pilot, x, y, snr, h, g};
}

} // namespace

KeyValues write_dataset(const std::filesystem::path& path, const Dataset& data) {
    const std::vector<Tensor> tensors = dataset_tensors(data);
    std::ostringstream blob(std::ios::binary);
    binio::put_magic(blob, "RISD");
    binio::put_u32(blob, kDatasetFormatVersion);
    binio::put_u32(blob, static_cast<std::uint32_t>(tensors.size()));
    KeyValues manifest = spec_to_kv(data.spec);
    for (const auto& t : tensors) {
        const std::string bytes = tensor_bytes(t);
        blob.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        manifest["checksum.tensor." + t.name] = hex32(crc32_of(bytes));
    }
    const std::string bytes = blob.str();
    manifest["format"] = "RISD";
    manifest["format_version"] = std::to_string(kDatasetFormatVersion);
    manifest["generator"] = kGeneratorVersion;
    manifest["master_seed"] = std::to_string(data.spec.seed);
    manifest["samples"] = std::to_string(data.samples.size());
    manifest["creation_order"] = "snr-major, sample index within SNR";
    manifest["file"] = path.filename().string();
    manifest["checksum.file"] = hex32(crc32_of(bytes));

    {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!os) throw std::runtime_error("failed writing " + path.string());
    }
    std::ofstream ms(manifest_path(path), std::ios::trunc);
    if (!ms) throw std::runtime_error("cannot open " + manifest_path(path).string() + " for writing");
    ms << "# risgat dataset manifest\n" << format_kv(manifest);
    return manifest;
}

Dataset read_dataset(const std::filesystem::path& path) {
    if (!std::filesystem::exists(manifest_path(path)))
        throw std::runtime_error("missing manifest " + manifest_path(path).string());
    const KeyValues manifest = read_kv_file(manifest_path(path));
    if (manifest.count("format_version") == 0 || kv_int(manifest, "format_version") != kDatasetFormatVersion)
        throw FormatError("unsupported dataset manifest version");

    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open dataset " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    const std::string bytes = ss.str();
    if (manifest.count("checksum.file") == 0 || hex32(crc32_of(bytes)) != manifest.at("checksum.file"))
        throw FormatError("checksum mismatch for " + path.string());

    std::istringstream in(bytes, std::ios::binary);
    binio::expect_magic(in, "RISD");
    const std::uint32_t version = binio::get_u32(in);
    if (version != kDatasetFormatVersion) throw FormatError("unsupported dataset version " + std::to_string(version));
    const std::uint32_t count = binio::get_u32(in);
    std::map<std::string, Tensor> tensors;
    for (std::uint32_t i = 0; i < count; ++i) {
        Tensor t = read_tensor(in);
        tensors[t.name] = std::move(t);
    }
    for (const char* name : {"pilot", "x", "y", "snr_db", "h", "g"})
        if (tensors.count(name) == 0) throw FormatError(std::string("dataset lacks tensor ") + name);

    Dataset d;
    d.spec = spec_from_kv(manifest);
    const std::size_t n = d.spec.n_ris, mp = d.spec.m_p;
    const std::size_t s = tensors["snr_db"].data.size();
    if (tensors["x"].data.size() != s * 2 * mp || tensors["y"].data.size() != s * 4 * n ||
        tensors["h"].data.size() != s * 2 * n || tensors["g"].data.size() != s * 2 * n ||
        tensors["pilot"].data.size() != mp)
        throw FormatError("dataset tensors disagree with the manifest shape");

    const auto& pilot = tensors["pilot"].data;
    GraphInput proto = pilot_graph(pilot);
    d.samples.resize(s);
    for (std::size_t k = 0; k < s; ++k) {
        GraphSample& smp = d.samples[k];
        smp.graph = proto;
        std::copy_n(tensors["x"].data.begin() + static_cast<std::ptrdiff_t>(k * 2 * mp), 2 * mp,
                    smp.graph.x.data().begin());
        smp.y = Matrix(1, 4 * n);
        std::copy_n(tensors["y"].data.begin() + static_cast<std::ptrdiff_t>(k * 4 * n), 4 * n, smp.y.data().begin());
        smp.snr_db = tensors["snr_db"].data[k];
        smp.truth.h.resize(n);
        smp.truth.g.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t o = (k * n + i) * 2;
            smp.truth.h[i] = {tensors["h"].data[o], tensors["h"].data[o + 1]};
            smp.truth.g[i] = {tensors["g"].data[o], tensors["g"].data[o + 1]};
        }
    }
    return d;
}

} // namespace risgat
