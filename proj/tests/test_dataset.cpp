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
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "risgat/dataset.hpp"
#include "risgat/errors.hpp"

using namespace risgat;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "risgat_test_dataset";
    fs::create_directories(dir);
    return dir / name;
}

DatasetSpec small_spec() {
    DatasetSpec s = default_train_spec(4, 77);
    s.snrs_db = {-10.0, 0.0, 10.0};
    s.samples_per_snr = 10;
    return s;
}

bool same_samples(const std::vector<GraphSample>& a, const std::vector<GraphSample>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!(a[k].graph.x == b[k].graph.x) || !(a[k].graph.adjacency == b[k].graph.adjacency) ||
            !(a[k].graph.edges == b[k].graph.edges) || !(a[k].y == b[k].y) || a[k].snr_db != b[k].snr_db ||
            a[k].truth.h != b[k].truth.h || a[k].truth.g != b[k].truth.g)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("label layout") {
    const Matrix y = encode_label({Complex(1, 2)}, {Complex(3, -1)});
    CHECK(std::vector<double>(y.data().begin(), y.data().end()) == std::vector<double>{1, 3, 2, -1});

    Rng rng(1);
    const ComplexVec h = sample_rician(5, {}, rng), g = sample_rician(5, {}, rng);
    const Matrix y5 = encode_label(h, g);
    REQUIRE(y5.cols() == 20);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(y5[i] == h[i].real());
        CHECK(y5[5 + i] == g[i].real());
        CHECK(y5[10 + i] == h[i].imag());
        CHECK(y5[15 + i] == g[i].imag());
    }
    const auto back = decode_label(y5.data(), 5);
    CHECK(back.h == h);
    CHECK(back.g == g);
    CHECK_THROWS_AS(encode_label(h, ComplexVec(4)), DimensionError);
    CHECK_THROWS_AS(decode_label(y5.data(), 4), DimensionError);
}

TEST_CASE("encoded graph structure") {
    const PilotSequence s = make_pilot();
    const ComplexVec zero(16, 0.0);
    for (auto scaling : {FeatureScaling::raw, FeatureScaling::snr_normalized}) {
        const GraphSample g = encode_sample(zero, s, {1.0}, {1.0}, 5.0, scaling);
        CHECK(g.graph.x == Matrix(2, 16));
        CHECK(g.graph.adjacency == Matrix({{0, 1}, {1, 0}}));
        REQUIRE(g.graph.edges.nodes() == 2);
        REQUIRE(g.graph.edges.features() == 16);
        for (std::size_t m = 0; m < 16; ++m) {
            CHECK(g.graph.edges.edge(0, 1)[m] == s.symbols[m]);
            CHECK(g.graph.edges.edge(1, 0)[m] == s.symbols[m]);
            CHECK(g.graph.edges.edge(0, 0)[m] == 0.0);
            CHECK(g.graph.edges.edge(1, 1)[m] == 0.0);
        }
    }

    Rng rng(2);
    const ComplexVec r = awgn(16, 3.0, rng);
    const GraphSample raw = encode_sample(r, s, {1.0}, {1.0}, -12.0, FeatureScaling::raw);
    for (std::size_t m = 0; m < 16; ++m) {
        CHECK(raw.graph.x(0, m) == r[m].real());
        CHECK(raw.graph.x(1, m) == r[m].imag());
    }
    CHECK(raw.graph.adjacency == Matrix({{0, 1}, {1, 0}}));
    const GraphSample norm = encode_sample(r, s, {1.0}, {1.0}, -12.0, FeatureScaling::snr_normalized);
    const double k = std::sqrt(db_to_lin(-12.0));
    for (std::size_t m = 0; m < 16; ++m) CHECK(norm.graph.x(0, m) * k == Catch::Approx(r[m].real()));
    for (auto scaling : {FeatureScaling::raw, FeatureScaling::snr_normalized}) {
        const ComplexVec back = received_signal(encode_sample(r, s, {1.0}, {1.0}, -12.0, scaling), scaling);
        for (std::size_t m = 0; m < 16; ++m) CHECK(std::abs(back[m] - r[m]) < 1e-12 * (1 + std::abs(r[m])));
    }
    CHECK_THROWS_AS(encode_sample(ComplexVec(15), s, {1.0}, {1.0}, 0.0), DimensionError);
    CHECK_THROWS_AS(encode_sample(r, s, {1.0, 1.0}, {1.0}, 0.0), DimensionError);
    CHECK(feature_scaling_from_string(to_string(FeatureScaling::raw)) == FeatureScaling::raw);
    CHECK(doppler_phase_from_string(to_string(DopplerPhase::random)) == DopplerPhase::random);
}

TEST_CASE("corpus sizes follow the default grids") {
    const DatasetSpec tr = default_train_spec(16);
    REQUIRE(tr.snrs_db.size() == 16);
    CHECK(tr.snrs_db.front() == -30.0);
    CHECK(tr.snrs_db.back() == 0.0);
    const Dataset train = generate_dataset(tr);
    CHECK(train.samples.size() == 16000);
    CHECK(train.samples.front().y.cols() == 64);

    const auto [t, v] = split_train_val(train.samples, 0.2, 1);
    CHECK(t.size() == 12800);
    CHECK(v.size() == 3200);
    std::map<double, std::pair<int, int>> per_snr;
    for (const auto& s : t) ++per_snr[s.snr_db].first;
    for (const auto& s : v) ++per_snr[s.snr_db].second;
    REQUIRE(per_snr.size() == 16);
    for (const auto& [snr, c] : per_snr) {
        CHECK(c.first == 800);
        CHECK(c.second == 200);
    }

    DatasetSpec te = default_test_spec(16);
    REQUIRE(te.snrs_db.size() == 21);
    CHECK(te.snrs_db.back() == 10.0);
    te.n_ris = 4;
    CHECK(generate_dataset(te).samples.size() == 10500);
}

TEST_CASE("stratified split is disjoint and exhaustive") {
    DatasetSpec s = small_spec();
    s.samples_per_snr = 13;
    const Dataset d = generate_dataset(s);
    const auto [t, v] = split_train_val(d.samples, 0.2, 5);
    CHECK(t.size() + v.size() == d.samples.size());
    std::multiset<double> all, joined;
    for (const auto& x : d.samples) all.insert(x.y[0]);
    for (const auto& x : t) joined.insert(x.y[0]);
    for (const auto& x : v) joined.insert(x.y[0]);
    CHECK(all == joined);
    std::set<double> tv, vv;
    for (const auto& x : t) tv.insert(x.y[0]);
    for (const auto& x : v) vv.insert(x.y[0]);
    for (double q : vv) CHECK(tv.count(q) == 0);
    std::map<double, int> val_count;
    for (const auto& x : v) ++val_count[x.snr_db];
    for (double snr : s.snrs_db) CHECK(val_count[snr] == 3);  // round(0.2 * 13)

    const auto again = split_train_val(d.samples, 0.2, 5);
    CHECK(same_samples(again.first, t));
    CHECK(same_samples(again.second, v));
    CHECK_THROWS(split_train_val({}, 0.2, 1));
    CHECK_THROWS(split_train_val(d.samples, 1.0, 1));
}

TEST_CASE("generation is a pure function of the dataset parameters") {
    const DatasetSpec s = small_spec();
    const Dataset a = generate_dataset(s, 1), b = generate_dataset(s, 3);
    CHECK(same_samples(a.samples, b.samples));
    DatasetSpec other = s;
    other.seed = 78;
    CHECK(!same_samples(a.samples, generate_dataset(other).samples));

    const KeyValues ma = write_dataset(scratch("pure_a.risd"), a);
    const KeyValues mb = write_dataset(scratch("pure_b.risd"), b);
    for (const auto& [k, val] : ma)
        if (k.rfind("checksum.", 0) == 0) CHECK(mb.at(k) == val);
}

TEST_CASE("pilot noise is unit variance around the stored truth") {
    DatasetSpec s = default_train_spec(8, 3);
    s.snrs_db = {-20.0, 0.0, 10.0};
    s.samples_per_snr = 400;
    for (auto scaling : {FeatureScaling::raw, FeatureScaling::snr_normalized}) {
        s.scaling = scaling;
        const Dataset d = generate_dataset(s);
        double acc = 0.0;
        std::size_t n = 0;
        for (const auto& smp : d.samples) {
            const ComplexVec r = received_signal(smp, scaling);
            const Complex c = cascaded_gain(smp.truth.h, smp.truth.g);
            const double k = std::sqrt(db_to_lin(smp.snr_db));
            const auto pilot = smp.graph.edges.edge(0, 1);
            for (std::size_t m = 0; m < r.size(); ++m, ++n) acc += std::norm(r[m] - k * c * pilot[m]);
            const Matrix y = encode_label(smp.truth.h, smp.truth.g);
            CHECK(y == smp.y);
        }
        CHECK(std::abs(acc / static_cast<double>(n) - 1.0) < 0.03);
    }
}

TEST_CASE("dataset files round trip") {
    const DatasetSpec s = small_spec();
    const Dataset d = generate_dataset(s);
    const fs::path p = scratch("round.risd");
    const KeyValues manifest = write_dataset(p, d);
    CHECK(fs::exists(manifest_path(p)));
    CHECK(manifest.at("samples") == std::to_string(d.samples.size()));

    const Dataset back = read_dataset(p);
    CHECK(same_samples(back.samples, d.samples));
    CHECK(spec_to_kv(back.spec) == spec_to_kv(s));
    CHECK(spec_to_kv(spec_from_kv(manifest)) == spec_to_kv(s));
}

TEST_CASE("corrupted or truncated dataset files are rejected") {
    const Dataset d = generate_dataset(small_spec());
    const fs::path p = scratch("corrupt.risd");
    write_dataset(p, d);
    std::string bytes;
    {
        std::ifstream is(p, std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(is), {});
    }
    {
        std::string bad = bytes;
        bad[bad.size() / 2] = static_cast<char>(bad[bad.size() / 2] ^ 0x01);
        std::ofstream(p, std::ios::binary | std::ios::trunc) << bad;
        CHECK_THROWS_AS(read_dataset(p), FormatError);
    }
    {
        std::ofstream(p, std::ios::binary | std::ios::trunc) << bytes.substr(0, bytes.size() - 9);
        CHECK_THROWS_AS(read_dataset(p), FormatError);
    }
    {
        std::ofstream(p, std::ios::binary | std::ios::trunc) << bytes;
        KeyValues m = read_kv_file(manifest_path(p));
        m["format_version"] = "9";
        std::ofstream(manifest_path(p), std::ios::trunc) << format_kv(m);
        CHECK_THROWS_AS(read_dataset(p), FormatError);
    }
    fs::remove(manifest_path(p));
    CHECK_THROWS(read_dataset(p));
}

TEST_CASE("dataset parameters survive the key-value echo") {
    DatasetSpec s = small_spec();
    s.channel.h.k_factor = 3.5;
    s.channel.g.los_phase = kPi / 2;
    s.channel.phase_model = PhaseModel::uniform;
    s.channel.unit_amplitude = true;
    s.scaling = FeatureScaling::raw;
    s.doppler_hz = 15e3;
    s.doppler_phase = DopplerPhase::random;
    const KeyValues kv = spec_to_kv(s, "p.");
    CHECK(spec_to_kv(spec_from_kv(kv, "p.")) == spec_to_kv(s));
    CHECK(spec_to_kv(spec_from_kv({}, "p.", s)) == spec_to_kv(s));
}

TEST_CASE("CRC-32 reference value") {
    CHECK(crc32_of("123456789") == 0xCBF43926u);
    CHECK(hex32(0xCBF43926u) == "cbf43926");
}
