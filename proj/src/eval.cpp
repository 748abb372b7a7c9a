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

#include "risgat/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "risgat/errors.hpp"
#include "risgat/kv.hpp"
#include "risgat/parallel.hpp"

namespace risgat {

EstimatorOutput gat_estimate(const gat::GatModel& model, const GraphInput& graph) {
    const Matrix y = model.forward(graph);
    ChannelRealization c = decode_label(y.data(), model.n_ris());
    EstimatorOutput out{std::move(c.h), std::move(c.g), Complex{}};
    out.c_hat = cascaded_gain(out.h_hat, out.g_hat);
    return out;
}

EstimatorOutput gat_estimate(const gat::GatModel& model, const GraphSample& sample) {
    if (sample.y.size() != model.output_size())
        throw DimensionError("gat_estimate: sample has " + std::to_string(sample.y.size()) +
                             " label entries, model head has " + std::to_string(model.output_size()));
    return gat_estimate(model, sample.graph);
}

Complex ls_estimate_cascaded(const ComplexVec& r, const PilotSequence& s, double snr_lin) {
    if (r.size() != s.size())
        throw DimensionError("ls_estimate_cascaded: " + std::to_string(r.size()) + " observations for a pilot of " +
                             std::to_string(s.size()));
    if (!(snr_lin > 0.0)) throw std::invalid_argument("ls_estimate_cascaded: SNR must be positive");
    Complex num = 0.0;
    double energy = 0.0;
    for (std::size_t m = 0; m < r.size(); ++m) {
        num += s.symbols[m] * r[m];
        energy += s.symbols[m] * s.symbols[m];
    }
    if (energy == 0.0) throw std::invalid_argument("ls_estimate_cascaded: zero pilot energy");
    return num / (std::sqrt(snr_lin) * energy);
}

NmseResult nmse(const std::vector<std::vector<double>>& estimates, const std::vector<std::vector<double>>& truths) {
    if (estimates.size() != truths.size() || estimates.empty())
        throw DimensionError("nmse: need matching, non-empty sample lists");
    NmseResult r;
    for (std::size_t k = 0; k < truths.size(); ++k) {
        if (estimates[k].size() != truths[k].size()) throw DimensionError("nmse: sample length mismatch");
        double err = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < truths[k].size(); ++i) {
            const double d = estimates[k][i] - truths[k][i];
            err += d * d;
            ref += truths[k][i] * truths[k][i];
        }
        if (ref == 0.0) {
            ++r.excluded;
            continue;
        }
        r.value += err / ref;
        ++r.used;
    }
    if (r.used > 0) r.value /= static_cast<double>(r.used);
    return r;
}

NmseResult nmse(const std::vector<Complex>& estimates, const std::vector<Complex>& truths) {
    if (estimates.size() != truths.size() || estimates.empty())
        throw DimensionError("nmse: need matching, non-empty sample lists");
    NmseResult r;
    for (std::size_t k = 0; k < truths.size(); ++k) {
        const double ref = std::norm(truths[k]);
        if (ref == 0.0) {
            ++r.excluded;
            continue;
        }
        r.value += std::norm(estimates[k] - truths[k]) / ref;
        ++r.used;
    }
    if (r.used > 0) r.value /= static_cast<double>(r.used);
    return r;
}

// ---- phase sets -------------------------------------------------------------

const char* to_string(PhaseSetId id) {
    switch (id) {
    case PhaseSetId::set1: return "set1";
    case PhaseSetId::set2: return "set2";
    case PhaseSetId::set3: return "set3";
    case PhaseSetId::continuous: return "continuous";
    }
    return "?";
}

PhaseSetId phase_set_from_string(const std::string& s) {
    if (s == "set1") return PhaseSetId::set1;
    if (s == "set2") return PhaseSetId::set2;
    if (s == "set3") return PhaseSetId::set3;
    if (s == "continuous") return PhaseSetId::continuous;
    throw std::invalid_argument("unknown phase set '" + s + "' (expected set1|set2|set3|continuous)");
}

std::string PhaseSet::tag() const {
    if (id == PhaseSetId::continuous) return "continuous";
    return std::string(to_string(id)) + "-" + std::to_string(n_bit) + "bit";
}

PhaseSet make_phase_set(PhaseSetId id, unsigned n_bit) {
    PhaseSet s{id, n_bit, {}};
    if (id == PhaseSetId::continuous) return s;
    if (n_bit < 1 || n_bit > 16) throw std::invalid_argument("make_phase_set: n_bit must be in [1, 16]");
    const std::size_t levels = std::size_t{1} << n_bit;
    const double half_step = kPi / static_cast<double>(levels);
    switch (id) {
    case PhaseSetId::set1:
        for (std::size_t k = 0; k < levels; ++k) s.values.push_back(-kPi + 2.0 * half_step * static_cast<double>(k));
        break;
    case PhaseSetId::set2:
        for (std::size_t k = 0; k <= levels; ++k) {
            const double v = kPi / 2.0 + half_step * static_cast<double>(k);
            if (k == levels / 2) continue;  // +-pi lies outside [-pi, pi) on this side
            s.values.push_back(wrap_phase(v));
        }
        break;
    case PhaseSetId::set3:
        for (std::size_t k = 0; k <= levels; ++k) s.values.push_back(-kPi / 2.0 + half_step * static_cast<double>(k));
        break;
    case PhaseSetId::continuous: break;
    }
    std::sort(s.values.begin(), s.values.end());
    return s;
}

double quantize_phase(double phi, const PhaseSet& set) {
    if (set.id == PhaseSetId::continuous) return phi;
    if (set.values.empty()) throw std::invalid_argument("quantize_phase: empty phase set");
    std::size_t best = 0;
    double best_d = std::abs(wrap_phase(set.values[0] - phi));
    for (std::size_t k = 1; k < set.values.size(); ++k) {
        const double d = std::abs(wrap_phase(set.values[k] - phi));
        if (d < best_d - 1e-12) {
            best_d = d;
            best = k;
        }
    }
    return set.values[best];
}

double quantization_efficiency(const PhaseSet& set, std::size_t draws, std::uint64_t seed) {
    if (draws == 0) throw std::invalid_argument("quantization_efficiency: draws must be positive");
    Rng rng(seed);
    double acc = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double phi = rng.uniform(-kPi, kPi);
        acc += std::cos(quantize_phase(phi, set) - phi);
    }
    return acc / static_cast<double>(draws);
}

// ---- NMSE experiment ----------------------------------------------------------

namespace {

PilotSequence pilot_of(const GraphSample& s) {
    auto e = s.graph.edges.edge(0, 1);
    PilotSequence p;
    p.symbols.assign(e.begin(), e.end());
    for (double v : p.symbols) p.bits.push_back(v >= 0.0 ? 0 : 1);
    return p;
}

struct SampleScores {
    double y = 0.0, c_gat = 0.0, c_ls = 0.0;
    bool y_ok = false, c_ok = false;
};

} // namespace

NmseReport run_nmse_experiment(const gat::GatModel& model, const std::vector<GraphSample>& test_set,
                               FeatureScaling scaling, std::size_t workers) {
    if (test_set.empty()) throw std::invalid_argument("run_nmse_experiment: empty test set");
    std::vector<SampleScores> scores(test_set.size());
    parallel_for(test_set.size(), workers, [&](std::size_t k) {
        const GraphSample& s = test_set[k];
        const EstimatorOutput est = gat_estimate(model, s);
        const Matrix y_hat = encode_label(est.h_hat, est.g_hat);
        double err = 0.0;
        const double ref = s.y.squared_norm();
        for (std::size_t i = 0; i < s.y.size(); ++i) err += (y_hat[i] - s.y[i]) * (y_hat[i] - s.y[i]);
        SampleScores& sc = scores[k];
        if (ref > 0.0) {
            sc.y = err / ref;
            sc.y_ok = true;
        }
        const Complex c = cascaded_gain(s.truth.h, s.truth.g);
        const double cref = std::norm(c);
        if (cref > 0.0) {
            const Complex c_ls = ls_estimate_cascaded(received_signal(s, scaling), pilot_of(s), db_to_lin(s.snr_db));
            sc.c_gat = std::norm(est.c_hat - c) / cref;
            sc.c_ls = std::norm(c_ls - c) / cref;
            sc.c_ok = true;
        }
    });

    struct Acc {
        double y = 0, cg = 0, cl = 0;
        std::size_t ny = 0, nc = 0, count = 0;
    };
    std::map<double, Acc> by_snr;
    Acc all;
    for (std::size_t k = 0; k < test_set.size(); ++k) {
        for (Acc* a : {&by_snr[test_set[k].snr_db], &all}) {
            const SampleScores& sc = scores[k];
            ++a->count;
            if (sc.y_ok) a->y += sc.y, ++a->ny;
            if (sc.c_ok) a->cg += sc.c_gat, a->cl += sc.c_ls, ++a->nc;
        }
    }
    auto row = [](double snr, const Acc& a) {
        NmseRow r;
        r.snr_db = snr;
        r.count = a.count;
        r.nmse_y_gat = a.ny ? a.y / static_cast<double>(a.ny) : 0.0;
        r.nmse_c_gat = a.nc ? a.cg / static_cast<double>(a.nc) : 0.0;
        r.nmse_c_ls = a.nc ? a.cl / static_cast<double>(a.nc) : 0.0;
        return r;
    };
    NmseReport rep;
    for (const auto& [snr, a] : by_snr) rep.rows.push_back(row(snr, a));
    rep.overall = row(0.0, all);
    return rep;
}

// ---- BER experiment ---------------------------------------------------------

std::string estimator_tag(const BerConfig& cfg) {
    std::string t = cfg.csi == CsiMode::perfect ? "perfect" : "gat";
    if (cfg.phase_set.id != PhaseSetId::continuous) t += "+quantized(" + cfg.phase_set.tag() + ")";
    return t;
}

namespace {

struct FrameResult {
    std::uint64_t errors = 0;
};

FrameResult simulate_frame(const BerConfig& cfg, const gat::GatModel* model, const PilotSequence& pilot,
                           double snr_db, std::size_t snr_index, std::uint64_t frame) {
    Rng rng = Rng::substream(cfg.seed, (static_cast<std::uint64_t>(snr_index) << 40) | frame);
    const double snr = db_to_lin(snr_db);
    const ChannelRealization ch = draw_channel(cfg.n_ris, cfg.channel, rng);

    PhaseShiftMatrix phi;
    if (cfg.csi == CsiMode::perfect) {
        phi = ris_phases_from_estimates(ch.h, ch.g);
    } else {
        const ComplexVec r = synthesize_pilot_rx(pilot, ch.h, ch.g, snr, rng);
        const GraphSample s = encode_sample(r, pilot, ch.h, ch.g, snr_db, cfg.scaling);
        const EstimatorOutput est = gat_estimate(*model, s);
        phi = ris_phases_from_estimates(est.h_hat, est.g_hat);
    }
    for (double& p : phi.phi) p = quantize_phase(p, cfg.phase_set);
    const Complex gain = cascaded_gain(ch.h, ch.g, phi);

    Bits bits(cfg.message_len);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    const std::vector<double> x = bpsk_mod(bits);
    const ComplexVec r = transmit(x, gain, snr, rng);
    // a vanishing gain leaves the detector guessing
    const Bits decided = bpsk_demod_coherent(r, gain == 0.0 ? Complex(1.0) : gain);
    FrameResult fr;
    for (std::size_t m = 0; m < bits.size(); ++m) fr.errors += bits[m] != decided[m];
    return fr;
}

} // namespace

BerReport run_ber_experiment(const BerConfig& cfg, const gat::GatModel* model, std::size_t workers) {
    if (cfg.n_ris == 0 || cfg.message_len == 0 || cfg.frames_per_block == 0 || cfg.max_bits == 0)
        throw std::invalid_argument("run_ber_experiment: sizes must be positive");
    if (cfg.csi == CsiMode::gat) {
        if (!model) throw std::invalid_argument("run_ber_experiment: GAT CSI needs a model");
        if (model->n_ris() != cfg.n_ris || model->m_p() != cfg.m_p)
            throw DimensionError("run_ber_experiment: model is for N=" + std::to_string(model->n_ris()) +
                                 ", M_p=" + std::to_string(model->m_p()) + " but the experiment uses N=" +
                                 std::to_string(cfg.n_ris));
    }
    const PilotSequence pilot = make_pilot(LfsrConfig{0b10101, cfg.lfsr_seed}, cfg.m_p);
    const std::uint64_t max_frames = std::max<std::uint64_t>(1, cfg.max_bits / cfg.message_len);

    BerReport rep;
    rep.tag = estimator_tag(cfg);
    for (std::size_t si = 0; si < cfg.snrs_db.size(); ++si) {
        BerPoint pt;
        pt.snr_db = cfg.snrs_db[si];
        while (pt.errors < cfg.min_errors && pt.frames < max_frames) {
            const std::uint64_t n = std::min<std::uint64_t>(cfg.frames_per_block, max_frames - pt.frames);
            std::vector<FrameResult> block(n);
            const std::uint64_t base = pt.frames;
            parallel_for(n, workers, [&](std::size_t j) {
                block[j] = simulate_frame(cfg, model, pilot, pt.snr_db, si, base + j);
            });
            for (const auto& fr : block) pt.errors += fr.errors;
            pt.frames += n;
            pt.bits += n * cfg.message_len;
        }
        pt.ber = static_cast<double>(pt.errors) / static_cast<double>(pt.bits);
        pt.sigma = std::sqrt(pt.ber * (1.0 - pt.ber) / static_cast<double>(pt.bits));
        rep.points.push_back(pt);
    }
    return rep;
}

BandReport confidence_band(const std::function<gat::GatModel(std::size_t)>& train_fn, std::size_t r,
                           const BerConfig& cfg, std::size_t workers) {
    if (r == 0) throw std::invalid_argument("confidence_band: need at least one model");
    BandReport out;
    for (std::size_t i = 0; i < r; ++i) {
        const gat::GatModel model = train_fn(i);
        out.runs.push_back(run_ber_experiment(cfg, &model, workers));
    }
    for (std::size_t p = 0; p < cfg.snrs_db.size(); ++p) {
        BandPoint b{cfg.snrs_db[p], out.runs[0].points[p].ber, 0.0, out.runs[0].points[p].ber};
        for (const auto& run : out.runs) {
            b.min = std::min(b.min, run.points[p].ber);
            b.max = std::max(b.max, run.points[p].ber);
            b.mean += run.points[p].ber;
        }
        b.mean /= static_cast<double>(r);
        out.band.push_back(b);
    }
    return out;
}

// ---- Doppler and histograms ---------------------------------------------------

std::vector<DopplerRow> doppler_sweep(const gat::GatModel& model, const DatasetSpec& test_spec,
                                      const std::vector<double>& f_d_list, std::size_t workers) {
    if (f_d_list.empty() || f_d_list.front() != 0.0)
        throw std::invalid_argument("doppler_sweep: the list must start with f_d = 0");
    std::vector<DopplerRow> rows;
    for (double f_d : f_d_list) {
        DatasetSpec spec = test_spec;
        spec.doppler_hz = f_d;
        const Dataset d = generate_dataset(spec, workers);
        DopplerRow row{f_d, run_nmse_experiment(model, d.samples, spec.scaling, workers), 1.0};
        if (!rows.empty()) row.degradation = row.report.overall.nmse_c_gat / rows.front().report.overall.nmse_c_gat;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::uint64_t Histogram::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

Histogram phase_histogram(const std::vector<double>& phases, std::size_t bins) {
    if (bins < 8) throw std::invalid_argument("phase_histogram: need at least 8 bins");
    Histogram h;
    const double w = 2.0 * kPi / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(-kPi + w * static_cast<double>(b));
    h.counts.assign(bins, 0);
    for (double p : phases) {
        const double x = wrap_phase(p);
        auto b = static_cast<std::size_t>(std::floor((x + kPi) / w));
        h.counts[std::min(b, bins - 1)]++;
    }
    return h;
}

std::vector<double> cascaded_phases(const std::vector<ChannelRealization>& channels) {
    std::vector<double> out;
    for (const auto& c : channels) {
        if (c.h.size() != c.g.size()) throw DimensionError("cascaded_phases: h/g length mismatch");
        for (std::size_t i = 0; i < c.h.size(); ++i) out.push_back(wrap_phase(std::arg(c.h[i] * c.g[i])));
    }
    return out;
}

double total_variation(const Histogram& a, const Histogram& b) {
    if (a.counts.size() != b.counts.size()) throw DimensionError("total_variation: bin counts differ");
    const double ta = static_cast<double>(a.total()), tb = static_cast<double>(b.total());
    if (ta == 0.0 || tb == 0.0) throw std::invalid_argument("total_variation: empty histogram");
    double tv = 0.0;
    for (std::size_t i = 0; i < a.counts.size(); ++i)
        tv += std::abs(static_cast<double>(a.counts[i]) / ta - static_cast<double>(b.counts[i]) / tb);
    return 0.5 * tv;
}

// ---- CSV ----------------------------------------------------------------------

std::string csv_header(const Provenance& p, const std::vector<std::string>& extra) {
    std::string out = "# manifest=" + p.manifest_hash + " estimator=" + p.estimator + " seed=" + std::to_string(p.seed) + "\n";
    for (const auto& e : extra) out += "# " + e + "\n";
    return out;
}

std::string nmse_csv(const NmseReport& r, const Provenance& p) {
    std::ostringstream os;
    os << csv_header(p) << "snr_db,count,nmse_y_gat,nmse_c_gat,nmse_c_ls\n";
    for (const auto& row : r.rows)
        os << format_double(row.snr_db) << ',' << row.count << ',' << format_double(row.nmse_y_gat) << ','
           << format_double(row.nmse_c_gat) << ',' << format_double(row.nmse_c_ls) << '\n';
    return os.str();
}

std::string doppler_csv(const std::vector<DopplerRow>& rows, const Provenance& p) {
    std::ostringstream os;
    os << csv_header(p) << "f_d_hz,snr_db,count,nmse_y_gat,nmse_c_gat,nmse_c_ls,degradation\n";
    for (const auto& d : rows) {
        for (const auto& row : d.report.rows)
            os << format_double(d.f_d) << ',' << format_double(row.snr_db) << ',' << row.count << ','
               << format_double(row.nmse_y_gat) << ',' << format_double(row.nmse_c_gat) << ','
               << format_double(row.nmse_c_ls) << ",\n";
        const auto& o = d.report.overall;
        os << format_double(d.f_d) << ",all," << o.count << ',' << format_double(o.nmse_y_gat) << ','
           << format_double(o.nmse_c_gat) << ',' << format_double(o.nmse_c_ls) << ','
           << format_double(d.degradation) << '\n';
    }
    return os.str();
}

std::string ber_csv(const std::vector<BerReport>& reports, const Provenance& p, const std::vector<std::string>& extra) {
    std::ostringstream os;
    os << csv_header(p, extra) << "estimator,snr_db,errors,bits,frames,ber,sigma\n";
    for (const auto& r : reports)
        for (const auto& pt : r.points)
            os << r.tag << ',' << format_double(pt.snr_db) << ',' << pt.errors << ',' << pt.bits << ',' << pt.frames
               << ',' << format_double(pt.ber) << ',' << format_double(pt.sigma) << '\n';
    return os.str();
}

std::string band_csv(const BandReport& r, const Provenance& p) {
    std::ostringstream os;
    os << csv_header(p, {"runs=" + std::to_string(r.runs.size())}) << "snr_db,ber_min,ber_mean,ber_max";
    for (std::size_t i = 0; i < r.runs.size(); ++i) os << ",ber_run" << i;
    os << '\n';
    for (std::size_t k = 0; k < r.band.size(); ++k) {
        const auto& b = r.band[k];
        os << format_double(b.snr_db) << ',' << format_double(b.min) << ',' << format_double(b.mean) << ','
           << format_double(b.max);
        for (const auto& run : r.runs) os << ',' << format_double(run.points[k].ber);
        os << '\n';
    }
    return os.str();
}

std::string histogram_csv(const Histogram& truth, const Histogram& estimate, const Provenance& p) {
    std::ostringstream os;
    os << csv_header(p, {"total_variation=" + format_double(total_variation(truth, estimate))})
       << "bin_lo,bin_hi,count_truth,count_estimate\n";
    for (std::size_t b = 0; b < truth.counts.size(); ++b)
        os << format_double(truth.edges[b]) << ',' << format_double(truth.edges[b + 1]) << ',' << truth.counts[b]
           << ',' << estimate.counts[b] << '\n';
    return os.str();
}

} // namespace risgat
