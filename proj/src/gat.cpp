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

#include "risgat/gat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "risgat/binio.hpp"
#include "risgat/errors.hpp"

namespace risgat::gat {

const char* to_string(EdgeMode m) { return m == EdgeMode::concat ? "concat" : "ignored"; }

EdgeMode edge_mode_from_string(const std::string& s) {
    if (s == "concat") return EdgeMode::concat;
    if (s == "ignored") return EdgeMode::ignored;
    throw std::invalid_argument("unknown edge mode '" + s + "' (expected concat|ignored)");
}

GalParams::GalParams(const std::string& prefix, std::size_t in_features, std::size_t edge_features,
                     std::size_t out_features)
    : W(prefix + ".W", in_features + edge_features, out_features, true),
      a(prefix + ".a", 2 * out_features, 1, true),
      b(prefix + ".b", 1, out_features, false),
      in_features_(in_features),
      edge_features_(edge_features) {
    if (in_features == 0 || out_features == 0) throw DimensionError("graph attention layer needs F, F' > 0");
}

PoolParams::PoolParams(std::size_t in_features, std::size_t out_features)
    : W1("pool.W1", in_features, out_features, true),
      b1("pool.b1", 1, out_features, false),
      W2("pool.W2", in_features, out_features, true),
      b2("pool.b2", 1, out_features, false) {}

Matrix neighbourhood_mask(const Matrix& adjacency) {
    if (adjacency.rows() != adjacency.cols())
        throw DimensionError("adjacency must be square, got " + adjacency.shape_str());
    Matrix mask(adjacency.rows(), adjacency.cols());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = adjacency[i] != 0.0 ? 1.0 : 0.0;
    for (std::size_t i = 0; i < mask.rows(); ++i) mask(i, i) = 1.0;
    return mask;
}

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
}

// Pre-ReLU attention scores over the mask; entries outside it stay 0.
Matrix attention_logits(const Matrix& messages, std::size_t nodes, const Matrix& a, const Matrix& mask) {
    const std::size_t f = messages.cols();
    std::span<const double> a_self(a.data().data(), f);
    std::span<const double> a_nbr(a.data().data() + f, f);
    Matrix logits(nodes, nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double self_score = dot(a_self, messages.row(i * nodes + i));
        for (std::size_t j = 0; j < nodes; ++j) {
            if (mask(i, j) == 0.0) continue;
            logits(i, j) = self_score + dot(a_nbr, messages.row(i * nodes + j));
        }
    }
    return logits;
}

} // namespace

Matrix attention_coefficients(const Matrix& xw, const Param& a, const Matrix& mask) {
    const std::size_t p = xw.rows();
    if (mask.rows() != p || mask.cols() != p)
        throw DimensionError("attention_coefficients: mask " + mask.shape_str() + " for " + std::to_string(p) + " nodes");
    if (a.value.size() != 2 * xw.cols())
        throw DimensionError("attention_coefficients: kernel " + a.value.shape_str() + " for F'=" +
                             std::to_string(xw.cols()));
    Matrix messages(p * p, xw.cols());
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) std::ranges::copy(xw.row(j), messages.row(i * p + j).begin());
    return nn::softmax_rows(nn::relu(attention_logits(messages, p, a.value, mask)), mask);
}

Matrix gal_forward(const Matrix& x, const Matrix& adjacency, const EdgeTensor& edges, const GalParams& p,
                   GalCache* cache) {
    const std::size_t nodes = x.rows();
    const std::size_t f_in = p.in_features();
    const std::size_t s = p.edge_features();
    const std::size_t f_out = p.out_features();
    if (x.cols() != f_in)
        throw DimensionError("gal_forward: input " + x.shape_str() + " but layer expects " + std::to_string(f_in) +
                             " features");
    if (adjacency.rows() != nodes || adjacency.cols() != nodes)
        throw DimensionError("gal_forward: adjacency " + adjacency.shape_str() + " for " + std::to_string(nodes) +
                             " nodes");
    if (s > 0 && (edges.nodes() != nodes || edges.features() != s))
        throw DimensionError("gal_forward: edge tensor does not match " + std::to_string(nodes) + " nodes x " +
                             std::to_string(s) + " features");

    const Matrix mask = neighbourhood_mask(adjacency);
    const Matrix& w = p.W.value;

    Matrix xw(nodes, f_out);
    for (std::size_t i = 0; i < nodes; ++i) {
        auto out = xw.row(i);
        for (std::size_t k = 0; k < f_in; ++k) {
            const double v = x(i, k);
            if (v == 0.0) continue;
            auto wr = w.row(k);
            for (std::size_t j = 0; j < f_out; ++j) out[j] += v * wr[j];
        }
    }

    Matrix messages(nodes * nodes, f_out);
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = 0; j < nodes; ++j) {
            auto m = messages.row(i * nodes + j);
            std::ranges::copy(xw.row(j), m.begin());
            if (s == 0) continue;
            auto e = edges.edge(i, j);
            for (std::size_t k = 0; k < s; ++k) {
                if (e[k] == 0.0) continue;
                auto wr = w.row(f_in + k);
                for (std::size_t c = 0; c < f_out; ++c) m[c] += e[k] * wr[c];
            }
        }
    }

    Matrix logits = attention_logits(messages, nodes, p.a.value, mask);
    Matrix alpha = nn::softmax_rows(nn::relu(logits), mask);

    Matrix z(nodes, f_out);
    for (std::size_t i = 0; i < nodes; ++i) {
        auto zr = z.row(i);
        for (std::size_t j = 0; j < nodes; ++j) {
            const double aij = alpha(i, j);
            if (aij == 0.0) continue;
            auto m = messages.row(i * nodes + j);
            for (std::size_t c = 0; c < f_out; ++c) zr[c] += aij * m[c];
        }
        for (std::size_t c = 0; c < f_out; ++c) zr[c] += p.b.value[c];
    }
    Matrix out = nn::relu(z);

    if (cache) {
        cache->x = x;
        if (s > 0) cache->edges = edges;
        cache->xw = std::move(xw);
        cache->messages = std::move(messages);
        cache->logits = std::move(logits);
        cache->alpha = std::move(alpha);
        cache->z = std::move(z);
    }
    return out;
}

Matrix gal_backward(const GalCache& cache, GalParams& p, const Matrix& grad_out) {
    const std::size_t nodes = cache.x.rows();
    const std::size_t f_in = p.in_features();
    const std::size_t s = p.edge_features();
    const std::size_t f_out = p.out_features();
    require_same_shape(cache.z, grad_out, "gal_backward");

    const Matrix dz = nn::relu_backward(cache.z, grad_out);
    for (std::size_t i = 0; i < nodes; ++i)
        for (std::size_t c = 0; c < f_out; ++c) p.b.grad[c] += dz(i, c);

    Matrix dmessages(nodes * nodes, f_out);
    Matrix dalpha(nodes, nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = 0; j < nodes; ++j) {
            const double aij = cache.alpha(i, j);
            auto m = cache.messages.row(i * nodes + j);
            dalpha(i, j) = dot(dz.row(i), m);
            if (aij == 0.0) continue;
            auto dm = dmessages.row(i * nodes + j);
            for (std::size_t c = 0; c < f_out; ++c) dm[c] += aij * dz(i, c);
        }
    }

    const Matrix de = nn::softmax_rows_backward(cache.alpha, dalpha);
    const Matrix& a = p.a.value;
    for (std::size_t i = 0; i < nodes; ++i) {
        auto m_self = cache.messages.row(i * nodes + i);
        for (std::size_t j = 0; j < nodes; ++j) {
            if (cache.alpha(i, j) == 0.0 && de(i, j) == 0.0) continue;
            const double dl = de(i, j) * nn::relu_derivative(cache.logits(i, j));
            if (dl == 0.0) continue;
            auto m = cache.messages.row(i * nodes + j);
            auto dm_self = dmessages.row(i * nodes + i);
            for (std::size_t c = 0; c < f_out; ++c) {
                p.a.grad[c] += dl * m_self[c];
                p.a.grad[f_out + c] += dl * m[c];
                dm_self[c] += dl * a[c];
            }
            auto dm = dmessages.row(i * nodes + j);
            for (std::size_t c = 0; c < f_out; ++c) dm[c] += dl * a[f_out + c];
        }
    }

    // messages(i,j) = xw_j + E_ij W_e
    Matrix dxw(nodes, f_out);
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = 0; j < nodes; ++j) {
            auto dm = dmessages.row(i * nodes + j);
            auto dst = dxw.row(j);
            for (std::size_t c = 0; c < f_out; ++c) dst[c] += dm[c];
        }
    }

    Matrix& wg = p.W.grad;
    const Matrix& w = p.W.value;
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t k = 0; k < f_in; ++k) {
            const double v = cache.x(i, k);
            if (v == 0.0) continue;
            auto gr = wg.row(k);
            for (std::size_t c = 0; c < f_out; ++c) gr[c] += v * dxw(i, c);
        }
    }
    for (std::size_t i = 0; i < nodes && s > 0; ++i) {
        for (std::size_t j = 0; j < nodes; ++j) {
            auto e = cache.edges.edge(i, j);
            auto dm = dmessages.row(i * nodes + j);
            for (std::size_t k = 0; k < s; ++k) {
                if (e[k] == 0.0) continue;
                auto gr = wg.row(f_in + k);
                for (std::size_t c = 0; c < f_out; ++c) gr[c] += e[k] * dm[c];
            }
        }
    }

    Matrix dx(nodes, f_in);
    for (std::size_t i = 0; i < nodes; ++i) {
        auto dxr = dx.row(i);
        for (std::size_t k = 0; k < f_in; ++k) dxr[k] = dot(dxw.row(i), w.row(k));
    }
    return dx;
}

Matrix global_attention_pool(const Matrix& x, const PoolParams& p, PoolCache* cache) {
    if (x.cols() != p.W1.value.rows())
        throw DimensionError("global_attention_pool: input " + x.shape_str() + " vs W1 " + p.W1.value.shape_str());
    Matrix gate = nn::sigmoid(nn::dense_forward(x, p.W1, p.b1));
    Matrix value = nn::dense_forward(x, p.W2, p.b2);
    Matrix out(1, gate.cols());
    for (std::size_t i = 0; i < gate.rows(); ++i)
        for (std::size_t c = 0; c < gate.cols(); ++c) out[c] += gate(i, c) * value(i, c);
    if (cache) {
        cache->x = x;
        cache->gate = std::move(gate);
        cache->value = std::move(value);
    }
    return out;
}

Matrix pool_backward(const PoolCache& cache, PoolParams& p, const Matrix& grad_out) {
    const std::size_t nodes = cache.gate.rows();
    const std::size_t f = cache.gate.cols();
    if (grad_out.rows() != 1 || grad_out.cols() != f)
        throw DimensionError("pool_backward: gradient " + grad_out.shape_str());
    Matrix dgate(nodes, f), dvalue(nodes, f);
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t c = 0; c < f; ++c) {
            dgate(i, c) = grad_out[c] * cache.value(i, c);
            dvalue(i, c) = grad_out[c] * cache.gate(i, c);
        }
    }
    Matrix dx = nn::dense_backward(cache.x, p.W1, p.b1, nn::sigmoid_backward(cache.gate, dgate));
    dx += nn::dense_backward(cache.x, p.W2, p.b2, dvalue);
    return dx;
}

GatModel::GatModel(const ModelShape& shape, std::uint64_t init_seed) : shape_(shape) {
    if (shape.n_ris == 0 || shape.m_p == 0) throw DimensionError("model needs N > 0 and M_p > 0");
    const std::size_t s = shape.edge_mode == EdgeMode::concat ? shape.m_p : 0;
    gal1 = GalParams("gal1", shape.m_p, s, shape.hidden1);
    gal2 = GalParams("gal2", shape.hidden1, s, shape.hidden2);
    pool = PoolParams(shape.hidden2, shape.pooled);
    head_W = Param("head.W", shape.pooled, 4 * shape.n_ris, true);
    head_b = Param("head.b", 1, 4 * shape.n_ris, false);

    Rng rng(init_seed);
    for (Param* p : params()) {
        if (!p->is_weight) continue;
        nn::glorot_uniform(p->value, p->value.rows(), p->value.cols(), rng);
    }
}

std::vector<Param*> GatModel::params() {
    return {&gal1.W, &gal1.a, &gal1.b, &gal2.W, &gal2.a, &gal2.b,
            &pool.W1, &pool.b1, &pool.W2, &pool.b2, &head_W, &head_b};
}

std::vector<const Param*> GatModel::params() const {
    return {&gal1.W, &gal1.a, &gal1.b, &gal2.W, &gal2.a, &gal2.b,
            &pool.W1, &pool.b1, &pool.W2, &pool.b2, &head_W, &head_b};
}

void GatModel::zero_grad() {
    for (Param* p : params()) p->zero_grad();
}

namespace {

void check_input(const GatModel& m, const GraphInput& in) {
    if (in.x.cols() != m.m_p())
        throw DimensionError("model expects node features of width " + std::to_string(m.m_p()) + ", got " +
                             in.x.shape_str());
}

} // namespace

Matrix GatModel::forward(const GraphInput& in) const {
    check_input(*this, in);
    Matrix h1 = gal_forward(in.x, in.adjacency, in.edges, gal1);
    Matrix h2 = gal_forward(h1, in.adjacency, in.edges, gal2);
    return nn::dense_forward(global_attention_pool(h2, pool), head_W, head_b);
}

Matrix GatModel::forward(const GraphInput& in, bool training, double dropout_rate, Rng& rng, bool keep_cache) {
    return forward_impl(in, training, dropout_rate, &rng, keep_cache);
}

Matrix GatModel::forward_impl(const GraphInput& in, bool training, double dropout_rate, Rng* rng,
                              bool keep_cache) {
    check_input(*this, in);
    drop1_ = nn::dropout_apply(in.x, dropout_rate, training, *rng);
    Matrix h1 = gal_forward(drop1_.output, in.adjacency, in.edges, gal1, keep_cache ? &c1_ : nullptr);
    drop2_ = nn::dropout_apply(h1, dropout_rate, training, *rng);
    Matrix h2 = gal_forward(drop2_.output, in.adjacency, in.edges, gal2, keep_cache ? &c2_ : nullptr);
    Matrix pooled = global_attention_pool(h2, pool, keep_cache ? &cp_ : nullptr);
    Matrix out = nn::dense_forward(pooled, head_W, head_b);
    if (keep_cache) pooled_ = std::move(pooled);
    cached_ = keep_cache;
    return out;
}

void GatModel::backward(const Matrix& grad_out) {
    if (!cached_) throw std::logic_error("GatModel::backward called without a stored forward pass");
    Matrix g = nn::dense_backward(pooled_, head_W, head_b, grad_out);
    g = pool_backward(cp_, pool, g);
    g = gal_backward(c2_, gal2, g);
    g = nn::dropout_backward(drop2_, g);
    gal_backward(c1_, gal1, g);
    cached_ = false;
}

double loss_and_gradients(GatModel& model, const GraphInput& in, const Matrix& target, double l2,
                          double dropout_rate, bool training, Rng& rng, double loss_scale) {
    Matrix pred = model.forward(in, training, dropout_rate, rng, true);
    if (pred.size() != target.size())
        throw DimensionError("target has " + std::to_string(target.size()) + " entries, model outputs " +
                             std::to_string(pred.size()));
    Matrix t = target;
    if (t.rows() != pred.rows()) t = Matrix::from_row(target.data());
    nn::LossResult loss = nn::mse_loss(pred, t);
    loss.grad *= loss_scale;
    model.backward(loss.grad);
    auto ps = model.params();
    const double penalty = nn::l2_penalty(ps, l2 * loss_scale);
    return loss_scale * loss.value + penalty;
}

namespace {

double l2_value(const GatModel& model, double lambda) {
    double s = 0.0;
    for (const Param* p : model.params())
        if (p->is_weight) s += p->value.squared_norm();
    return lambda * s;
}

void check_set(const GatModel& model, const std::vector<TrainingSample>& set, const char* name) {
    if (set.empty()) throw std::invalid_argument(std::string("fit: ") + name + " set is empty");
    for (const auto& s : set) {
        if (s.input.x.cols() != model.m_p())
            throw DimensionError(std::string("fit: ") + name + " sample has M_p=" + std::to_string(s.input.x.cols()) +
                                 ", model expects " + std::to_string(model.m_p()));
        if (s.target.size() != model.output_size())
            throw DimensionError(std::string("fit: ") + name + " sample label has " +
                                 std::to_string(s.target.size()) + " entries, model head has " +
                                 std::to_string(model.output_size()));
    }
}

} // namespace

double evaluate_loss(const GatModel& model, const std::vector<TrainingSample>& set, double l2) {
    if (set.empty()) throw std::invalid_argument("evaluate_loss: empty set");
    double total = 0.0;
    for (const auto& s : set) {
        Matrix pred = model.forward(s.input);
        total += nn::mse_loss(pred, Matrix::from_row(s.target.data())).value;
    }
    return total / static_cast<double>(set.size()) + l2_value(model, l2);
}

TrainingHistory fit(GatModel& model, const std::vector<TrainingSample>& train, const std::vector<TrainingSample>& val,
                    const TrainConfig& cfg, const std::function<void(const EpochRecord&)>& on_epoch) {
    if (cfg.patience < 1 || cfg.patience > cfg.epochs)
        throw std::invalid_argument("fit: patience must satisfy 1 <= patience <= epochs");
    if (cfg.batch_size == 0) throw std::invalid_argument("fit: batch size must be positive");
    check_set(model, train, "training");
    check_set(model, val, "validation");

    Rng rng = Rng::substream(cfg.seed, 0x7472616e);
    const nn::AdamConfig adam{cfg.lr, 0.9, 0.999, 1e-8};
    auto params = model.params();
    std::vector<nn::AdamState> states;
    states.reserve(params.size());
    for (Param* p : params) states.emplace_back(*p);
    model.zero_grad();

    TrainingHistory history;
    history.best_val_loss = std::numeric_limits<double>::infinity();
    std::vector<Matrix> best_weights;
    std::size_t stale = 0;

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng.engine());
        double epoch_loss = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++batch_index) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            const double scale = 1.0 / static_cast<double>(end - start);
            double batch_loss = 0.0;
            for (std::size_t k = start; k < end; ++k) {
                const TrainingSample& s = train[order[k]];
                batch_loss += loss_and_gradients(model, s.input, s.target, 0.0, cfg.dropout_rate, true, rng, scale);
            }
            batch_loss += nn::l2_penalty(params, cfg.l2);
            if (!std::isfinite(batch_loss)) {
                std::ostringstream os;
                os << "non-finite training loss at epoch " << epoch << ", batch " << batch_index;
                throw NumericalError(os.str());
            }
            for (std::size_t i = 0; i < params.size(); ++i) nn::adam_step(states[i], *params[i], adam);
            epoch_loss += batch_loss * static_cast<double>(end - start);
        }

        EpochRecord rec{epoch, epoch_loss / static_cast<double>(train.size()), evaluate_loss(model, val, cfg.l2)};
        if (!std::isfinite(rec.val_loss)) {
            std::ostringstream os;
            os << "non-finite validation loss at epoch " << epoch;
            throw NumericalError(os.str());
        }
        history.epochs.push_back(rec);
        if (on_epoch) on_epoch(rec);

        if (rec.val_loss < history.best_val_loss) {
            history.best_val_loss = rec.val_loss;
            history.best_epoch = epoch;
            best_weights.clear();
            for (const Param* p : params) best_weights.push_back(p->value);
            stale = 0;
        } else if (++stale >= cfg.patience) {
            history.stopped_early = epoch < cfg.epochs;
            break;
        }
    }

    for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best_weights[i];
    return history;
}

void save_weights(const GatModel& model, std::ostream& os) {
    binio::put_magic(os, "GATW");
    binio::put_u32(os, kWeightFormatVersion);
    binio::put_u32(os, static_cast<std::uint32_t>(model.n_ris()));
    binio::put_u32(os, static_cast<std::uint32_t>(model.m_p()));
    binio::put_u32(os, static_cast<std::uint32_t>(model.edge_mode()));
    for (const Param* p : model.params()) write_matrix(os, p->value);
    if (!os) throw FormatError("failed writing weight stream");
}

void save_weights(const GatModel& model, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    save_weights(model, os);
}

GatModel load_weights(std::istream& is, std::optional<std::size_t> expected_n) {
    binio::expect_magic(is, "GATW");
    const std::uint32_t version = binio::get_u32(is);
    if (version != kWeightFormatVersion)
        throw FormatError("unsupported weight file version " + std::to_string(version));
    ModelShape shape;
    shape.n_ris = binio::get_u32(is);
    shape.m_p = binio::get_u32(is);
    const std::uint32_t mode = binio::get_u32(is);
    if (mode > 1) throw FormatError("bad edge mode flag " + std::to_string(mode));
    shape.edge_mode = static_cast<EdgeMode>(mode);
    if (expected_n && *expected_n != shape.n_ris)
        throw DimensionError("weight file is for N=" + std::to_string(shape.n_ris) + ", expected N=" +
                             std::to_string(*expected_n));

    std::vector<Matrix> mats;
    for (int i = 0; i < 12; ++i) mats.push_back(read_matrix(is));
    shape.hidden1 = mats[0].cols();
    shape.hidden2 = mats[3].cols();
    shape.pooled = mats[6].cols();
    if (shape.hidden1 == 0 || shape.hidden2 == 0 || shape.pooled == 0) throw FormatError("empty layer in weight file");

    GatModel model(shape, 0);
    auto params = model.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i]->value.same_shape(mats[i]))
            throw DimensionError("weight file matrix " + params[i]->name + " has shape " + mats[i].shape_str() +
                                 ", expected " + params[i]->value.shape_str());
        params[i]->value = std::move(mats[i]);
    }
    return model;
}

GatModel load_weights(const std::filesystem::path& path, std::optional<std::size_t> expected_n) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open weight file " + path.string());
    return load_weights(is, expected_n);
}

} // namespace risgat::gat
