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

#ifndef RISGAT_GAT_HPP
#define RISGAT_GAT_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "risgat/graph.hpp"
#include "risgat/nn.hpp"
#include "risgat/rng.hpp"

namespace risgat::gat {

using nn::Param;

/// How edge attributes enter a graph attention layer.
///
/// `ignored`: messages are (XW)_j, the plain single-head formulation.
/// `concat`:  the edge vector E_ij is appended to node j's features before the
///            linear map, so the message from j to i is X_j W_x + E_ij W_e.
enum class EdgeMode : std::uint32_t { ignored = 0, concat = 1 };

const char* to_string(EdgeMode m);
EdgeMode edge_mode_from_string(const std::string& s);

/// One graph attention layer. W stacks [W_x; W_e] when edges are concatenated.
struct GalParams {
    GalParams() = default;
    GalParams(const std::string& prefix, std::size_t in_features, std::size_t edge_features, std::size_t out_features);

    std::size_t in_features() const { return in_features_; }
    std::size_t edge_features() const { return edge_features_; }
    std::size_t out_features() const { return W.value.cols(); }

    Param W;
    Param a;  // 2F' x 1: first half scores the receiving node, second half the message
    Param b;  // 1 x F'

private:
    std::size_t in_features_ = 0;
    std::size_t edge_features_ = 0;
};

/// Global attention pooling: sum over nodes of sigmoid(X W1 + b1) * (X W2 + b2).
struct PoolParams {
    PoolParams() = default;
    PoolParams(std::size_t in_features, std::size_t out_features);

    Param W1, b1, W2, b2;
};

/// Intermediates of one graph attention layer, kept for the backward pass.
struct GalCache {
    Matrix x;         // P x F input (after dropout)
    EdgeTensor edges;
    Matrix xw;        // P x F'
    Matrix messages;  // (P*P) x F', row i*P+j is the message j -> i
    Matrix logits;    // P x P, pre-ReLU attention scores
    Matrix alpha;     // P x P
    Matrix z;         // P x F', pre-activation output
};

/// Attention weights alpha[i][j] = softmax_j ReLU(a^T [xw_i || xw_j]) over the
/// neighbourhood in `mask` (which must already contain self-loops).
Matrix attention_coefficients(const Matrix& xw, const Param& a, const Matrix& mask);

/// ReLU(alpha * (messages) + b). `edges` may be empty when the layer ignores them.
Matrix gal_forward(const Matrix& x, const Matrix& adjacency, const EdgeTensor& edges, const GalParams& p,
                   GalCache* cache = nullptr);
// Accumulates parameter gradients, returns dL/dx.
Matrix gal_backward(const GalCache& cache, GalParams& p, const Matrix& grad_out);

struct PoolCache {
    Matrix x, gate, value;
};

Matrix global_attention_pool(const Matrix& x, const PoolParams& p, PoolCache* cache = nullptr);
Matrix pool_backward(const PoolCache& cache, PoolParams& p, const Matrix& grad_out);

/// Adjacency plus self-loops, the attention neighbourhood of every node.
Matrix neighbourhood_mask(const Matrix& adjacency);

struct ModelShape {
    std::size_t n_ris = 16;
    std::size_t m_p = 16;
    std::size_t hidden1 = 128;
    std::size_t hidden2 = 32;
    std::size_t pooled = 128;
    EdgeMode edge_mode = EdgeMode::concat;
};

/// The estimator network: gal1 -> gal2 -> attention pooling -> linear head
/// with 4N outputs.
class GatModel {
public:
    GatModel() = default;
    GatModel(const ModelShape& shape, std::uint64_t init_seed);

    const ModelShape& shape() const { return shape_; }
    std::size_t n_ris() const { return shape_.n_ris; }
    std::size_t m_p() const { return shape_.m_p; }
    EdgeMode edge_mode() const { return shape_.edge_mode; }
    std::size_t output_size() const { return 4 * shape_.n_ris; }

    /// Forward pass. Dropout (rate `dropout_rate`) is applied to the inputs of
    /// both attention layers only when `training`. Stores intermediates for
    /// `backward` when `keep_cache`.
    Matrix forward(const GraphInput& in, bool training, double dropout_rate, Rng& rng, bool keep_cache = false);
    Matrix forward(const GraphInput& in) const;

    /// Backpropagates dL/d(output) through the last cached forward pass.
    void backward(const Matrix& grad_out);
    bool has_cache() const { return cached_; }

    std::vector<Param*> params();
    std::vector<const Param*> params() const;
    void zero_grad();

    GalParams gal1, gal2;
    PoolParams pool;
    Param head_W, head_b;

private:
    Matrix forward_impl(const GraphInput& in, bool training, double dropout_rate, Rng* rng, bool keep_cache);

    ModelShape shape_;
    bool cached_ = false;
    nn::DropoutResult drop1_, drop2_;
    GalCache c1_, c2_;
    PoolCache cp_;
    Matrix pooled_;
};

/// MSE(prediction, target) + lambda * L2 for one sample with gradients left in
/// the model params. `loss_scale` multiplies the whole objective.
double loss_and_gradients(GatModel& model, const GraphInput& in, const Matrix& target, double l2,
                          double dropout_rate, bool training, Rng& rng, double loss_scale = 1.0);

struct TrainConfig {
    std::size_t epochs = 20;
    std::size_t patience = 5;
    std::size_t batch_size = 32;
    double lr = 1e-3;
    double l2 = 5e-4;
    double dropout_rate = 0.5;
    double val_ratio = 0.2;
    std::uint64_t seed = 1;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainingHistory {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;
    double best_val_loss = 0.0;
    bool stopped_early = false;
};

struct TrainingSample {
    GraphInput input;
    Matrix target;  // 1 x 4N
};

/// Mini-batch Adam with early stopping on validation loss. The best
/// validation weights are restored before returning.
TrainingHistory fit(GatModel& model, const std::vector<TrainingSample>& train,
                    const std::vector<TrainingSample>& val, const TrainConfig& cfg,
                    const std::function<void(const EpochRecord&)>& on_epoch = {});

/// Mean (MSE + L2) over a set, evaluation mode.
double evaluate_loss(const GatModel& model, const std::vector<TrainingSample>& set, double l2);

// "GATW" container.
inline constexpr std::uint32_t kWeightFormatVersion = 1;
void save_weights(const GatModel& model, std::ostream& os);
void save_weights(const GatModel& model, const std::filesystem::path& path);
GatModel load_weights(std::istream& is, std::optional<std::size_t> expected_n = std::nullopt);
GatModel load_weights(const std::filesystem::path& path, std::optional<std::size_t> expected_n = std::nullopt);

} // namespace risgat::gat

#endif
