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

#ifndef RISGAT_NN_HPP
#define RISGAT_NN_HPP

#include <functional>
#include <span>
#include <string>

#include "risgat/matrix.hpp"
#include "risgat/rng.hpp"

namespace risgat::nn {

/// Trainable tensor with its gradient accumulator.
///
/// `is_weight` marks kernels that take part in the L2 penalty; biases and
/// other offsets are excluded.
struct Param {
    Param() = default;
    Param(std::string name, std::size_t rows, std::size_t cols, bool is_weight)
        : name(std::move(name)), value(rows, cols), grad(rows, cols), is_weight(is_weight) {}

    void zero_grad() { grad.fill(0.0); }

    std::string name;
    Matrix value;
    Matrix grad;
    bool is_weight = true;
};

// result[i][j] = sum_k x[i][k] * w[k][j] + b[j]
Matrix dense_forward(const Matrix& x, const Matrix& w, const Matrix& b);
inline Matrix dense_forward(const Matrix& x, const Param& w, const Param& b) {
    return dense_forward(x, w.value, b.value);
}

/// Gradients of a dense layer given dL/d(out). Accumulates into w.grad and
/// b.grad, returns dL/dx.
Matrix dense_backward(const Matrix& x, Param& w, Param& b, const Matrix& grad_out);

Matrix relu(const Matrix& x);
// Subgradient at exactly 0 is 0.
Matrix relu_backward(const Matrix& pre_activation, const Matrix& grad_out);
double relu_derivative(double x);

Matrix sigmoid(const Matrix& x);
double sigmoid(double x);
// Uses the forward output s: ds/dx = s(1-s).
Matrix sigmoid_backward(const Matrix& output, const Matrix& grad_out);

/// Row-wise softmax restricted to entries with mask != 0. Masked entries are
/// exactly zero. Throws DegenerateNeighborhoodError for an all-zero mask row.
Matrix softmax_rows(const Matrix& x, const Matrix& mask);
// Vector-Jacobian product through softmax_rows using its output.
Matrix softmax_rows_backward(const Matrix& output, const Matrix& grad_out);

struct LossResult {
    double value = 0.0;
    Matrix grad;
};

/// Mean over all entries of (pred - target)^2, gradient 2(pred-target)/count.
LossResult mse_loss(const Matrix& pred, const Matrix& target);

/// lambda * sum ||W||^2 over weight params; adds 2*lambda*W to each grad.
double l2_penalty(std::span<Param* const> params, double lambda);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First/second moment estimates for one Param.
struct AdamState {
    AdamState() = default;
    explicit AdamState(const Param& p) : m(p.value.rows(), p.value.cols()), v(p.value.rows(), p.value.cols()) {}

    Matrix m;
    Matrix v;
    long t = 0;
};

// Bias-corrected Adam update; consumes and zeroes param.grad.
void adam_step(AdamState& state, Param& param, const AdamConfig& cfg);

struct DropoutResult {
    Matrix output;
    // 1 where kept, 0 where dropped; all ones outside training.
    Matrix keep;
    double scale = 1.0;
};

/// Inverted dropout. Kept entries are scaled by 1/(1-rate); identity when
/// `training` is false or rate is 0.
DropoutResult dropout_apply(const Matrix& x, double rate, bool training, Rng& rng);
Matrix dropout_backward(const DropoutResult& d, const Matrix& grad_out);

/// Central-difference gradient of a scalar function, entry by entry.
Matrix finite_diff_grad(const std::function<double(const Matrix&)>& f, const Matrix& x, double eps = 1e-6);

/// Glorot/Xavier uniform fill with limit sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng);

} // namespace risgat::nn

#endif
