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

#include "risgat/nn.hpp"

#include <cmath>
#include <limits>

#include "risgat/errors.hpp"

namespace risgat::nn {

Matrix dense_forward(const Matrix& x, const Matrix& w, const Matrix& b) {
    if (x.cols() != w.rows())
        throw DimensionError("dense_forward: input " + x.shape_str() + " does not match weight " + w.shape_str());
    if (b.rows() != 1 || b.cols() != w.cols())
        throw DimensionError("dense_forward: bias " + b.shape_str() + " does not match weight " + w.shape_str());
    Matrix out = matmul(x, w);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto r = out.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] += b[j];
    }
    return out;
}

Matrix dense_backward(const Matrix& x, Param& w, Param& b, const Matrix& grad_out) {
    w.grad += matmul_tn(x, grad_out);
    for (std::size_t i = 0; i < grad_out.rows(); ++i) {
        auto r = grad_out.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) b.grad[j] += r[j];
    }
    return matmul_nt(grad_out, w.value);
}

double relu_derivative(double x) { return x > 0.0 ? 1.0 : 0.0; }

Matrix relu(const Matrix& x) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
    return out;
}

Matrix relu_backward(const Matrix& pre_activation, const Matrix& grad_out) {
    require_same_shape(pre_activation, grad_out, "relu_backward");
    Matrix out(grad_out.rows(), grad_out.cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = pre_activation[i] > 0.0 ? grad_out[i] : 0.0;
    return out;
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& x) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = sigmoid(x[i]);
    return out;
}

Matrix sigmoid_backward(const Matrix& output, const Matrix& grad_out) {
    require_same_shape(output, grad_out, "sigmoid_backward");
    Matrix out(output.rows(), output.cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = grad_out[i] * output[i] * (1.0 - output[i]);
    return out;
}

Matrix softmax_rows(const Matrix& x, const Matrix& mask) {
    require_same_shape(x, mask, "softmax_rows");
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (std::size_t j = 0; j < x.cols(); ++j) {
            if (mask(i, j) == 0.0) continue;
            any = true;
            mx = std::max(mx, x(i, j));
        }
        if (!any)
            throw DegenerateNeighborhoodError("softmax_rows: row " + std::to_string(i) + " has no unmasked entry");
        double z = 0.0;
        for (std::size_t j = 0; j < x.cols(); ++j) {
            if (mask(i, j) == 0.0) continue;
            out(i, j) = std::exp(x(i, j) - mx);
            z += out(i, j);
        }
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) /= z;
    }
    return out;
}

Matrix softmax_rows_backward(const Matrix& output, const Matrix& grad_out) {
    require_same_shape(output, grad_out, "softmax_rows_backward");
    Matrix out(output.rows(), output.cols());
    for (std::size_t i = 0; i < output.rows(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < output.cols(); ++j) dot += output(i, j) * grad_out(i, j);
        // masked entries have output 0, so their gradient vanishes here too
        for (std::size_t j = 0; j < output.cols(); ++j) out(i, j) = output(i, j) * (grad_out(i, j) - dot);
    }
    return out;
}

LossResult mse_loss(const Matrix& pred, const Matrix& target) {
    require_same_shape(pred, target, "mse_loss");
    if (pred.empty()) throw DimensionError("mse_loss: empty operands");
    LossResult r;
    r.grad = Matrix(pred.rows(), pred.cols());
    const double n = static_cast<double>(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        r.value += d * d;
        r.grad[i] = 2.0 * d / n;
    }
    r.value /= n;
    return r;
}

double l2_penalty(std::span<Param* const> params, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("l2_penalty: lambda must be non-negative");
    if (lambda == 0.0) return 0.0;
    double penalty = 0.0;
    for (Param* p : params) {
        if (!p->is_weight) continue;
        penalty += p->value.squared_norm();
        for (std::size_t i = 0; i < p->value.size(); ++i) p->grad[i] += 2.0 * lambda * p->value[i];
    }
    return lambda * penalty;
}

void adam_step(AdamState& state, Param& param, const AdamConfig& cfg) {
    require_same_shape(state.m, param.value, "adam_step");
    require_same_shape(state.v, param.value, "adam_step");
    ++state.t;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < param.value.size(); ++i) {
        const double g = param.grad[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        param.value[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
    param.zero_grad();
}

DropoutResult dropout_apply(const Matrix& x, double rate, bool training, Rng& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) throw std::invalid_argument("dropout_apply: rate must lie in [0, 1)");
    DropoutResult d;
    d.keep = Matrix(x.rows(), x.cols(), 1.0);
    if (!training || rate == 0.0) {
        d.output = x;
        return d;
    }
    d.scale = 1.0 / (1.0 - rate);
    d.output = Matrix(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (rng.uniform() < rate) {
            d.keep[i] = 0.0;
        } else {
            d.output[i] = x[i] * d.scale;
        }
    }
    return d;
}

Matrix dropout_backward(const DropoutResult& d, const Matrix& grad_out) {
    require_same_shape(d.keep, grad_out, "dropout_backward");
    Matrix out(grad_out.rows(), grad_out.cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = grad_out[i] * d.keep[i] * d.scale;
    return out;
}

Matrix finite_diff_grad(const std::function<double(const Matrix&)>& f, const Matrix& x, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("finite_diff_grad: eps must be positive");
    Matrix g(x.rows(), x.cols());
    Matrix probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = probe[i];
        probe[i] = orig + eps;
        const double fp = f(probe);
        probe[i] = orig - eps;
        const double fm = f(probe);
        probe[i] = orig;
        g[i] = (fp - fm) / (2.0 * eps);
    }
    return g;
}

void glorot_uniform(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : m.data()) v = rng.uniform(-limit, limit);
}

} // namespace risgat::nn
