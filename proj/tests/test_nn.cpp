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
#include <sstream>

#include "risgat/errors.hpp"
#include "risgat/matrix.hpp"
#include "risgat/nn.hpp"

using namespace risgat;
using namespace risgat::nn;
using Catch::Approx;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(r, c);
    for (double& v : m.data()) v = rng.uniform(lo, hi);
    return m;
}

double max_rel_error(const Matrix& a, const Matrix& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max({den, std::abs(a[i]), std::abs(b[i])});
    }
    return den == 0.0 ? num : num / den;
}

} // namespace

TEST_CASE("dense_forward examples") {
    Param w("w", 2, 2, true), b("b", 1, 2, false);
    w.value = Matrix::identity(2);
    CHECK(dense_forward(Matrix{{1, 2}}, w, b) == Matrix{{1, 2}});

    CHECK(dense_forward(Matrix{{1, 1}}, Matrix{{2}, {3}}, Matrix{{1}}) == Matrix{{6}});
    CHECK(dense_forward(Matrix{{0, 0}}, Matrix{{4, 1}, {2, 7}}, Matrix{{5, -5}}) == Matrix{{5, -5}});
}

TEST_CASE("dense_forward rejects mismatched shapes with both shapes in the message") {
    try {
        dense_forward(Matrix(1, 3), Matrix(2, 2), Matrix(1, 2));
        FAIL("expected a DimensionError");
    } catch (const DimensionError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("1x3") != std::string::npos);
        CHECK(msg.find("2x2") != std::string::npos);
    }
    CHECK_THROWS_AS(dense_forward(Matrix(1, 2), Matrix(2, 2), Matrix(1, 3)), DimensionError);
}

TEST_CASE("relu and its subgradient") {
    CHECK(relu(Matrix{{-1, 2}}) == Matrix{{0, 2}});
    CHECK(relu(Matrix{{0}}) == Matrix{{0}});
    CHECK(relu_derivative(3.0) == 1.0);
    CHECK(relu_derivative(0.0) == 0.0);
    CHECK(relu_backward(Matrix{{-1, 0, 2}}, Matrix{{5, 5, 5}}) == Matrix{{0, 0, 5}});
}

TEST_CASE("sigmoid values, saturation and symmetry") {
    CHECK(sigmoid(Matrix{{0}})[0] == 0.5);
    CHECK(std::abs(sigmoid(50.0) - 1.0) < 1e-15);
    CHECK(std::isfinite(sigmoid(-700.0)));
    CHECK(sigmoid(-700.0) >= 0.0);
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-30, 30);
        CHECK(sigmoid(-x) == Approx(1.0 - sigmoid(x)).margin(1e-15));
    }
}

TEST_CASE("softmax_rows examples") {
    Matrix s = softmax_rows(Matrix{{0, 0}}, Matrix{{1, 1}});
    CHECK(s == Matrix{{0.5, 0.5}});

    s = softmax_rows(Matrix{{0.3, 1e9}}, Matrix{{1, 0}});
    CHECK(s == Matrix{{1, 0}});

    s = softmax_rows(Matrix{{1, 2, 3}}, Matrix{{1, 1, 1}});
    // direct evaluation
    const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
    CHECK(s[0] == Approx(std::exp(1.0) / z).margin(1e-12));
    CHECK(s[0] == Approx(0.0900).margin(1e-4));
    CHECK(s[1] == Approx(0.2447).margin(1e-4));
    CHECK(s[2] == Approx(0.6652).margin(1e-4));
}

TEST_CASE("softmax_rows rejects an empty neighbourhood") {
    CHECK_THROWS_AS(softmax_rows(Matrix{{1, 2}, {3, 4}}, Matrix{{1, 0}, {0, 0}}), DegenerateNeighborhoodError);
}

TEST_CASE("softmax rows sum to one and ignore a constant shift") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix x = random_matrix(4, 6, rng, -50, 50);
        Matrix mask(4, 6);
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 6; ++c) mask(r, c) = rng.bernoulli(0.5) ? 1.0 : 0.0;
            mask(r, static_cast<std::size_t>(rng.uniform(0, 6))) = 1.0;
        }
        const Matrix s = softmax_rows(x, mask);
        Matrix shifted = x;
        for (std::size_t r = 0; r < 4; ++r) {
            const double k = rng.uniform(-100, 100);
            for (std::size_t c = 0; c < 6; ++c) shifted(r, c) += k;
        }
        const Matrix s2 = softmax_rows(shifted, mask);
        for (std::size_t r = 0; r < 4; ++r) {
            double sum = 0.0;
            for (std::size_t c = 0; c < 6; ++c) {
                sum += s(r, c);
                if (mask(r, c) == 0.0) CHECK(s(r, c) == 0.0);
                CHECK(s2(r, c) == Approx(s(r, c)).margin(1e-12));
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("mse_loss examples") {
    CHECK(mse_loss(Matrix{{1, 2}}, Matrix{{1, 2}}).value == 0.0);
    const LossResult r = mse_loss(Matrix{{1}}, Matrix{{0}});
    CHECK(r.value == 1.0);
    CHECK(r.grad == Matrix{{2}});
    CHECK(mse_loss(Matrix{{1, 3}}, Matrix{{0, 1}}).value == 2.5);
    CHECK_THROWS_AS(mse_loss(Matrix(1, 2), Matrix(2, 1)), DimensionError);
}

TEST_CASE("l2_penalty examples") {
    Param w("w", 1, 2, true), b("b", 1, 2, false);
    w.value = Matrix{{1, 1}};
    b.value = Matrix{{3, 4}};
    std::vector<Param*> both{&w, &b};
    CHECK(l2_penalty(both, 0.0) == 0.0);
    CHECK(w.grad == Matrix(1, 2));

    std::vector<Param*> only_w{&w};
    CHECK(l2_penalty(only_w, 0.5) == 1.0);
    CHECK(w.grad == Matrix{{1, 1}});

    std::vector<Param*> only_b{&b};
    CHECK(l2_penalty(only_b, 0.5) == 0.0);
    CHECK(b.grad == Matrix(1, 2));
    CHECK_THROWS(l2_penalty(only_w, -1.0));
}

TEST_CASE("adam_step examples") {
    Param p("p", 1, 1, true);
    p.value = Matrix{{2.0}};
    AdamState s(p);
    adam_step(s, p, {});
    CHECK(p.value[0] == 2.0);

    // one hand-computed step with constant gradient 1:
    // m = 0.1, v = 0.001, m_hat = 1, v_hat = 1, step = lr / (1 + eps)
    Param q("q", 1, 1, true);
    q.value = Matrix{{0.0}};
    q.grad = Matrix{{1.0}};
    AdamState t(q);
    adam_step(t, q, {});
    CHECK(q.value[0] == Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-12));
    CHECK(q.grad[0] == 0.0);
    CHECK(t.t == 1);
    CHECK(t.v[0] >= 0.0);
}

TEST_CASE("adam_step is deterministic and independent of registration order") {
    Rng rng(5);
    Param a("a", 3, 2, true), b("b", 3, 2, true);
    a.value = b.value = random_matrix(3, 2, rng);
    AdamState sa(a), sb(b);
    std::vector<Matrix> grads;
    for (int i = 0; i < 10; ++i) grads.push_back(random_matrix(3, 2, rng));
    for (const auto& g : grads) {
        // b is stepped before a on even steps
        a.grad = g;
        b.grad = g;
        if (sa.t % 2 == 0) {
            adam_step(sb, b, {});
            adam_step(sa, a, {});
        } else {
            adam_step(sa, a, {});
            adam_step(sb, b, {});
        }
    }
    CHECK(a.value == b.value);
    CHECK(sa.m == sb.m);
}

TEST_CASE("dropout_apply examples") {
    Rng rng(9);
    const Matrix x = random_matrix(10, 10, rng);
    CHECK(dropout_apply(x, 0.5, false, rng).output == x);
    CHECK(dropout_apply(x, 0.0, true, rng).output == x);
    CHECK(dropout_apply(x, 0.5, false, rng).keep == Matrix(10, 10, 1.0));
    CHECK_THROWS(dropout_apply(x, 1.0, true, rng));
    CHECK_THROWS(dropout_apply(x, -0.1, true, rng));
}

TEST_CASE("inverted dropout keeps half the entries and preserves the mean") {
    Rng rng(13);
    const Matrix x(1, 100000, 1.0);
    const DropoutResult d = dropout_apply(x, 0.5, true, rng);
    const double kept = d.keep.sum() / static_cast<double>(x.size());
    CHECK(std::abs(kept - 0.5) < 0.01);
    const double mean = d.output.sum() / static_cast<double>(x.size());
    CHECK(std::abs(mean - 1.0) < 0.02);
}

TEST_CASE("finite_diff_grad oracle checks") {
    auto sumsq = [](const Matrix& m) { return m.squared_norm(); };
    CHECK(finite_diff_grad(sumsq, Matrix{{3}})[0] == Approx(6.0).margin(1e-6));
    CHECK(finite_diff_grad([](const Matrix&) { return 4.2; }, Matrix(2, 3)) == Matrix(2, 3));

    Rng rng(17);
    const Matrix target = random_matrix(2, 5, rng);
    const Matrix pred = random_matrix(2, 5, rng);
    const Matrix fd = finite_diff_grad([&](const Matrix& p) { return mse_loss(p, target).value; }, pred);
    CHECK(max_rel_error(fd, mse_loss(pred, target).grad) < 1e-7);
}

TEST_CASE("analytic gradients of each op agree with finite differences") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = random_matrix(3, 4, rng);
        const Matrix w0 = random_matrix(4, 2, rng);
        const Matrix b0 = random_matrix(1, 2, rng);
        const Matrix up = random_matrix(3, 2, rng);
        auto loss_of = [&](const Matrix& out) {
            double s = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) s += out[i] * up[i];
            return s;
        };

        // dense
        Param w("w", 4, 2, true), b("b", 1, 2, false);
        w.value = w0;
        b.value = b0;
        const Matrix dx = dense_backward(x, w, b, up);
        CHECK(max_rel_error(dx, finite_diff_grad([&](const Matrix& m) { return loss_of(dense_forward(m, w0, b0)); }, x)) < 1e-5);
        CHECK(max_rel_error(w.grad, finite_diff_grad([&](const Matrix& m) { return loss_of(dense_forward(x, m, b0)); }, w0)) < 1e-5);
        CHECK(max_rel_error(b.grad, finite_diff_grad([&](const Matrix& m) { return loss_of(dense_forward(x, w0, m)); }, b0)) < 1e-5);

        // sigmoid
        const Matrix z = random_matrix(3, 2, rng, -4, 4);
        CHECK(max_rel_error(sigmoid_backward(sigmoid(z), up),
                            finite_diff_grad([&](const Matrix& m) { return loss_of(sigmoid(m)); }, z)) < 1e-5);

        // relu, away from 0
        Matrix rz = random_matrix(3, 2, rng);
        for (double& v : rz.data())
            if (std::abs(v) < 1e-3) v = 0.5;
        CHECK(max_rel_error(relu_backward(rz, up), finite_diff_grad([&](const Matrix& m) { return loss_of(relu(m)); }, rz)) <
              1e-5);

        // softmax
        const Matrix mask{{1, 1}, {1, 0}, {0, 1}};
        const Matrix sz = random_matrix(3, 2, rng, -3, 3);
        CHECK(max_rel_error(softmax_rows_backward(softmax_rows(sz, mask), up),
                            finite_diff_grad([&](const Matrix& m) { return loss_of(softmax_rows(m, mask)); }, sz)) < 1e-5);

        // l2
        Param lw("lw", 4, 2, true);
        lw.value = w0;
        std::vector<Param*> ps{&lw};
        l2_penalty(ps, 0.3);
        CHECK(max_rel_error(lw.grad, finite_diff_grad([](const Matrix& m) { return 0.3 * m.squared_norm(); }, w0)) < 1e-5);
    }
}

TEST_CASE("matrix serialization round trip") {
    Rng rng(2);
    const Matrix m = random_matrix(3, 5, rng);
    std::stringstream ss;
    write_matrix(ss, m);
    CHECK(ss.str().size() == 8 + 8 * 15);
    CHECK(read_matrix(ss) == m);
    std::stringstream truncated(ss.str().substr(0, 20));
    CHECK_THROWS_AS(read_matrix(truncated), FormatError);
}

TEST_CASE("glorot_uniform stays inside its limit") {
    Rng rng(1);
    Matrix m(30, 10);
    glorot_uniform(m, 30, 10, rng);
    const double lim = std::sqrt(6.0 / 40.0);
    for (double v : m.data()) CHECK(std::abs(v) <= lim);
    CHECK(m.squared_norm() > 0.0);
}
