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

#ifndef RISGAT_GRAPH_HPP
#define RISGAT_GRAPH_HPP

#include <span>
#include <vector>

#include "risgat/matrix.hpp"

namespace risgat {

/// Dense P x P x S edge attribute tensor.
class EdgeTensor {
public:
    EdgeTensor() = default;
    EdgeTensor(std::size_t nodes, std::size_t features) : nodes_(nodes), features_(features), data_(nodes * nodes * features) {}

    std::size_t nodes() const { return nodes_; }
    std::size_t features() const { return features_; }
    bool empty() const { return data_.empty(); }

    std::span<double> edge(std::size_t i, std::size_t j) { return {data_.data() + (i * nodes_ + j) * features_, features_}; }
    std::span<const double> edge(std::size_t i, std::size_t j) const {
        return {data_.data() + (i * nodes_ + j) * features_, features_};
    }
    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    bool operator==(const EdgeTensor&) const = default;

private:
    std::size_t nodes_ = 0;
    std::size_t features_ = 0;
    std::vector<double> data_;
};

/// Node features, binary adjacency and edge attributes of one graph.
struct GraphInput {
    Matrix x;
    Matrix adjacency;
    EdgeTensor edges;
};

} // namespace risgat

#endif
