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

#ifndef RISGAT_ERRORS_HPP
#define RISGAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace risgat {

// Shape or length mismatch between operands.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A softmax row or attention neighbourhood with no admissible entry.
class DegenerateNeighborhoodError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Corrupt, truncated or incompatible file contents.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace risgat

#endif
