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

#ifndef RISGAT_KV_HPP
#define RISGAT_KV_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace risgat {

/// Flat `key = value` document. Lines starting with '#' and blank lines are
/// ignored; keys keep their section prefix (e.g. "train.epochs").
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_kv(const std::string& text);
KeyValues read_kv_file(const std::filesystem::path& path);
std::string format_kv(const KeyValues& kv);

double kv_double(const KeyValues& kv, const std::string& key);
long long kv_int(const KeyValues& kv, const std::string& key);
std::vector<double> parse_double_list(const std::string& s);
std::string format_double(double v);
std::string format_double_list(const std::vector<double>& v);

} // namespace risgat

#endif
