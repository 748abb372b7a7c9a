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

#ifndef RISGAT_BINIO_HPP
#define RISGAT_BINIO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "risgat/errors.hpp"

// Little-endian primitives shared by the weight and dataset containers.
namespace risgat::binio {

template <typename UInt>
inline void put_le(std::ostream& os, UInt v) {
    char buf[sizeof(UInt)];
    for (std::size_t i = 0; i < sizeof(UInt); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(buf, sizeof(UInt));
}

template <typename UInt>
inline UInt get_le(std::istream& is) {
    unsigned char buf[sizeof(UInt)];
    if (!is.read(reinterpret_cast<char*>(buf), sizeof(UInt))) throw FormatError("unexpected end of file");
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(buf[i]) << (8 * i);
    return v;
}

inline void put_u32(std::ostream& os, std::uint32_t v) { put_le(os, v); }
inline std::uint32_t get_u32(std::istream& is) { return get_le<std::uint32_t>(is); }

inline void put_f64(std::ostream& os, double v) { put_le(os, std::bit_cast<std::uint64_t>(v)); }
inline double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

inline void put_magic(std::ostream& os, const char (&magic)[5]) { os.write(magic, 4); }

inline void expect_magic(std::istream& is, const char (&magic)[5]) {
    char buf[4];
    if (!is.read(buf, 4)) throw FormatError("file too short for magic");
    if (std::memcmp(buf, magic, 4) != 0)
        throw FormatError(std::string("bad magic, expected ") + magic);
}

} // namespace risgat::binio

#endif
