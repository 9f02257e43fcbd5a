// Copyright 2026 The Trident Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trident {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

Digest sha256(std::span<const std::uint8_t> data);
Digest hmac_sha256(std::span<const std::uint8_t> key,
                   std::span<const std::uint8_t> data);

// Timing does not depend on where the inputs first differ.
bool constant_time_equal(std::span<const std::uint8_t> a,
                         std::span<const std::uint8_t> b);

// Appends a 4-byte big-endian length followed by the field bytes.
void append_field(Bytes& out, std::span<const std::uint8_t> field);
inline void append_field(Bytes& out, std::string_view field) {
  append_field(out, as_bytes(field));
}

std::string to_hex(std::span<const std::uint8_t> data);

// Accepts upper- or lowercase digits. Throws std::invalid_argument on odd
// length or a non-hex character.
Bytes from_hex(std::string_view hex);

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view hex) {
  const Bytes raw = from_hex(hex);
  if (raw.size() != N) {
    throw std::invalid_argument("expected " + std::to_string(N) +
                                " hex-encoded bytes");
  }
  std::array<std::uint8_t, N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

}  // namespace trident
