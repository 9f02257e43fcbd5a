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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "trident/crypto.hpp"

namespace trident {

inline constexpr std::uint32_t kMaxDerivationAttempts = 64;

using Nonce = std::array<std::uint8_t, 16>;

enum class ConverterKind { kLoginName, kLoginPassword };

std::string_view converter_kind_tag(ConverterKind kind);  // "LN" / "LP"

// The 94 printable ASCII characters 0x21..0x7E in code-point order.
std::string_view printable_ascii();

// Server-side secret from which every converter is re-derivable. Wiped on
// destruction and deliberately has no serializer.
class MasterKey {
 public:
  static constexpr std::size_t kSize = 32;

  explicit MasterKey(const std::array<std::uint8_t, kSize>& bytes)
      : bytes_(bytes) {}
  MasterKey(const MasterKey&) = default;
  MasterKey& operator=(const MasterKey&) = default;
  ~MasterKey();

  // Exactly 64 hex characters; throws Error(kInvalidKey) otherwise.
  static MasterKey from_hex(std::string_view hex);

  // Reads TRIDENT_MASTER_KEY (or `variable`).
  static MasterKey from_environment(const char* variable = "TRIDENT_MASTER_KEY");

  std::span<const std::uint8_t> bytes() const { return bytes_; }

 private:
  std::array<std::uint8_t, kSize> bytes_;
};

struct StreamContext {
  Nonce nonce{};
  ConverterKind kind = ConverterKind::kLoginName;
  std::string credential;
  std::string imei;
  std::string imsi;
  std::uint32_t attempt = 0;

  // Length-prefixed concatenation: nonce, kind tag, credential, imei, imsi,
  // attempt (4-byte big-endian). Every field carries its own 4-byte length.
  Bytes encode() const;
};

// Counter-mode HMAC-SHA-256 byte stream:
//   seed    = HMAC(master key, ctx.encode())
//   block i = HMAC(seed, i as 8-byte big-endian), i = 0, 1, ...
class Stream {
 public:
  // Throws Error(kDerivationExhausted) when ctx.attempt >= 64.
  Stream(const MasterKey& key, const StreamContext& ctx);

  std::uint8_t next_byte();

  // Uniform in [lo, hi]. Draws the fewest whole bytes covering the range
  // width (big-endian) and rejects values in the final partial block.
  // A single-value range consumes nothing.
  std::uint64_t next_uint(std::uint64_t lo, std::uint64_t hi);

  char next_char(std::string_view charset);

  // Bytes consumed so far.
  std::uint64_t position() const { return position_; }

 private:
  void refill();

  Digest seed_{};
  Digest block_{};
  std::uint64_t block_index_ = 0;
  std::size_t offset_ = 0;
  std::uint64_t position_ = 0;
};

}  // namespace trident
