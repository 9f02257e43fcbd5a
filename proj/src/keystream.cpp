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

#include "trident/keystream.hpp"

#include <openssl/crypto.h>

#include <cstdlib>
#include <stdexcept>

#include "trident/error.hpp"

namespace trident {

std::string_view converter_kind_tag(ConverterKind kind) {
  return kind == ConverterKind::kLoginName ? "LN" : "LP";
}

std::string_view printable_ascii() {
  static const std::string kChars = [] {
    std::string s;
    for (char c = 0x21; c <= 0x7E; ++c) s.push_back(c);
    return s;
  }();
  return kChars;
}

MasterKey::~MasterKey() { OPENSSL_cleanse(bytes_.data(), bytes_.size()); }

MasterKey MasterKey::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kSize) {
    throw Error(ErrorCode::kInvalidKey,
                "master key must be 64 hex characters");
  }
  try {
    return MasterKey(fixed_from_hex<kSize>(hex));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::kInvalidKey, "master key is not valid hex");
  }
}

MasterKey MasterKey::from_environment(const char* variable) {
  const char* value = std::getenv(variable);
  if (value == nullptr || *value == '\0') {
    throw Error(ErrorCode::kInvalidKey,
                std::string(variable) + " is not set");
  }
  return from_hex(value);
}

Bytes StreamContext::encode() const {
  Bytes out;
  out.reserve(64 + credential.size() + imei.size() + imsi.size());
  append_field(out, nonce);
  append_field(out, converter_kind_tag(kind));
  append_field(out, credential);
  append_field(out, imei);
  append_field(out, imsi);
  const std::array<std::uint8_t, 4> counter = {
      static_cast<std::uint8_t>(attempt >> 24),
      static_cast<std::uint8_t>(attempt >> 16),
      static_cast<std::uint8_t>(attempt >> 8),
      static_cast<std::uint8_t>(attempt)};
  append_field(out, counter);
  return out;
}

Stream::Stream(const MasterKey& key, const StreamContext& ctx) {
  if (ctx.attempt >= kMaxDerivationAttempts) {
    throw Error(ErrorCode::kDerivationExhausted,
                "converter derivation exhausted all attempts");
  }
  seed_ = hmac_sha256(key.bytes(), ctx.encode());
  offset_ = block_.size();
}

void Stream::refill() {
  std::array<std::uint8_t, 8> counter{};
  for (int i = 0; i < 8; ++i) {
    counter[i] = static_cast<std::uint8_t>(block_index_ >> (56 - 8 * i));
  }
  block_ = hmac_sha256(seed_, counter);
  ++block_index_;
  offset_ = 0;
}

std::uint8_t Stream::next_byte() {
  if (offset_ == block_.size()) refill();
  ++position_;
  return block_[offset_++];
}

std::uint64_t Stream::next_uint(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw std::invalid_argument("next_uint: lo > hi");
  const std::uint64_t span = hi - lo;
  if (span == 0) return lo;

  int n_bytes = 1;
  while (n_bytes < 8 && (span >> (8 * n_bytes)) != 0) ++n_bytes;

  // Values below `accept_below` map onto the range without bias. With 8
  // bytes the raw range is 2^64 and needs the wrap-around form.
  const std::uint64_t width = span + 1;  // 0 means 2^64
  std::uint64_t accept_below = 0;
  bool accept_all = false;
  if (n_bytes < 8) {
    const std::uint64_t raw_range = std::uint64_t{1} << (8 * n_bytes);
    accept_below = raw_range - raw_range % width;
  } else if (width == 0) {
    accept_all = true;
  } else {
    const std::uint64_t rem = (UINT64_MAX % width + 1) % width;
    if (rem == 0) accept_all = true;
    else accept_below = 0 - rem;  // 2^64 - rem
  }

  for (;;) {
    std::uint64_t v = 0;
    for (int i = 0; i < n_bytes; ++i) v = (v << 8) | next_byte();
    if (accept_all) return lo + (width == 0 ? v : v % width);
    if (v < accept_below) return lo + v % width;
  }
}

char Stream::next_char(std::string_view charset) {
  if (charset.empty()) throw std::invalid_argument("next_char: empty charset");
  return charset[next_uint(0, charset.size() - 1)];
}

}  // namespace trident
