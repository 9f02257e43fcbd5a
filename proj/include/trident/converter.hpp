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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trident/keystream.hpp"

namespace trident {

inline constexpr int kMinDigit = 1;
inline constexpr int kMaxDigit = 5;
inline constexpr int kMaxLabelOffset = 20;

struct ShuffleLabel {
  enum class Direction { kForward, kReverse };

  int offset = 1;  // 1..20, a slot of the AP buffer
  Direction direction = Direction::kForward;

  std::string to_string() const;  // "17R", "5F"
  static std::optional<ShuffleLabel> parse(std::string_view text);

  friend bool operator==(const ShuffleLabel&, const ShuffleLabel&) = default;
};

struct ConverterRow {
  char input = 0;
  int digit = 0;
  std::string converted;  // exactly `digit` printable ASCII characters
  std::optional<ShuffleLabel> label;  // absent only on the first row

  friend bool operator==(const ConverterRow&, const ConverterRow&) = default;
};

// A credential's converter: one row per credential character. For login
// passwords the row digits sum to 20 and the rows assemble into the AP.
struct QuasiMatrix {
  ConverterKind kind = ConverterKind::kLoginName;
  std::vector<ConverterRow> rows;
  std::uint32_t attempt = 0;

  int digit_sum() const;
  std::string concatenated_strings() const;

  friend bool operator==(const QuasiMatrix&, const QuasiMatrix&) = default;
};

// Row digits in [1,5]. With a target, row j draws from
//   [max(1, R - 5(m-1)), min(5, R - (m-1))]
// where R is the remaining sum and m the rows left including j.
// Throws Error(kInfeasibleDigits) if the target cannot be met.
std::vector<int> derive_digits(Stream& stream, std::size_t n_rows,
                               std::optional<int> target_sum);

ConverterRow derive_row(Stream& stream, char input, int digit,
                        bool is_first_row);

// Consumes one stream: all digits first, then each row in credential order.
QuasiMatrix build_matrix(const MasterKey& key, const Nonce& nonce,
                         ConverterKind kind, std::string_view credential,
                         std::string_view imei, std::string_view imsi,
                         std::uint32_t attempt);

// Shuffles the LP rows into a 20-slot buffer. Row 1 fills forward from slot
// 1; every later row starts at its label offset and walks +1 (F) or -1 (R)
// modulo 20, skipping occupied slots. Requires kind LP and digit sum 20.
std::string assemble_ap(const QuasiMatrix& matrix);

struct GeneratedAp {
  QuasiMatrix matrix;
  std::string ap;
};

// First attempt whose assembled AP satisfies check_ap_policy.
GeneratedAp generate_ap(const MasterKey& key, const Nonce& nonce,
                        std::string_view login_password,
                        std::string_view imei, std::string_view imsi);

}  // namespace trident
