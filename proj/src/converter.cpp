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

#include "trident/converter.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <stdexcept>

#include "trident/error.hpp"
#include "trident/policy.hpp"

namespace trident {

std::string ShuffleLabel::to_string() const {
  return std::to_string(offset) +
         (direction == Direction::kForward ? 'F' : 'R');
}

std::optional<ShuffleLabel> ShuffleLabel::parse(std::string_view text) {
  if (text.size() < 2 || text.size() > 3) return std::nullopt;
  const char dir = text.back();
  if (dir != 'F' && dir != 'R') return std::nullopt;
  const std::string_view number = text.substr(0, text.size() - 1);
  if (number.front() == '0') return std::nullopt;
  int offset = 0;
  const auto [ptr, ec] =
      std::from_chars(number.data(), number.data() + number.size(), offset);
  if (ec != std::errc{} || ptr != number.data() + number.size()) {
    return std::nullopt;
  }
  if (offset < 1 || offset > kMaxLabelOffset) return std::nullopt;
  return ShuffleLabel{offset, dir == 'F' ? Direction::kForward
                                         : Direction::kReverse};
}

int QuasiMatrix::digit_sum() const {
  int sum = 0;
  for (const auto& row : rows) sum += row.digit;
  return sum;
}

std::string QuasiMatrix::concatenated_strings() const {
  std::string out;
  for (const auto& row : rows) out += row.converted;
  return out;
}

std::vector<int> derive_digits(Stream& stream, std::size_t n_rows,
                               std::optional<int> target_sum) {
  if (n_rows == 0) throw std::invalid_argument("derive_digits: no rows");
  const auto rows = static_cast<int>(n_rows);
  if (target_sum &&
      (*target_sum < kMinDigit * rows || *target_sum > kMaxDigit * rows)) {
    throw Error(ErrorCode::kInfeasibleDigits,
                "digit target " + std::to_string(*target_sum) +
                    " is infeasible for " + std::to_string(rows) + " rows");
  }

  std::vector<int> digits;
  digits.reserve(n_rows);
  int remaining = target_sum.value_or(0);
  for (int j = 0; j < rows; ++j) {
    int lo = kMinDigit;
    int hi = kMaxDigit;
    if (target_sum) {
      const int left_after = rows - j - 1;
      lo = std::max(kMinDigit, remaining - kMaxDigit * left_after);
      hi = std::min(kMaxDigit, remaining - kMinDigit * left_after);
    }
    const auto d = static_cast<int>(stream.next_uint(lo, hi));
    digits.push_back(d);
    remaining -= d;
  }
  return digits;
}

ConverterRow derive_row(Stream& stream, char input, int digit,
                        bool is_first_row) {
  if (digit < kMinDigit || digit > kMaxDigit) {
    throw std::invalid_argument("derive_row: digit out of range");
  }
  ConverterRow row;
  row.input = input;
  row.digit = digit;
  row.converted.reserve(static_cast<std::size_t>(digit));
  for (int i = 0; i < digit; ++i) {
    row.converted.push_back(stream.next_char(printable_ascii()));
  }
  if (!is_first_row) {
    ShuffleLabel label;
    label.offset = static_cast<int>(stream.next_uint(1, kMaxLabelOffset));
    label.direction = stream.next_uint(0, 1) == 0
                          ? ShuffleLabel::Direction::kForward
                          : ShuffleLabel::Direction::kReverse;
    row.label = label;
  }
  return row;
}

QuasiMatrix build_matrix(const MasterKey& key, const Nonce& nonce,
                         ConverterKind kind, std::string_view credential,
                         std::string_view imei, std::string_view imsi,
                         std::uint32_t attempt) {
  if (credential.empty()) {
    throw std::invalid_argument("build_matrix: empty credential");
  }
  Stream stream(key, StreamContext{nonce, kind, std::string(credential),
                                   std::string(imei), std::string(imsi),
                                   attempt});
  const std::optional<int> target =
      kind == ConverterKind::kLoginPassword
          ? std::optional<int>(static_cast<int>(kApLength))
          : std::nullopt;
  const std::vector<int> digits =
      derive_digits(stream, credential.size(), target);

  QuasiMatrix matrix;
  matrix.kind = kind;
  matrix.attempt = attempt;
  matrix.rows.reserve(credential.size());
  for (std::size_t i = 0; i < credential.size(); ++i) {
    matrix.rows.push_back(derive_row(stream, credential[i], digits[i], i == 0));
  }
  return matrix;
}

std::string assemble_ap(const QuasiMatrix& matrix) {
  if (matrix.kind != ConverterKind::kLoginPassword ||
      matrix.digit_sum() != static_cast<int>(kApLength)) {
    throw std::invalid_argument(
        "assemble_ap: needs an LP converter with digit sum 20");
  }
  constexpr int kSlots = static_cast<int>(kApLength);
  std::array<char, kApLength> buffer{};
  std::array<bool, kApLength> occupied{};

  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    const ConverterRow& row = matrix.rows[r];
    int slot = 0;  // 0-based
    int step = 1;
    if (r > 0) {
      if (!row.label) {
        throw std::invalid_argument("assemble_ap: unlabeled row after row 1");
      }
      slot = row.label->offset - 1;
      step = row.label->direction == ShuffleLabel::Direction::kForward ? 1
                                                                       : -1;
    }
    for (char c : row.converted) {
      while (occupied[slot]) slot = (slot + step + kSlots) % kSlots;
      buffer[slot] = c;
      occupied[slot] = true;
      slot = (slot + step + kSlots) % kSlots;
    }
  }
  return std::string(buffer.begin(), buffer.end());
}

GeneratedAp generate_ap(const MasterKey& key, const Nonce& nonce,
                        std::string_view login_password,
                        std::string_view imei, std::string_view imsi) {
  for (std::uint32_t attempt = 0; attempt < kMaxDerivationAttempts;
       ++attempt) {
    QuasiMatrix matrix =
        build_matrix(key, nonce, ConverterKind::kLoginPassword,
                     login_password, imei, imsi, attempt);
    std::string ap = assemble_ap(matrix);
    if (check_ap_policy(ap)) return {std::move(matrix), std::move(ap)};
  }
  throw Error(ErrorCode::kDerivationExhausted,
              "no policy-compliant authentication password within 64 attempts");
}

}  // namespace trident
