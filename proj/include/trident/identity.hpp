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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "trident/converter.hpp"
#include "trident/crypto.hpp"
#include "trident/entropy.hpp"

namespace trident {

// Simulated smartphone. IMEI and IMSI are 15 ASCII digits each.
struct DeviceProfile {
  std::string imei;
  std::string imsi;
  std::string phone_number;

  // Throws Error(kInvalidDevice).
  void validate() const;

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

enum class IdentityKind { kLoginName, kLoginPassword, kAuthentication };

std::string_view identity_kind_tag(IdentityKind kind);  // "LN" / "LP" / "AP"
std::optional<IdentityKind> parse_identity_kind(std::string_view tag);

struct IdentityDigest {
  IdentityKind kind = IdentityKind::kLoginName;
  Digest digest{};

  friend bool operator==(const IdentityDigest&, const IdentityDigest&) = default;
};

// SHA-256 over the length-prefixed (kind tag, credential, imei, imsi). The
// credential is required for LN/LP and must be absent for AP, otherwise
// Error(kIdentityShape).
IdentityDigest combine_identity(IdentityKind kind,
                                std::optional<std::string_view> credential,
                                const DeviceProfile& device);

enum class Column { kChar, kDigit, kString, kLabel };

std::string_view column_name(Column column);  // "CHAR", "DIGIT", ...
std::optional<Column> parse_column(std::string_view name);

struct CellCoord {
  std::size_t row = 1;  // 1-based
  Column col = Column::kChar;

  friend bool operator==(const CellCoord&, const CellCoord&) = default;
};

struct RowSelection {
  std::size_t row = 1;
  friend bool operator==(const RowSelection&, const RowSelection&) = default;
};

struct ColumnSelection {
  Column column = Column::kString;  // never kChar
  friend bool operator==(const ColumnSelection&,
                         const ColumnSelection&) = default;
};

struct CellSelection {
  std::vector<CellCoord> cells;  // 3..6 distinct coordinates
  friend bool operator==(const CellSelection&, const CellSelection&) = default;
};

using SelectionDescriptor =
    std::variant<RowSelection, ColumnSelection, CellSelection>;

inline constexpr std::size_t kMinSelectedCells = 3;
inline constexpr std::size_t kMaxSelectedCells = 6;
inline constexpr int kMaxSelectionRetries = 64;

// Shape check independent of any matrix. Returns an error message or
// nothing.
std::optional<std::string> descriptor_shape_error(const SelectionDescriptor& d);

// Throws Error(kCellOutOfRange) for row 0, a row past the end, or a LABEL
// cell on an unlabeled row.
std::string render_cell(const QuasiMatrix& matrix, CellCoord cell);

// ROW: CHAR, DIGIT, STRING, LABEL of one row. COLUMN: that column top to
// bottom (unlabeled rows contribute nothing to LABEL). CELLS: each cell in
// listed order.
std::string render_identifier(const QuasiMatrix& matrix,
                              const SelectionDescriptor& descriptor);

// Random row, column or cell combination whose rendering contains at least
// one character the login fields forbid. Cell combinations always include a
// STRING cell. Throws Error(kSelectionExhausted) after 64 failed draws.
SelectionDescriptor draw_selection(EntropySource& entropy,
                                   const QuasiMatrix& matrix);

struct IdentifierCommitment {
  std::array<std::uint8_t, 16> salt{};
  Digest commitment{};  // SHA-256(salt || identifier)

  friend bool operator==(const IdentifierCommitment&,
                         const IdentifierCommitment&) = default;
};

IdentifierCommitment commit_identifier(EntropySource& entropy,
                                       std::string_view identifier);

bool verify_commitment(std::string_view identifier,
                       const IdentifierCommitment& commitment);

}  // namespace trident
