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

#include "trident/identity.hpp"

#include <algorithm>
#include <stdexcept>

#include "trident/error.hpp"
#include "trident/policy.hpp"

namespace trident {

namespace {

bool is_fifteen_digits(std::string_view s) {
  return s.size() == 15 && std::all_of(s.begin(), s.end(), [](char c) {
           return c >= '0' && c <= '9';
         });
}

bool field_safe(std::string_view text) {
  return std::all_of(text.begin(), text.end(), is_field_char);
}

}  // namespace

void DeviceProfile::validate() const {
  if (!is_fifteen_digits(imei)) {
    throw Error(ErrorCode::kInvalidDevice, "IMEI must be 15 digits");
  }
  if (!is_fifteen_digits(imsi)) {
    throw Error(ErrorCode::kInvalidDevice, "IMSI must be 15 digits");
  }
}

std::string_view identity_kind_tag(IdentityKind kind) {
  switch (kind) {
    case IdentityKind::kLoginName: return "LN";
    case IdentityKind::kLoginPassword: return "LP";
    case IdentityKind::kAuthentication: return "AP";
  }
  return "";
}

std::optional<IdentityKind> parse_identity_kind(std::string_view tag) {
  if (tag == "LN") return IdentityKind::kLoginName;
  if (tag == "LP") return IdentityKind::kLoginPassword;
  if (tag == "AP") return IdentityKind::kAuthentication;
  return std::nullopt;
}

IdentityDigest combine_identity(IdentityKind kind,
                                std::optional<std::string_view> credential,
                                const DeviceProfile& device) {
  const bool needs_credential = kind != IdentityKind::kAuthentication;
  if (needs_credential != credential.has_value()) {
    throw Error(ErrorCode::kIdentityShape,
                needs_credential ? "LN/LP identities need a credential"
                                 : "the AP identity is device-only");
  }
  Bytes encoded;
  append_field(encoded, identity_kind_tag(kind));
  append_field(encoded, credential.value_or(std::string_view{}));
  append_field(encoded, device.imei);
  append_field(encoded, device.imsi);
  return IdentityDigest{kind, sha256(encoded)};
}

std::string_view column_name(Column column) {
  switch (column) {
    case Column::kChar: return "CHAR";
    case Column::kDigit: return "DIGIT";
    case Column::kString: return "STRING";
    case Column::kLabel: return "LABEL";
  }
  return "";
}

std::optional<Column> parse_column(std::string_view name) {
  for (Column c : {Column::kChar, Column::kDigit, Column::kString,
                   Column::kLabel}) {
    if (column_name(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<std::string> descriptor_shape_error(
    const SelectionDescriptor& d) {
  if (const auto* row = std::get_if<RowSelection>(&d)) {
    if (row->row == 0) return "ROW index is 1-based";
  } else if (const auto* col = std::get_if<ColumnSelection>(&d)) {
    if (col->column == Column::kChar) return "COLUMN may not select CHAR";
  } else {
    const auto& cells = std::get<CellSelection>(d).cells;
    if (cells.size() < kMinSelectedCells || cells.size() > kMaxSelectedCells) {
      return "CELLS needs 3-6 coordinates";
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].row == 0) return "CELLS rows are 1-based";
      for (std::size_t j = 0; j < i; ++j) {
        if (cells[i] == cells[j]) return "CELLS contains a duplicate";
      }
    }
  }
  return std::nullopt;
}

std::string render_cell(const QuasiMatrix& matrix, CellCoord cell) {
  if (cell.row == 0 || cell.row > matrix.rows.size()) {
    throw Error(ErrorCode::kCellOutOfRange,
                "row " + std::to_string(cell.row) + " is outside the matrix");
  }
  const ConverterRow& row = matrix.rows[cell.row - 1];
  switch (cell.col) {
    case Column::kChar: return std::string(1, row.input);
    case Column::kDigit: return std::to_string(row.digit);
    case Column::kString: return row.converted;
    case Column::kLabel:
      if (!row.label) {
        throw Error(ErrorCode::kCellOutOfRange,
                    "row " + std::to_string(cell.row) + " has no label");
      }
      return row.label->to_string();
  }
  return {};
}

std::string render_identifier(const QuasiMatrix& matrix,
                              const SelectionDescriptor& descriptor) {
  if (auto err = descriptor_shape_error(descriptor)) {
    throw Error(ErrorCode::kCellOutOfRange, *err);
  }
  std::string out;
  if (const auto* sel = std::get_if<RowSelection>(&descriptor)) {
    if (sel->row > matrix.rows.size()) {
      throw Error(ErrorCode::kCellOutOfRange,
                  "row " + std::to_string(sel->row) + " is outside the matrix");
    }
    const ConverterRow& row = matrix.rows[sel->row - 1];
    out.push_back(row.input);
    out += std::to_string(row.digit);
    out += row.converted;
    if (row.label) out += row.label->to_string();
  } else if (const auto* sel = std::get_if<ColumnSelection>(&descriptor)) {
    for (std::size_t r = 1; r <= matrix.rows.size(); ++r) {
      if (sel->column == Column::kLabel && !matrix.rows[r - 1].label) continue;
      out += render_cell(matrix, {r, sel->column});
    }
  } else {
    for (const CellCoord& cell : std::get<CellSelection>(descriptor).cells) {
      out += render_cell(matrix, cell);
    }
  }
  return out;
}

namespace {

SelectionDescriptor draw_candidate(EntropySource& entropy,
                                   const QuasiMatrix& matrix) {
  const std::size_t n = matrix.rows.size();
  switch (entropy.uniform(0, 2)) {
    case 0:
      return RowSelection{static_cast<std::size_t>(entropy.uniform(1, n))};
    case 1: {
      static constexpr Column kColumns[] = {Column::kDigit, Column::kString,
                                            Column::kLabel};
      return ColumnSelection{kColumns[entropy.uniform(0, 2)]};
    }
    default: {
      std::vector<CellCoord> pool;
      for (std::size_t r = 1; r <= n; ++r) {
        for (Column c : {Column::kChar, Column::kDigit, Column::kString,
                         Column::kLabel}) {
          if (c == Column::kLabel && !matrix.rows[r - 1].label) continue;
          pool.push_back({r, c});
        }
      }
      const std::size_t k = std::min<std::size_t>(
          entropy.uniform(kMinSelectedCells, kMaxSelectedCells), pool.size());
      // Partial Fisher-Yates keeps the picks distinct and in draw order.
      for (std::size_t i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(entropy.uniform(i, pool.size() - 1));
        std::swap(pool[i], pool[j]);
      }
      pool.resize(k);
      return CellSelection{std::move(pool)};
    }
  }
}

bool acceptable(const QuasiMatrix& matrix, const SelectionDescriptor& d) {
  if (descriptor_shape_error(d)) return false;
  if (const auto* cells = std::get_if<CellSelection>(&d)) {
    const bool has_string =
        std::any_of(cells->cells.begin(), cells->cells.end(),
                    [](const CellCoord& c) { return c.col == Column::kString; });
    if (!has_string) return false;
  }
  const std::string identifier = render_identifier(matrix, d);
  return !identifier.empty() && !field_safe(identifier);
}

}  // namespace

SelectionDescriptor draw_selection(EntropySource& entropy,
                                   const QuasiMatrix& matrix) {
  if (matrix.rows.empty()) {
    throw std::invalid_argument("draw_selection: empty matrix");
  }
  for (int i = 0; i < kMaxSelectionRetries; ++i) {
    SelectionDescriptor d = draw_candidate(entropy, matrix);
    if (acceptable(matrix, d)) return d;
  }
  throw Error(ErrorCode::kSelectionExhausted,
              "no field-rejected identifier within 64 selection draws");
}

IdentifierCommitment commit_identifier(EntropySource& entropy,
                                       std::string_view identifier) {
  if (identifier.empty()) {
    throw std::invalid_argument("commit_identifier: empty identifier");
  }
  IdentifierCommitment out;
  out.salt = entropy.bytes<16>();
  Bytes buf(out.salt.begin(), out.salt.end());
  const auto id = as_bytes(identifier);
  buf.insert(buf.end(), id.begin(), id.end());
  out.commitment = sha256(buf);
  return out;
}

bool verify_commitment(std::string_view identifier,
                       const IdentifierCommitment& commitment) {
  Bytes buf(commitment.salt.begin(), commitment.salt.end());
  const auto id = as_bytes(identifier);
  buf.insert(buf.end(), id.begin(), id.end());
  const Digest actual = sha256(buf);
  return constant_time_equal(actual, commitment.commitment);
}

}  // namespace trident
