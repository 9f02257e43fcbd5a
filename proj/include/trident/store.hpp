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

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trident/account.hpp"

namespace trident {

inline constexpr int kStoreVersion = 1;

// Store file:
//   {"version":1,"records":[{...AccountRecord fields...}]}
// Binary values are lowercase hex. Identity digests are
// {"kind","digest"}, commitments {"salt","commitment"}, descriptors
// {"mode":"ROW","row_index"} | {"mode":"COLUMN","column"} |
// {"mode":"CELLS","cells":[{"row","col"}...]}. Parsing is strict: unknown
// or missing fields, a wrong version or duplicate LN identities raise
// Error(kCorruptStore).
std::string serialize_store(std::span<const AccountRecord> records);
std::vector<AccountRecord> parse_store(std::string_view text);

// Points in put_account's write path at which a test hook may simulate a
// crash by throwing.
enum class WritePhase {
  kTempOpened,
  kTempHalfWritten,
  kTempWritten,
  kRenamed,
};

// Desk-scale account database indexed by LN identity digest and account id.
// One writer at a time: put_account holds an exclusive flock on
// "<path>.lock" across the temp-file write and rename.
class CredentialStore {
 public:
  using FaultHook = std::function<void(WritePhase)>;

  // A missing file yields an empty store that is created on first write.
  static CredentialStore open(const std::filesystem::path& path);

  // Never touches the filesystem.
  static CredentialStore in_memory();

  // Throws Error(kDuplicateIdentity) if the LN identity or account id is
  // already present. The in-memory index only changes after the file has
  // been replaced.
  void put_account(const AccountRecord& record);

  std::optional<AccountRecord> get_by_ln_digest(const Digest& digest) const;
  std::optional<AccountRecord> get_by_account_id(const AccountId& id) const;

  std::span<const AccountRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const std::optional<std::filesystem::path>& path() const { return path_; }

  void set_fault_hook(FaultHook hook) { fault_hook_ = std::move(hook); }

 private:
  CredentialStore() = default;
  void index(std::size_t position);
  void persist(std::span<const AccountRecord> records) const;

  std::optional<std::filesystem::path> path_;
  std::vector<AccountRecord> records_;
  std::unordered_map<std::string, std::size_t> by_ln_digest_;
  std::unordered_map<std::string, std::size_t> by_account_id_;
  FaultHook fault_hook_;
};

}  // namespace trident
