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

#include "trident/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "trident/error.hpp"

namespace trident {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptStore, "corrupt store: " + what);
}

ordered_json identity_to_json(const IdentityDigest& id) {
  return {{"kind", identity_kind_tag(id.kind)}, {"digest", to_hex(id.digest)}};
}

ordered_json commitment_to_json(const IdentifierCommitment& c) {
  return {{"salt", to_hex(c.salt)}, {"commitment", to_hex(c.commitment)}};
}

ordered_json descriptor_to_json(const SelectionDescriptor& d) {
  if (const auto* row = std::get_if<RowSelection>(&d)) {
    return {{"mode", "ROW"}, {"row_index", row->row}};
  }
  if (const auto* col = std::get_if<ColumnSelection>(&d)) {
    return {{"mode", "COLUMN"}, {"column", column_name(col->column)}};
  }
  ordered_json cells = ordered_json::array();
  for (const CellCoord& c : std::get<CellSelection>(d).cells) {
    cells.push_back({{"row", c.row}, {"col", column_name(c.col)}});
  }
  return {{"mode", "CELLS"}, {"cells", std::move(cells)}};
}

ordered_json record_to_json(const AccountRecord& r) {
  ordered_json j;
  j["account_id"] = to_hex(r.account_id);
  j["nonce"] = to_hex(r.nonce);
  j["ln_identity"] = identity_to_json(r.ln_identity);
  j["ln_descriptor"] = descriptor_to_json(r.ln_descriptor);
  j["ln_commitment"] = commitment_to_json(r.ln_commitment);
  j["ln_attempt"] = r.ln_attempt;
  j["lp_identity"] = identity_to_json(r.lp_identity);
  j["lp_descriptor"] = descriptor_to_json(r.lp_descriptor);
  j["lp_commitment"] = commitment_to_json(r.lp_commitment);
  j["lp_attempt"] = r.lp_attempt;
  j["ap_identity"] = identity_to_json(r.ap_identity);
  j["ap_commitment"] = commitment_to_json(r.ap_commitment);
  return j;
}

// Requires `j` to be an object with exactly `keys`.
void expect_keys(const json& j, std::initializer_list<const char*> keys,
                 const std::string& where) {
  if (!j.is_object()) corrupt(where + " is not an object");
  if (j.size() != keys.size()) corrupt(where + " has unexpected fields");
  for (const char* k : keys) {
    if (!j.contains(k)) corrupt(where + " is missing '" + k + "'");
  }
}

const std::string& get_string(const json& j, const char* key,
                              const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_string()) corrupt(where + "." + key + " is not a string");
  return v.get_ref<const std::string&>();
}

std::uint64_t get_uint(const json& j, const char* key,
                       const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_unsigned()) {
    corrupt(where + "." + key + " is not a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

template <std::size_t N>
std::array<std::uint8_t, N> get_hex(const json& j, const char* key,
                                    const std::string& where) {
  const std::string& s = get_string(j, key, where);
  for (char c : s) {
    if ((c < '0' || c > '9') && (c < 'a' || c > 'f')) {
      corrupt(where + "." + key + " is not lowercase hex");
    }
  }
  try {
    return fixed_from_hex<N>(s);
  } catch (const std::invalid_argument&) {
    corrupt(where + "." + key + " has the wrong length");
  }
}

IdentityDigest identity_from_json(const json& j, IdentityKind expected,
                                  const std::string& where) {
  expect_keys(j, {"kind", "digest"}, where);
  const auto kind = parse_identity_kind(get_string(j, "kind", where));
  if (!kind || *kind != expected) corrupt(where + ".kind is wrong");
  return {*kind, get_hex<32>(j, "digest", where)};
}

IdentifierCommitment commitment_from_json(const json& j,
                                          const std::string& where) {
  expect_keys(j, {"salt", "commitment"}, where);
  return {get_hex<16>(j, "salt", where), get_hex<32>(j, "commitment", where)};
}

Column column_from_json(const json& j, const char* key,
                        const std::string& where) {
  const auto col = parse_column(get_string(j, key, where));
  if (!col) corrupt(where + "." + key + " is not a column name");
  return *col;
}

SelectionDescriptor descriptor_from_json(const json& j,
                                         const std::string& where) {
  if (!j.is_object() || !j.contains("mode")) corrupt(where + " has no mode");
  const std::string& mode = get_string(j, "mode", where);
  SelectionDescriptor d;
  if (mode == "ROW") {
    expect_keys(j, {"mode", "row_index"}, where);
    d = RowSelection{static_cast<std::size_t>(get_uint(j, "row_index", where))};
  } else if (mode == "COLUMN") {
    expect_keys(j, {"mode", "column"}, where);
    d = ColumnSelection{column_from_json(j, "column", where)};
  } else if (mode == "CELLS") {
    expect_keys(j, {"mode", "cells"}, where);
    const json& cells = j.at("cells");
    if (!cells.is_array()) corrupt(where + ".cells is not an array");
    CellSelection sel;
    for (const json& c : cells) {
      expect_keys(c, {"row", "col"}, where + ".cells[]");
      sel.cells.push_back(
          {static_cast<std::size_t>(get_uint(c, "row", where + ".cells[]")),
           column_from_json(c, "col", where + ".cells[]")});
    }
    d = std::move(sel);
  } else {
    corrupt(where + " has unknown mode '" + mode + "'");
  }
  if (auto err = descriptor_shape_error(d)) corrupt(where + ": " + *err);
  return d;
}

std::uint32_t attempt_from_json(const json& j, const char* key,
                                const std::string& where) {
  const std::uint64_t v = get_uint(j, key, where);
  if (v >= kMaxDerivationAttempts) corrupt(where + "." + key + " out of range");
  return static_cast<std::uint32_t>(v);
}

AccountRecord record_from_json(const json& j, std::size_t index) {
  const std::string where = "records[" + std::to_string(index) + "]";
  expect_keys(j,
              {"account_id", "nonce", "ln_identity", "ln_descriptor",
               "ln_commitment", "ln_attempt", "lp_identity", "lp_descriptor",
               "lp_commitment", "lp_attempt", "ap_identity", "ap_commitment"},
              where);
  AccountRecord r;
  r.account_id = get_hex<16>(j, "account_id", where);
  r.nonce = get_hex<16>(j, "nonce", where);
  r.ln_identity = identity_from_json(j.at("ln_identity"),
                                     IdentityKind::kLoginName,
                                     where + ".ln_identity");
  r.ln_descriptor = descriptor_from_json(j.at("ln_descriptor"),
                                         where + ".ln_descriptor");
  r.ln_commitment = commitment_from_json(j.at("ln_commitment"),
                                         where + ".ln_commitment");
  r.ln_attempt = attempt_from_json(j, "ln_attempt", where);
  r.lp_identity = identity_from_json(j.at("lp_identity"),
                                     IdentityKind::kLoginPassword,
                                     where + ".lp_identity");
  r.lp_descriptor = descriptor_from_json(j.at("lp_descriptor"),
                                         where + ".lp_descriptor");
  r.lp_commitment = commitment_from_json(j.at("lp_commitment"),
                                         where + ".lp_commitment");
  r.lp_attempt = attempt_from_json(j, "lp_attempt", where);
  r.ap_identity = identity_from_json(j.at("ap_identity"),
                                     IdentityKind::kAuthentication,
                                     where + ".ap_identity");
  r.ap_commitment = commitment_from_json(j.at("ap_commitment"),
                                         where + ".ap_commitment");
  return r;
}

std::string key_of(std::span<const std::uint8_t> bytes) {
  return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

class FileDescriptor {
 public:
  explicit FileDescriptor(int fd) : fd_(fd) {}
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  ~FileDescriptor() {
    if (fd_ >= 0) ::close(fd_);
  }
  int get() const { return fd_; }

 private:
  int fd_;
};

[[noreturn]] void io_error(const std::string& what) {
  throw Error(ErrorCode::kIo, what + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_error("write failed");
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string serialize_store(std::span<const AccountRecord> records) {
  ordered_json doc;
  doc["version"] = kStoreVersion;
  doc["records"] = ordered_json::array();
  for (const AccountRecord& r : records) {
    doc["records"].push_back(record_to_json(r));
  }
  return doc.dump(2) + "\n";
}

std::vector<AccountRecord> parse_store(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    corrupt(std::string("not valid JSON (") + e.what() + ")");
  }
  expect_keys(doc, {"version", "records"}, "document");
  if (!doc.at("version").is_number_integer() ||
      doc.at("version").get<std::int64_t>() != kStoreVersion) {
    corrupt("unsupported version");
  }
  const json& records = doc.at("records");
  if (!records.is_array()) corrupt("records is not an array");

  std::vector<AccountRecord> out;
  out.reserve(records.size());
  std::set<std::string> ln_seen;
  std::set<std::string> id_seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    AccountRecord r = record_from_json(records[i], i);
    if (!ln_seen.insert(key_of(r.ln_identity.digest)).second) {
      corrupt("duplicate ln_identity at records[" + std::to_string(i) + "]");
    }
    if (!id_seen.insert(key_of(r.account_id)).second) {
      corrupt("duplicate account_id at records[" + std::to_string(i) + "]");
    }
    out.push_back(std::move(r));
  }
  return out;
}

CredentialStore CredentialStore::open(const std::filesystem::path& path) {
  CredentialStore store;
  store.path_ = path;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (std::filesystem::exists(path)) {
      throw Error(ErrorCode::kIo, "cannot read store " + path.string());
    }
    return store;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  store.records_ = parse_store(buf.str());
  for (std::size_t i = 0; i < store.records_.size(); ++i) store.index(i);
  return store;
}

CredentialStore CredentialStore::in_memory() { return CredentialStore(); }

void CredentialStore::index(std::size_t position) {
  const AccountRecord& r = records_[position];
  by_ln_digest_.emplace(key_of(r.ln_identity.digest), position);
  by_account_id_.emplace(key_of(r.account_id), position);
}

void CredentialStore::put_account(const AccountRecord& record) {
  if (by_ln_digest_.contains(key_of(record.ln_identity.digest))) {
    throw Error(ErrorCode::kDuplicateIdentity,
                "an account with this login name identity already exists");
  }
  if (by_account_id_.contains(key_of(record.account_id))) {
    throw Error(ErrorCode::kDuplicateIdentity, "account id already in use");
  }
  if (path_) {
    std::vector<AccountRecord> next = records_;
    next.push_back(record);
    persist(next);
  }
  records_.push_back(record);
  index(records_.size() - 1);
}

void CredentialStore::persist(std::span<const AccountRecord> records) const {
  const std::filesystem::path& target = *path_;
  const std::string lock_path = target.string() + ".lock";
  const std::string temp_path = target.string() + ".tmp";
  const std::string payload = serialize_store(records);

  FileDescriptor lock(::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC,
                             0600));
  if (lock.get() < 0) io_error("cannot open " + lock_path);
  if (::flock(lock.get(), LOCK_EX) != 0) io_error("cannot lock " + lock_path);

  {
    FileDescriptor temp(::open(temp_path.c_str(),
                               O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600));
    if (temp.get() < 0) io_error("cannot create " + temp_path);
    if (fault_hook_) fault_hook_(WritePhase::kTempOpened);
    const std::size_t half = payload.size() / 2;
    write_all(temp.get(), std::string_view(payload).substr(0, half));
    if (fault_hook_) fault_hook_(WritePhase::kTempHalfWritten);
    write_all(temp.get(), std::string_view(payload).substr(half));
    if (::fsync(temp.get()) != 0) io_error("fsync failed on " + temp_path);
  }
  if (fault_hook_) fault_hook_(WritePhase::kTempWritten);

  if (std::rename(temp_path.c_str(), target.c_str()) != 0) {
    io_error("cannot replace " + target.string());
  }
  const std::filesystem::path dir =
      target.has_parent_path() ? target.parent_path() : ".";
  FileDescriptor dir_fd(::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC));
  if (dir_fd.get() >= 0) ::fsync(dir_fd.get());
  if (fault_hook_) fault_hook_(WritePhase::kRenamed);
}

std::optional<AccountRecord> CredentialStore::get_by_ln_digest(
    const Digest& digest) const {
  const auto it = by_ln_digest_.find(key_of(digest));
  if (it == by_ln_digest_.end()) return std::nullopt;
  return records_[it->second];
}

std::optional<AccountRecord> CredentialStore::get_by_account_id(
    const AccountId& id) const {
  const auto it = by_account_id_.find(key_of(id));
  if (it == by_account_id_.end()) return std::nullopt;
  return records_[it->second];
}

}  // namespace trident
