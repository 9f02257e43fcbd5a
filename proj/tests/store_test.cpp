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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "test_support.hpp"
#include "trident/error.hpp"

namespace trident {
namespace {

namespace fs = std::filesystem;

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("trident-store-test-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    path_ = dir_ / "store.json";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string read_file() const {
    std::ifstream in(path_);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  void write_file(const std::string& text) const {
    std::ofstream(path_, std::ios::trunc) << text;
  }

  fs::path dir_;
  fs::path path_;
};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST_F(StoreTest, MissingFileIsEmpty) {
  const CredentialStore store = CredentialStore::open(path_);
  EXPECT_EQ(store.size(), 0u);
  EXPECT_FALSE(fs::exists(path_));
}

TEST_F(StoreTest, PutGetAndReopen) {
  SeededEntropy e(1);
  CredentialStore store = CredentialStore::open(path_);
  std::vector<AccountRecord> recs;
  for (int i = 0; i < 3; ++i) {
    recs.push_back(testing::random_record(e));
    store.put_account(recs.back());
  }
  EXPECT_EQ(store.get_by_ln_digest(recs[1].ln_identity.digest), recs[1]);
  EXPECT_EQ(store.get_by_account_id(recs[2].account_id), recs[2]);

  const CredentialStore reopened = CredentialStore::open(path_);
  ASSERT_EQ(reopened.size(), 3u);
  for (const auto& r : recs) {
    EXPECT_EQ(reopened.get_by_ln_digest(r.ln_identity.digest), r);
  }
}

TEST_F(StoreTest, LookupIsByteExact) {
  SeededEntropy e(2);
  CredentialStore store = CredentialStore::in_memory();
  const AccountRecord r = testing::random_record(e);
  store.put_account(r);
  Digest near = r.ln_identity.digest;
  near[31] ^= 0x01;
  EXPECT_FALSE(store.get_by_ln_digest(near));
  EXPECT_FALSE(store.get_by_ln_digest(Digest{}));
}

TEST_F(StoreTest, DuplicateIdentityRejected) {
  SeededEntropy e(3);
  CredentialStore store = CredentialStore::open(path_);
  const AccountRecord r = testing::random_record(e);
  store.put_account(r);
  AccountRecord again = testing::random_record(e);
  again.ln_identity = r.ln_identity;
  EXPECT_EQ(code_of([&] { store.put_account(again); }),
            ErrorCode::kDuplicateIdentity);
  EXPECT_EQ(CredentialStore::open(path_).size(), 1u);
}

TEST_F(StoreTest, DuplicateDigestInFileIsCorrupt) {
  SeededEntropy e(4);
  AccountRecord a = testing::random_record(e);
  AccountRecord b = testing::random_record(e);
  b.ln_identity = a.ln_identity;
  const std::vector<AccountRecord> both = {a, b};
  write_file(serialize_store(both));
  EXPECT_EQ(code_of([&] { CredentialStore::open(path_); }),
            ErrorCode::kCorruptStore);
}

TEST_F(StoreTest, StrictParsing) {
  SeededEntropy e(5);
  const std::vector<AccountRecord> one = {testing::random_record(e)};
  const auto doc = nlohmann::json::parse(serialize_store(one));

  auto corrupt_with = [&](auto&& mutate) {
    nlohmann::json d = doc;
    mutate(d);
    return code_of([&] { parse_store(d.dump()); });
  };
  EXPECT_EQ(corrupt_with([](auto& d) { d["version"] = 2; }),
            ErrorCode::kCorruptStore);
  EXPECT_EQ(corrupt_with([](auto& d) { d["extra"] = 1; }),
            ErrorCode::kCorruptStore);
  EXPECT_EQ(corrupt_with([](auto& d) { d["records"][0]["note"] = "x"; }),
            ErrorCode::kCorruptStore);
  EXPECT_EQ(corrupt_with([](auto& d) { d["records"][0].erase("nonce"); }),
            ErrorCode::kCorruptStore);
  EXPECT_EQ(corrupt_with([](auto& d) { d["records"][0]["nonce"] = "ABCD"; }),
            ErrorCode::kCorruptStore);
  EXPECT_EQ(corrupt_with([](auto& d) {
              d["records"][0]["ln_identity"]["kind"] = "LP";
            }),
            ErrorCode::kCorruptStore);
  EXPECT_EQ(corrupt_with([](auto& d) {
              d["records"][0]["ln_descriptor"] = {{"mode", "COLUMN"},
                                                  {"column", "CHAR"}};
            }),
            ErrorCode::kCorruptStore);
  EXPECT_EQ(corrupt_with([](auto& d) { d["records"][0]["lp_attempt"] = 64; }),
            ErrorCode::kCorruptStore);
  EXPECT_EQ(code_of([] { parse_store("{not json"); }), ErrorCode::kCorruptStore);
  EXPECT_NO_THROW(parse_store(doc.dump()));
}

TEST_F(StoreTest, HexFieldsAreLowercase) {
  SeededEntropy e(6);
  const std::vector<AccountRecord> one = {testing::random_record(e)};
  auto d = nlohmann::json::parse(serialize_store(one));
  const std::string id = d["records"][0]["account_id"];
  EXPECT_EQ(id, to_hex(one[0].account_id));
  std::string upper = id;
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  d["records"][0]["account_id"] = upper;
  if (upper != id) {
    EXPECT_THROW(parse_store(d.dump()), Error);
  }
}

TEST_F(StoreTest, RoundTripRandomStores) {
  SeededEntropy e(7);
  for (int i = 0; i < 100; ++i) {
    std::vector<AccountRecord> recs(e.uniform(0, 8));
    for (auto& r : recs) r = testing::random_record(e);
    const std::string text = serialize_store(recs);
    ASSERT_EQ(parse_store(text), recs);
    ASSERT_EQ(serialize_store(parse_store(text)), text);
  }
}

class CrashAt : public std::runtime_error {
 public:
  CrashAt() : std::runtime_error("simulated crash") {}
};

TEST_F(StoreTest, CrashAtAnyPhaseLeavesCompleteState) {
  for (WritePhase phase : {WritePhase::kTempOpened, WritePhase::kTempHalfWritten,
                           WritePhase::kTempWritten, WritePhase::kRenamed}) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    SeededEntropy e(8);
    const AccountRecord first = testing::random_record(e);
    const AccountRecord second = testing::random_record(e);
    {
      CredentialStore store = CredentialStore::open(path_);
      store.put_account(first);
    }
    const std::string before = read_file();

    CredentialStore store = CredentialStore::open(path_);
    store.set_fault_hook([phase](WritePhase p) {
      if (p == phase) throw CrashAt();
    });
    EXPECT_THROW(store.put_account(second), CrashAt);

    const CredentialStore after = CredentialStore::open(path_);
    if (phase == WritePhase::kRenamed) {
      EXPECT_EQ(after.size(), 2u);
    } else {
      EXPECT_EQ(read_file(), before);
      EXPECT_EQ(after.size(), 1u);
      // The in-memory view did not move ahead of the file.
      EXPECT_EQ(store.size(), 1u);
      EXPECT_FALSE(store.get_by_ln_digest(second.ln_identity.digest));
    }
  }
}

}  // namespace
}  // namespace trident
