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
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "trident/account.hpp"
#include "trident/entropy.hpp"
#include "trident/keystream.hpp"
#include "trident/store.hpp"

namespace trident {

using SessionId = std::array<std::uint8_t, 16>;

enum class Stage { kAwaitLN, kAwaitLP, kAwaitAP, kGranted, kRejected };

enum class RejectReason {
  kLnMismatch,
  kLpMismatch,
  kApMismatch,
  kFieldRejected,
  kOrderViolation,
  kSessionExpired,
};

std::string_view stage_name(Stage stage);          // "AwaitLN", ...
std::string_view reject_reason_name(RejectReason reason);  // "LN_MISMATCH", ...

inline bool is_terminal(Stage stage) {
  return stage == Stage::kGranted || stage == Stage::kRejected;
}

// One login attempt from one device. Moves only along
// AwaitLN -> AwaitLP -> AwaitAP -> Granted, or to Rejected from any
// non-terminal stage.
class Session {
 public:
  const SessionId& id() const { return id_; }
  const DeviceProfile& device() const { return device_; }
  Stage stage() const { return stage_; }
  const std::optional<AccountId>& account_id() const { return account_id_; }
  const std::optional<RejectReason>& reject_reason() const {
    return reject_reason_;
  }

 private:
  friend class Gatekeeper;

  SessionId id_{};
  DeviceProfile device_;
  Stage stage_ = Stage::kAwaitLN;
  std::optional<AccountId> account_id_;
  std::optional<RejectReason> reject_reason_;
  // The login password is needed again to regenerate the AP at the final
  // stage. It lives only here, between the LP stage and finalize.
  std::optional<std::string> pending_password_;
  std::chrono::steady_clock::time_point last_activity_{};
};

struct StageResult {
  enum class Outcome { kAdvance, kReject };
  Outcome outcome = Outcome::kReject;
  Stage new_stage = Stage::kRejected;
};

// Registration and the three gatekeeper checks. The store is the only
// shared state; a Gatekeeper may be used by one thread at a time.
class Gatekeeper {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  struct Options {
    std::chrono::seconds session_idle_limit{300};
    Clock clock;  // defaults to steady_clock::now
  };

  Gatekeeper(MasterKey key, CredentialStore& store, EntropySource& entropy)
      : Gatekeeper(std::move(key), store, entropy, Options{}) {}
  Gatekeeper(MasterKey key, CredentialStore& store, EntropySource& entropy,
             Options options);

  // Normalizes and validates the credentials, derives all three
  // identifier associations and persists the record.
  AccountRecord register_account(const DeviceProfile& device,
                                 std::string_view raw_login_name,
                                 std::string_view login_password);

  Session begin_session(const DeviceProfile& device);

  StageResult submit_login_name(Session& session, std::string_view input);
  StageResult submit_login_password(Session& session, std::string_view input);
  const Session& finalize(Session& session);

  const MasterKey& key() const { return key_; }

 private:
  // Common prelude: terminal stages stay put, expired or out-of-order
  // sessions are rejected. Returns a result when the caller must stop.
  std::optional<StageResult> guard(Session& session, Stage expected);
  StageResult reject(Session& session, RejectReason reason);
  StageResult advance(Session& session, Stage next);

  MasterKey key_;
  CredentialStore& store_;
  EntropySource& entropy_;
  Options options_;
};

// Re-derives the plaintext identifiers of a registered account. Operator
// tooling only (attack harness, self-test); the login path never calls it.
struct DerivedIdentifiers {
  std::string ln_identifier;
  std::string lp_identifier;
  std::string ap;
};

DerivedIdentifiers rederive_identifiers(const MasterKey& key,
                                        const AccountRecord& record,
                                        const DeviceProfile& device,
                                        std::string_view login_name,
                                        std::string_view login_password);

}  // namespace trident
