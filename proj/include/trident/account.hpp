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

#include "trident/identity.hpp"
#include "trident/keystream.hpp"

namespace trident {

using AccountId = std::array<std::uint8_t, 16>;

// Everything the server keeps about one account. No plaintext credential,
// identifier or authentication password is ever stored here.
struct AccountRecord {
  AccountId account_id{};
  Nonce nonce{};

  IdentityDigest ln_identity;
  SelectionDescriptor ln_descriptor;
  IdentifierCommitment ln_commitment;
  std::uint32_t ln_attempt = 0;

  IdentityDigest lp_identity;
  SelectionDescriptor lp_descriptor;
  IdentifierCommitment lp_commitment;
  std::uint32_t lp_attempt = 0;  // also the attempt that produced the AP

  IdentityDigest ap_identity;
  IdentifierCommitment ap_commitment;

  friend bool operator==(const AccountRecord&, const AccountRecord&) = default;
};

}  // namespace trident
