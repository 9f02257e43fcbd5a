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

#include "trident/selftest.hpp"

#include <algorithm>
#include <map>

#include "trident/authsvc.hpp"
#include "trident/converter.hpp"
#include "trident/error.hpp"
#include "trident/policy.hpp"

namespace trident {

namespace {

std::string random_text(EntropySource& e, std::size_t min_len,
                        std::size_t max_len, std::string_view alphabet) {
  std::string s(e.uniform(min_len, max_len), ' ');
  for (char& c : s) c = alphabet[e.uniform(0, alphabet.size() - 1)];
  return s;
}

constexpr std::string_view kFieldAlphabet =
    "abcdefghijklmnopqrstuvwxyz0123456789";

std::string random_digits(EntropySource& e) {
  return random_text(e, 15, 15, "0123456789");
}

struct Fixture {
  DeviceProfile device;
  std::string login_name;
  std::string login_password;
  AccountRecord record;
};

std::string mutate_one(EntropySource& e, const std::string& s,
                       std::string_view alphabet) {
  std::string out = s;
  const auto i = e.uniform(0, s.size() - 1);
  while (out[i] == s[i]) out[i] = alphabet[e.uniform(0, alphabet.size() - 1)];
  return out;
}

enum class Flow { kGranted, kRejectedAtLN, kRejectedAtLP, kRejectedAtAP };

Flow run_flow(Gatekeeper& gk, const DeviceProfile& device,
              std::string_view name, std::string_view password) {
  Session s = gk.begin_session(device);
  if (gk.submit_login_name(s, name).outcome != StageResult::Outcome::kAdvance) {
    return Flow::kRejectedAtLN;
  }
  if (gk.submit_login_password(s, password).outcome !=
      StageResult::Outcome::kAdvance) {
    return Flow::kRejectedAtLP;
  }
  return gk.finalize(s).stage() == Stage::kGranted ? Flow::kGranted
                                                   : Flow::kRejectedAtAP;
}

}  // namespace

std::vector<CheckResult> run_selftest(const MasterKey& key, std::uint64_t seed,
                                      std::size_t trials) {
  SeededEntropy entropy(seed);
  std::map<std::string, CheckResult> checks;
  auto record = [&](const std::string& name, bool ok) {
    CheckResult& c = checks[name];
    c.name = name;
    ++c.total;
    if (ok) ++c.passed;
  };

  // Keystream.
  for (std::size_t t = 0; t < trials; ++t) {
    StreamContext ctx{entropy.bytes<16>(),
                      t % 2 ? ConverterKind::kLoginName
                            : ConverterKind::kLoginPassword,
                      random_text(entropy, 5, 15, kFieldAlphabet),
                      random_digits(entropy), random_digits(entropy),
                      static_cast<std::uint32_t>(entropy.uniform(0, 63))};
    Stream a(key, ctx);
    Stream b(key, ctx);
    bool same = true;
    std::array<std::uint8_t, 32> first{};
    for (int i = 0; i < 32; ++i) {
      first[i] = a.next_byte();
      same = same && first[i] == b.next_byte();
    }
    record("keystream determinism", same);

    StreamContext flipped = ctx;
    flipped.credential = mutate_one(entropy, ctx.credential, kFieldAlphabet);
    Stream c(key, flipped);
    bool differs = false;
    for (int i = 0; i < 32; ++i) differs = differs || c.next_byte() != first[i];
    record("keystream sensitivity", differs);
  }
  {
    Stream s(key, StreamContext{});
    std::array<int, 5> counts{};
    for (int i = 0; i < 10000; ++i) ++counts[s.next_uint(1, 5) - 1];
    record("keystream uniformity",
           std::all_of(counts.begin(), counts.end(),
                       [](int n) { return n >= 1800 && n <= 2200; }));
  }

  // Registration population.
  CredentialStore store = CredentialStore::in_memory();
  Gatekeeper gk(key, store, entropy);
  std::vector<Fixture> fixtures;
  while (fixtures.size() < trials) {
    Fixture f;
    f.device = {random_digits(entropy), random_digits(entropy), "+1555"};
    f.login_name = random_text(entropy, 5, 15, kFieldAlphabet);
    f.login_password = random_text(entropy, 5, 15, kFieldAlphabet);
    try {
      f.record = gk.register_account(f.device, f.login_name, f.login_password);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kDuplicateIdentity) continue;
      throw;
    }
    fixtures.push_back(std::move(f));
  }

  for (const Fixture& f : fixtures) {
    const DerivedIdentifiers ids = rederive_identifiers(
        key, f.record, f.device, f.login_name, f.login_password);
    const QuasiMatrix lp =
        build_matrix(key, f.record.nonce, ConverterKind::kLoginPassword,
                     f.login_password, f.device.imei, f.device.imsi,
                     f.record.lp_attempt);

    bool rows_ok = lp.digit_sum() == 20;
    for (const auto& row : lp.rows) {
      rows_ok = rows_ok && static_cast<int>(row.converted.size()) == row.digit;
    }
    record("converter row digits", rows_ok);

    std::string a = ids.ap, b = lp.concatenated_strings();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    record("AP is a permutation of row strings", a == b);
    record("AP policy", check_ap_policy(ids.ap));

    bool gated = true;
    for (const std::string* s : {&ids.ln_identifier, &ids.lp_identifier, &ids.ap}) {
      gated = gated && !field_accepts(FieldKind::kLoginName, *s) &&
              !field_accepts(FieldKind::kLoginPassword, *s);
    }
    record("fields reject identifiers and APs", gated);

    record("stored commitments re-verify",
           verify_commitment(ids.ln_identifier, f.record.ln_commitment) &&
               verify_commitment(ids.lp_identifier, f.record.lp_commitment) &&
               verify_commitment(ids.ap, f.record.ap_commitment));

    const std::string n1 = normalize_login_name(f.login_name);
    record("login name normalization idempotent",
           normalize_login_name(n1) == n1);

    record("honest flow granted",
           run_flow(gk, f.device, f.login_name, f.login_password) ==
               Flow::kGranted);

    DeviceProfile other_imei = f.device;
    other_imei.imei = mutate_one(entropy, f.device.imei, "0123456789");
    DeviceProfile other_imsi = f.device;
    other_imsi.imsi = mutate_one(entropy, f.device.imsi, "0123456789");
    const bool sound =
        run_flow(gk, f.device, mutate_one(entropy, f.login_name, kFieldAlphabet),
                 f.login_password) == Flow::kRejectedAtLN &&
        run_flow(gk, f.device, f.login_name,
                 mutate_one(entropy, f.login_password, kFieldAlphabet)) ==
            Flow::kRejectedAtLP &&
        run_flow(gk, other_imei, f.login_name, f.login_password) ==
            Flow::kRejectedAtLN &&
        run_flow(gk, other_imsi, f.login_name, f.login_password) ==
            Flow::kRejectedAtLN;
    record("single-fault rejection at earliest stage", sound);

    Session s = gk.begin_session(f.device);
    const StageResult early = gk.submit_login_password(s, f.login_password);
    record("out-of-order submission rejected",
           early.outcome == StageResult::Outcome::kReject &&
               s.reject_reason() == RejectReason::kOrderViolation &&
               gk.submit_login_name(s, f.login_name).new_stage ==
                   Stage::kRejected);
  }

  // Store file format.
  const std::string text = serialize_store(store.records());
  const std::vector<AccountRecord> parsed = parse_store(text);
  record("store round-trip",
         std::equal(parsed.begin(), parsed.end(), store.records().begin(),
                    store.records().end()));
  for (const Fixture& f : fixtures) {
    const DerivedIdentifiers ids = rederive_identifiers(
        key, f.record, f.device, f.login_name, f.login_password);
    bool leak = false;
    for (const std::string* s : {&ids.ln_identifier, &ids.lp_identifier, &ids.ap}) {
      leak = leak || text.find(*s) != std::string::npos;
    }
    record("store holds no identifiers or APs", !leak);
  }

  std::vector<CheckResult> out;
  for (auto& [name, c] : checks) out.push_back(std::move(c));
  return out;
}

}  // namespace trident
