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

// trident: operator harness for registering simulated devices and accounts,
// running logins and attack scenarios, and inspecting converters.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "trident/authsvc.hpp"
#include "trident/converter.hpp"
#include "trident/error.hpp"
#include "trident/policy.hpp"
#include "trident/selftest.hpp"

namespace {

using nlohmann::ordered_json;
using namespace trident;

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitOperational = 2;

struct GlobalOptions {
  std::string store_path = "trident-store.json";
  std::string device_path = "device.json";
  bool json = false;
  std::optional<std::uint64_t> seed;
  int session_timeout = 300;
};

std::unique_ptr<EntropySource> make_entropy(const GlobalOptions& g) {
  if (g.seed) return std::make_unique<SeededEntropy>(*g.seed);
  return std::make_unique<SystemEntropy>();
}

DeviceProfile load_device(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read device file " + path);
  DeviceProfile d;
  try {
    const auto j = nlohmann::json::parse(in);
    d.imei = j.at("imei").get<std::string>();
    d.imsi = j.at("imsi").get<std::string>();
    d.phone_number = j.value("phone_number", "");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidDevice,
                "malformed device file " + path + ": " + e.what());
  }
  d.validate();
  return d;
}

void save_device(const std::string& path, const DeviceProfile& d) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write device file " + path);
  out << ordered_json{{"imei", d.imei},
                      {"imsi", d.imsi},
                      {"phone_number", d.phone_number}}
             .dump(2)
      << "\n";
  if (!out) throw Error(ErrorCode::kIo, "cannot write device file " + path);
}

std::string random_digits(EntropySource& e, std::size_t n) {
  std::string s(n, '0');
  for (char& c : s) c = static_cast<char>('0' + e.uniform(0, 9));
  return s;
}

DeviceProfile random_device(EntropySource& e, std::string phone) {
  return {random_digits(e, 15), random_digits(e, 15), std::move(phone)};
}

Gatekeeper::Options gatekeeper_options(const GlobalOptions& g) {
  Gatekeeper::Options o;
  o.session_idle_limit = std::chrono::seconds(g.session_timeout);
  return o;
}

ordered_json nullable(const std::optional<RejectReason>& r) {
  return r ? ordered_json(reject_reason_name(*r)) : ordered_json(nullptr);
}

int fail(const GlobalOptions& g, int code, const Error& e) {
  if (g.json) {
    std::cout << ordered_json{{"error", error_code_name(e.code())},
                              {"message", e.what()}}
                     .dump()
              << "\n";
  } else {
    std::cerr << "error: " << e.what() << "\n";
  }
  return code;
}

// device create

int cmd_device_create(const GlobalOptions& g, const std::string& phone) {
  auto entropy = make_entropy(g);
  const DeviceProfile d = random_device(*entropy, phone);
  save_device(g.device_path, d);
  if (g.json) {
    std::cout << ordered_json{{"imei", d.imei},
                              {"imsi", d.imsi},
                              {"phone_number", d.phone_number},
                              {"path", g.device_path}}
                     .dump()
              << "\n";
  } else {
    std::cout << "device profile written to " << g.device_path << "\n"
              << "  IMEI  " << d.imei << "\n"
              << "  IMSI  " << d.imsi << "\n"
              << "  phone " << d.phone_number << "\n";
  }
  return kExitOk;
}

// register

int cmd_register(const GlobalOptions& g, const MasterKey& key,
                 const std::string& login_name,
                 const std::string& login_password) {
  const DeviceProfile device = load_device(g.device_path);
  auto entropy = make_entropy(g);
  CredentialStore store = CredentialStore::open(g.store_path);
  Gatekeeper gk(key, store, *entropy, gatekeeper_options(g));
  AccountRecord rec;
  try {
    rec = gk.register_account(device, login_name, login_password);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kInvalidLoginName:
      case ErrorCode::kInvalidLoginPassword:
      case ErrorCode::kDuplicateIdentity:
        return fail(g, kExitRejected, e);
      default:
        throw;
    }
  }
  if (g.json) {
    std::cout << ordered_json{{"status", "registered"},
                              {"account_id", to_hex(rec.account_id)}}
                     .dump()
              << "\n";
  } else {
    std::cout << "registered account " << to_hex(rec.account_id) << "\n";
  }
  return kExitOk;
}

// login

struct FlowTrace {
  ordered_json stage_results = ordered_json::array();
  std::vector<Stage> stages;
};

void trace(FlowTrace& t, Stage from, const StageResult& r) {
  t.stage_results.push_back(
      {{"stage", stage_name(from)},
       {"outcome",
        r.outcome == StageResult::Outcome::kAdvance ? "Advance" : "Reject"},
       {"new_stage", stage_name(r.new_stage)}});
  t.stages.push_back(r.new_stage);
}

// Runs the three stages, stopping at the first rejection.
FlowTrace run_login(Gatekeeper& gk, Session& s, std::string_view name,
                    std::string_view password) {
  FlowTrace t;
  t.stages.push_back(s.stage());
  trace(t, Stage::kAwaitLN, gk.submit_login_name(s, name));
  if (s.stage() != Stage::kAwaitLP) return t;
  trace(t, Stage::kAwaitLP, gk.submit_login_password(s, password));
  if (s.stage() != Stage::kAwaitAP) return t;
  gk.finalize(s);
  trace(t, Stage::kAwaitAP,
        StageResult{s.stage() == Stage::kGranted
                        ? StageResult::Outcome::kAdvance
                        : StageResult::Outcome::kReject,
                    s.stage()});
  return t;
}

std::string render_path(const std::vector<Stage>& stages) {
  std::string out;
  for (Stage st : stages) {
    if (!out.empty()) out += " -> ";
    out += stage_name(st);
  }
  return out;
}

int cmd_login(const GlobalOptions& g, const MasterKey& key,
              const std::string& login_name,
              const std::string& login_password) {
  const DeviceProfile device = load_device(g.device_path);
  auto entropy = make_entropy(g);
  CredentialStore store = CredentialStore::open(g.store_path);
  Gatekeeper gk(key, store, *entropy, gatekeeper_options(g));
  Session s = gk.begin_session(device);
  const FlowTrace t = run_login(gk, s, login_name, login_password);

  if (g.json) {
    std::cout << ordered_json{{"stage_results", t.stage_results},
                              {"final_state", stage_name(s.stage())},
                              {"reject_reason", nullable(s.reject_reason())}}
                     .dump()
              << "\n";
  } else {
    std::cout << render_path(t.stages) << "\n";
    if (s.reject_reason()) {
      std::cout << "rejected: " << reject_reason_name(*s.reject_reason())
                << "\n";
    } else {
      std::cout << "access granted\n";
    }
  }
  return s.stage() == Stage::kGranted ? kExitOk : kExitRejected;
}

// attack

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> kNames = {
      "honest",           "stolen-password", "wrong-device",
      "replay-identifier", "replay-ap",      "out-of-order"};
  return kNames;
}

struct AttackOutcome {
  std::string expected_reason;  // empty for honest
  FlowTrace trace;
};

int cmd_attack(const GlobalOptions& g, const MasterKey& key,
               const std::string& scenario, const std::string& login_name,
               const std::string& login_password) {
  const DeviceProfile victim = load_device(g.device_path);
  auto entropy = make_entropy(g);
  CredentialStore store = CredentialStore::open(g.store_path);
  Gatekeeper gk(key, store, *entropy, gatekeeper_options(g));

  const std::string name = normalize_login_name(login_name);
  const auto record = store.get_by_ln_digest(
      combine_identity(IdentityKind::kLoginName, name, victim).digest);
  if (!record) {
    throw Error(ErrorCode::kIo,
                "scenario does not reference a registered account");
  }

  AttackOutcome out;
  Session s = gk.begin_session(victim);
  if (scenario == "honest") {
    out.trace = run_login(gk, s, login_name, login_password);
  } else if (scenario == "stolen-password") {
    s = gk.begin_session(random_device(*entropy, "attacker"));
    out.expected_reason = "LN_MISMATCH";
    out.trace = run_login(gk, s, login_name, login_password);
  } else if (scenario == "wrong-device") {
    DeviceProfile swapped = victim;
    const auto i = entropy->uniform(0, swapped.imsi.size() - 1);
    swapped.imsi[i] = static_cast<char>('0' + (swapped.imsi[i] - '0' + 1) % 10);
    s = gk.begin_session(swapped);
    out.expected_reason = "LN_MISMATCH";
    out.trace = run_login(gk, s, login_name, login_password);
  } else if (scenario == "replay-identifier") {
    const DerivedIdentifiers ids =
        rederive_identifiers(key, *record, victim, login_name, login_password);
    out.expected_reason = "FIELD_REJECTED";
    out.trace = run_login(gk, s, ids.ln_identifier, login_password);
  } else if (scenario == "replay-ap") {
    const DerivedIdentifiers ids =
        rederive_identifiers(key, *record, victim, login_name, login_password);
    out.expected_reason = "FIELD_REJECTED";
    out.trace = run_login(gk, s, login_name, ids.ap);
  } else if (scenario == "out-of-order") {
    out.expected_reason = "ORDER_VIOLATION";
    out.trace.stages.push_back(s.stage());
    trace(out.trace, Stage::kAwaitLN, gk.submit_login_password(s, login_password));
    trace(out.trace, s.stage(), gk.submit_login_name(s, login_name));
  } else {
    throw Error(ErrorCode::kIo, "unknown scenario " + scenario);
  }

  const bool honest = scenario == "honest";
  const bool granted = s.stage() == Stage::kGranted;
  const bool defended = honest ? granted : !granted;
  Stage reached = Stage::kAwaitLN;
  for (Stage st : out.trace.stages) {
    if (!is_terminal(st)) reached = st;
  }

  if (g.json) {
    std::cout << ordered_json{{"scenario", scenario},
                              {"expected_state", honest ? "Granted" : "Rejected"},
                              {"expected_reason",
                               out.expected_reason.empty()
                                   ? ordered_json(nullptr)
                                   : ordered_json(out.expected_reason)},
                              {"final_state", stage_name(s.stage())},
                              {"reject_reason", nullable(s.reject_reason())},
                              {"stage_reached", stage_name(reached)},
                              {"stage_results", out.trace.stage_results},
                              {"repelled", !honest && !granted},
                              {"defended", defended}}
                     .dump()
              << "\n";
  } else {
    std::cout << "scenario " << scenario << ": " << render_path(out.trace.stages)
              << "\n";
    std::cout << "stage reached: " << stage_name(reached) << "\n";
    if (s.reject_reason()) {
      std::cout << "reject reason: " << reject_reason_name(*s.reject_reason())
                << "\n";
    }
    if (honest) {
      std::cout << (granted ? "control flow granted\n"
                            : "VIOLATION: honest flow was rejected\n");
    } else {
      std::cout << (granted ? "VIOLATION: attack succeeded\n"
                            : "attack repelled\n");
    }
  }
  return defended ? kExitOk : kExitOperational;
}

// inspect-converter

int cmd_inspect(const GlobalOptions& g, const MasterKey& key,
                const std::string& kind_text, const std::string& credential,
                const std::string& nonce_hex, std::uint32_t attempt,
                bool unsafe) {
  if (!unsafe) {
    std::cerr << "inspect-converter reveals secret converter elements; "
                 "pass --unsafe to run it\n";
    return kExitOperational;
  }
  const DeviceProfile device = load_device(g.device_path);
  Nonce nonce{};
  try {
    nonce = fixed_from_hex<16>(nonce_hex);
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::kIo, "--nonce must be 32 hex characters");
  }
  const ConverterKind kind = kind_text == "LN" ? ConverterKind::kLoginName
                                               : ConverterKind::kLoginPassword;
  std::string cred;
  if (kind == ConverterKind::kLoginName) {
    cred = normalize_login_name(credential);
  } else {
    validate_login_password(credential);
    cred = credential;
  }
  const QuasiMatrix m =
      build_matrix(key, nonce, kind, cred, device.imei, device.imsi, attempt);
  std::optional<std::string> ap;
  if (kind == ConverterKind::kLoginPassword) ap = assemble_ap(m);

  if (g.json) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : m.rows) {
      rows.push_back({{"input", std::string(1, r.input)},
                      {"digit", r.digit},
                      {"converted", r.converted},
                      {"label", r.label ? ordered_json(r.label->to_string())
                                        : ordered_json(nullptr)}});
    }
    ordered_json doc{{"warning", "DEBUG — reveals secrets"},
                     {"kind", kind_text},
                     {"attempt", attempt},
                     {"rows", rows}};
    if (ap) {
      const CharClassProfile p = classify(*ap);
      doc["ap"] = *ap;
      doc["ap_classes"] = {{"upper", p.has_upper},
                           {"lower", p.has_lower},
                           {"digit", p.has_digit},
                           {"symbol", p.has_symbol},
                           {"class_count", p.class_count()}};
      doc["ap_policy_ok"] = check_ap_policy(*ap);
    }
    std::cout << doc.dump() << "\n";
    return kExitOk;
  }

  std::cout << "DEBUG — reveals secrets\n";
  std::cout << std::left << std::setw(10) << "Input" << std::setw(8) << "Digit"
            << std::setw(12) << "Converted" << "Label\n";
  for (const auto& r : m.rows) {
    std::cout << std::setw(10) << std::string(1, r.input) << std::setw(8)
              << r.digit << std::setw(12) << r.converted
              << (r.label ? r.label->to_string() : "") << "\n";
  }
  if (ap) {
    const CharClassProfile p = classify(*ap);
    std::cout << "AP " << *ap << "  classes=" << p.class_count()
              << (p.has_upper ? " upper" : "") << (p.has_lower ? " lower" : "")
              << (p.has_digit ? " digit" : "")
              << (p.has_symbol ? " symbol" : "")
              << (check_ap_policy(*ap) ? "  policy=ok" : "  policy=FAIL")
              << "\n";
  }
  return kExitOk;
}

// selftest

int cmd_selftest(const GlobalOptions& g, const MasterKey& key,
                 std::size_t trials) {
  const auto results = run_selftest(key, g.seed.value_or(1), trials);
  std::size_t passed = 0;
  ordered_json checks = ordered_json::array();
  for (const auto& r : results) {
    if (r.ok()) ++passed;
    checks.push_back(
        {{"name", r.name}, {"passed", r.passed}, {"total", r.total}});
    if (!g.json) {
      std::cout << (r.ok() ? "PASS " : "FAIL ") << r.name << " (" << r.passed
                << "/" << r.total << ")\n";
    }
  }
  const std::size_t failed = results.size() - passed;
  if (g.json) {
    std::cout << ordered_json{{"checks", checks},
                              {"passed", passed},
                              {"failed", failed}}
                     .dump()
              << "\n";
  } else {
    std::cout << passed << " passed, " << failed << " failed\n";
  }
  return failed == 0 ? kExitOk : kExitRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple-identity authentication harness"};
  app.require_subcommand(1);

  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--store", g.store_path, "Credential store file")
      ->capture_default_str();
  app.add_option("--device", g.device_path, "Device profile file")
      ->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable output");
  auto* seed_opt =
      app.add_option("--seed", seed, "Seed for reproducible randomness");
  app.add_option("--session-timeout", g.session_timeout,
                 "Session idle limit in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* device_cmd = app.add_subcommand("device", "Simulated device profiles");
  device_cmd->require_subcommand(1);
  std::string phone = "+15550100";
  auto* create_cmd = device_cmd->add_subcommand("create", "Create a device");
  create_cmd->add_option("--phone", phone, "Phone number")
      ->capture_default_str();

  std::string login_name, login_password;
  auto* register_cmd = app.add_subcommand("register", "Register an account");
  register_cmd->add_option("login_name", login_name)->required();
  register_cmd->add_option("login_password", login_password)->required();

  auto* login_cmd = app.add_subcommand("login", "Run the three-stage login");
  login_cmd->add_option("login_name", login_name)->required();
  login_cmd->add_option("login_password", login_password)->required();

  std::string scenario;
  auto* attack_cmd =
      app.add_subcommand("attack", "Run an adversarial scenario");
  attack_cmd->add_option("--scenario", scenario)
      ->required()
      ->check(CLI::IsMember(scenario_names()));
  attack_cmd->add_option("login_name", login_name, "Victim login name")
      ->required();
  attack_cmd->add_option("login_password", login_password,
                         "Victim login password")
      ->required();

  std::string kind = "LP", credential,
              nonce_hex = "00000000000000000000000000000000";
  std::uint32_t attempt = 0;
  bool unsafe = false;
  auto* inspect_cmd = app.add_subcommand(
      "inspect-converter", "Print a converter (reveals secrets)");
  inspect_cmd->add_option("--kind", kind)
      ->capture_default_str()
      ->check(CLI::IsMember({"LN", "LP"}));
  inspect_cmd->add_option("--nonce", nonce_hex, "Account nonce (32 hex)")
      ->capture_default_str();
  inspect_cmd->add_option("--attempt", attempt)
      ->capture_default_str()
      ->check(CLI::Range(0u, kMaxDerivationAttempts - 1));
  inspect_cmd->add_flag("--unsafe", unsafe, "Allow printing secrets");
  inspect_cmd->add_option("credential", credential)->required();

  std::size_t trials = 200;
  auto* selftest_cmd =
      app.add_subcommand("selftest", "Run the invariant suite");
  selftest_cmd->add_option("--trials", trials)->capture_default_str();

  for (auto* sub : {device_cmd, create_cmd, register_cmd, login_cmd,
                    attack_cmd, inspect_cmd, selftest_cmd}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    const MasterKey key = MasterKey::from_environment();
    if (*create_cmd) return cmd_device_create(g, phone);
    if (*register_cmd) {
      return cmd_register(g, key, login_name, login_password);
    }
    if (*login_cmd) return cmd_login(g, key, login_name, login_password);
    if (*attack_cmd) {
      return cmd_attack(g, key, scenario, login_name, login_password);
    }
    if (*inspect_cmd) {
      return cmd_inspect(g, key, kind, credential, nonce_hex, attempt, unsafe);
    }
    if (*selftest_cmd) return cmd_selftest(g, key, trials);
  } catch (const Error& e) {
    const bool input_error = e.code() == ErrorCode::kInvalidLoginName ||
                             e.code() == ErrorCode::kInvalidLoginPassword;
    return fail(g, input_error ? kExitRejected : kExitOperational, e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOperational;
  }
  return kExitOperational;
}
