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

#include "trident/authsvc.hpp"

#include "trident/converter.hpp"
#include "trident/error.hpp"
#include "trident/policy.hpp"

namespace trident {

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kAwaitLN: return "AwaitLN";
    case Stage::kAwaitLP: return "AwaitLP";
    case Stage::kAwaitAP: return "AwaitAP";
    case Stage::kGranted: return "Granted";
    case Stage::kRejected: return "Rejected";
  }
  return "";
}

std::string_view reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::kLnMismatch: return "LN_MISMATCH";
    case RejectReason::kLpMismatch: return "LP_MISMATCH";
    case RejectReason::kApMismatch: return "AP_MISMATCH";
    case RejectReason::kFieldRejected: return "FIELD_REJECTED";
    case RejectReason::kOrderViolation: return "ORDER_VIOLATION";
    case RejectReason::kSessionExpired: return "SESSION_EXPIRED";
  }
  return "";
}

Gatekeeper::Gatekeeper(MasterKey key, CredentialStore& store,
                       EntropySource& entropy, Options options)
    : key_(std::move(key)),
      store_(store),
      entropy_(entropy),
      options_(std::move(options)) {
  if (!options_.clock) options_.clock = [] {
    return std::chrono::steady_clock::now();
  };
}

AccountRecord Gatekeeper::register_account(const DeviceProfile& device,
                                           std::string_view raw_login_name,
                                           std::string_view login_password) {
  device.validate();
  const std::string login_name = normalize_login_name(raw_login_name);
  validate_login_password(login_password);

  AccountRecord rec;
  rec.ln_identity =
      combine_identity(IdentityKind::kLoginName, login_name, device);
  if (store_.get_by_ln_digest(rec.ln_identity.digest)) {
    throw Error(ErrorCode::kDuplicateIdentity,
                "this login name is already registered on this device");
  }
  rec.account_id = entropy_.bytes<16>();
  rec.nonce = entropy_.bytes<16>();

  // LN: the first attempt whose converter admits a field-rejected selection.
  std::optional<QuasiMatrix> ln_matrix;
  for (std::uint32_t attempt = 0; !ln_matrix; ++attempt) {
    QuasiMatrix m = build_matrix(key_, rec.nonce, ConverterKind::kLoginName,
                                 login_name, device.imei, device.imsi, attempt);
    try {
      rec.ln_descriptor = draw_selection(entropy_, m);
      rec.ln_attempt = attempt;
      ln_matrix = std::move(m);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSelectionExhausted) throw;
    }
  }
  rec.ln_commitment = commit_identifier(
      entropy_, render_identifier(*ln_matrix, rec.ln_descriptor));

  // LP and AP share one derivation.
  const GeneratedAp generated = generate_ap(key_, rec.nonce, login_password,
                                            device.imei, device.imsi);
  rec.lp_identity =
      combine_identity(IdentityKind::kLoginPassword, login_password, device);
  rec.lp_descriptor = draw_selection(entropy_, generated.matrix);
  rec.lp_commitment = commit_identifier(
      entropy_, render_identifier(generated.matrix, rec.lp_descriptor));
  rec.lp_attempt = generated.matrix.attempt;

  rec.ap_identity =
      combine_identity(IdentityKind::kAuthentication, std::nullopt, device);
  rec.ap_commitment = commit_identifier(entropy_, generated.ap);

  store_.put_account(rec);
  return rec;
}

Session Gatekeeper::begin_session(const DeviceProfile& device) {
  Session s;
  s.id_ = entropy_.bytes<16>();
  s.device_ = device;
  s.stage_ = Stage::kAwaitLN;
  s.last_activity_ = options_.clock();
  return s;
}

StageResult Gatekeeper::reject(Session& session, RejectReason reason) {
  session.stage_ = Stage::kRejected;
  session.reject_reason_ = reason;
  session.pending_password_.reset();
  return {StageResult::Outcome::kReject, Stage::kRejected};
}

StageResult Gatekeeper::advance(Session& session, Stage next) {
  session.stage_ = next;
  session.last_activity_ = options_.clock();
  return {StageResult::Outcome::kAdvance, next};
}

std::optional<StageResult> Gatekeeper::guard(Session& session,
                                             Stage expected) {
  if (is_terminal(session.stage_)) {
    return StageResult{StageResult::Outcome::kReject, session.stage_};
  }
  if (options_.clock() - session.last_activity_ > options_.session_idle_limit) {
    return reject(session, RejectReason::kSessionExpired);
  }
  if (session.stage_ != expected) {
    return reject(session, RejectReason::kOrderViolation);
  }
  return std::nullopt;
}

StageResult Gatekeeper::submit_login_name(Session& session,
                                          std::string_view input) {
  if (auto stop = guard(session, Stage::kAwaitLN)) return *stop;
  if (!field_accepts(FieldKind::kLoginName, input)) {
    return reject(session, RejectReason::kFieldRejected);
  }
  try {
    const std::string name = normalize_login_name(input);
    const IdentityDigest identity =
        combine_identity(IdentityKind::kLoginName, name, session.device_);
    const auto rec = store_.get_by_ln_digest(identity.digest);
    if (!rec) return reject(session, RejectReason::kLnMismatch);

    const QuasiMatrix m =
        build_matrix(key_, rec->nonce, ConverterKind::kLoginName, name,
                     session.device_.imei, session.device_.imsi,
                     rec->ln_attempt);
    if (!verify_commitment(render_identifier(m, rec->ln_descriptor),
                           rec->ln_commitment)) {
      return reject(session, RejectReason::kLnMismatch);
    }
    session.account_id_ = rec->account_id;
  } catch (const Error&) {
    // Malformed names and unrenderable descriptors look like any other miss.
    return reject(session, RejectReason::kLnMismatch);
  }
  return advance(session, Stage::kAwaitLP);
}

StageResult Gatekeeper::submit_login_password(Session& session,
                                              std::string_view input) {
  if (auto stop = guard(session, Stage::kAwaitLP)) return *stop;
  if (!field_accepts(FieldKind::kLoginPassword, input)) {
    return reject(session, RejectReason::kFieldRejected);
  }
  try {
    validate_login_password(input);
    const auto rec = store_.get_by_account_id(*session.account_id_);
    if (!rec) return reject(session, RejectReason::kLpMismatch);
    const IdentityDigest identity =
        combine_identity(IdentityKind::kLoginPassword, input, session.device_);
    if (!constant_time_equal(identity.digest, rec->lp_identity.digest)) {
      return reject(session, RejectReason::kLpMismatch);
    }
    const QuasiMatrix m =
        build_matrix(key_, rec->nonce, ConverterKind::kLoginPassword, input,
                     session.device_.imei, session.device_.imsi,
                     rec->lp_attempt);
    if (!verify_commitment(render_identifier(m, rec->lp_descriptor),
                           rec->lp_commitment)) {
      return reject(session, RejectReason::kLpMismatch);
    }
  } catch (const Error&) {
    return reject(session, RejectReason::kLpMismatch);
  }
  session.pending_password_ = std::string(input);
  return advance(session, Stage::kAwaitAP);
}

const Session& Gatekeeper::finalize(Session& session) {
  if (guard(session, Stage::kAwaitAP)) return session;
  const std::string password = std::move(*session.pending_password_);
  session.pending_password_.reset();
  try {
    const auto rec = store_.get_by_account_id(*session.account_id_);
    if (!rec) {
      reject(session, RejectReason::kApMismatch);
      return session;
    }
    const QuasiMatrix m =
        build_matrix(key_, rec->nonce, ConverterKind::kLoginPassword,
                     password, session.device_.imei, session.device_.imsi,
                     rec->lp_attempt);
    const std::string ap = assemble_ap(m);
    const IdentityDigest identity = combine_identity(
        IdentityKind::kAuthentication, std::nullopt, session.device_);
    const bool identity_ok =
        constant_time_equal(identity.digest, rec->ap_identity.digest);
    const bool identifier_ok = verify_commitment(ap, rec->ap_commitment);
    if (!identity_ok || !identifier_ok) {
      reject(session, RejectReason::kApMismatch);
      return session;
    }
  } catch (const std::exception&) {
    reject(session, RejectReason::kApMismatch);
    return session;
  }
  advance(session, Stage::kGranted);
  return session;
}

DerivedIdentifiers rederive_identifiers(const MasterKey& key,
                                        const AccountRecord& record,
                                        const DeviceProfile& device,
                                        std::string_view login_name,
                                        std::string_view login_password) {
  const std::string name = normalize_login_name(login_name);
  const QuasiMatrix ln =
      build_matrix(key, record.nonce, ConverterKind::kLoginName, name,
                   device.imei, device.imsi, record.ln_attempt);
  const QuasiMatrix lp =
      build_matrix(key, record.nonce, ConverterKind::kLoginPassword,
                   login_password, device.imei, device.imsi, record.lp_attempt);
  return {render_identifier(ln, record.ln_descriptor),
          render_identifier(lp, record.lp_descriptor), assemble_ap(lp)};
}

}  // namespace trident
