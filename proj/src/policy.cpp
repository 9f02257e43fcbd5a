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

#include "trident/policy.hpp"

#include <algorithm>

namespace trident {

std::string normalize_login_name(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (is_field_char(c)) out.push_back(c);
  }
  if (out.size() < kMinCredentialLength || out.size() > kMaxCredentialLength) {
    throw Error(ErrorCode::kInvalidLoginName,
                "login name must normalize to 5-15 characters of [a-z0-9] "
                "(got " + std::to_string(out.size()) + ")");
  }
  return out;
}

void validate_login_password(std::string_view password) {
  if (password.size() < kMinCredentialLength ||
      password.size() > kMaxCredentialLength) {
    throw InvalidLoginPassword(
        PasswordViolation::kLength,
        "login password must be 5-15 characters long");
  }
  if (!std::all_of(password.begin(), password.end(), is_field_char)) {
    throw InvalidLoginPassword(
        PasswordViolation::kCharset,
        "login password may only contain lowercase letters and digits");
  }
}

CharClassProfile classify(std::string_view text) {
  CharClassProfile profile;
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') profile.has_upper = true;
    else if (c >= 'a' && c <= 'z') profile.has_lower = true;
    else if (c >= '0' && c <= '9') profile.has_digit = true;
    else if (c >= 0x21 && c <= 0x7E) profile.has_symbol = true;
    else throw Error(ErrorCode::kUnsupportedCharacter,
                     "character outside printable ASCII");
  }
  return profile;
}

bool check_ap_policy(std::string_view ap) {
  if (ap.size() != kApLength) return false;
  try {
    if (classify(ap).class_count() != 4) return false;
    const CharClassProfile head = classify(ap.substr(0, 4));
    return head.has_upper || head.has_symbol;
  } catch (const Error&) {
    return false;
  }
}

bool field_accepts(FieldKind /*field*/, std::string_view input) {
  return !input.empty() && input.size() <= kMaxCredentialLength &&
         std::all_of(input.begin(), input.end(), is_field_char);
}

}  // namespace trident
