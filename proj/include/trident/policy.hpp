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

#include <string>
#include <string_view>

#include "trident/error.hpp"

namespace trident {

// Credential length bounds shared by login names and login passwords.
inline constexpr std::size_t kMinCredentialLength = 5;
inline constexpr std::size_t kMaxCredentialLength = 15;
inline constexpr std::size_t kApLength = 20;

enum class FieldKind { kLoginName, kLoginPassword };

struct CharClassProfile {
  bool has_upper = false;
  bool has_lower = false;
  bool has_digit = false;
  bool has_symbol = false;

  int class_count() const {
    return int{has_upper} + int{has_lower} + int{has_digit} + int{has_symbol};
  }
};

enum class PasswordViolation { kLength, kCharset };

class InvalidLoginPassword : public Error {
 public:
  InvalidLoginPassword(PasswordViolation reason, const std::string& message)
      : Error(ErrorCode::kInvalidLoginPassword, message), reason_(reason) {}
  PasswordViolation reason() const noexcept { return reason_; }

 private:
  PasswordViolation reason_;
};

// True for the login-field alphabet [a-z0-9].
constexpr bool is_field_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

// Lowercases ASCII letters and drops everything outside [a-z0-9]. The result
// must be 5..15 characters, else Error(kInvalidLoginName).
std::string normalize_login_name(std::string_view raw);

// Throws InvalidLoginPassword unless 5 <= length <= 15 and every character
// is in [a-z0-9]. Length is checked first.
void validate_login_password(std::string_view password);

// Symbols are the 32 printable ASCII characters that are not alphanumeric.
// Throws Error(kUnsupportedCharacter) on anything outside 0x21..0x7E.
CharClassProfile classify(std::string_view text);

// Exactly 20 characters, all four classes present, and an uppercase letter
// or symbol among the first four characters.
bool check_ap_policy(std::string_view ap);

// Both login fields accept 1..15 characters from [a-z0-9] and nothing else.
bool field_accepts(FieldKind field, std::string_view input);

}  // namespace trident
