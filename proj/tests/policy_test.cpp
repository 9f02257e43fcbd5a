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

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace trident {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(NormalizeLoginNameTest, LowercasesAndStrips) {
  EXPECT_EQ(normalize_login_name("Benz428"), "benz428");
  EXPECT_EQ(normalize_login_name("a.b@c!8876"), "abc8876");
  EXPECT_EQ(normalize_login_name("  JOHN_doe 77 "), "johndoe77");
}

TEST(NormalizeLoginNameTest, LengthBounds) {
  EXPECT_EQ(code_of([] { normalize_login_name("AB!"); }),
            ErrorCode::kInvalidLoginName);
  EXPECT_EQ(code_of([] { normalize_login_name(""); }),
            ErrorCode::kInvalidLoginName);
  EXPECT_EQ(code_of([] { normalize_login_name("Benz428@woxinet.com"); }),
            ErrorCode::kInvalidLoginName);
  EXPECT_EQ(normalize_login_name("abcde"), "abcde");
  EXPECT_EQ(normalize_login_name("abcdefghijklmno"), "abcdefghijklmno");
}

TEST(NormalizeLoginNameTest, Idempotent) {
  SeededEntropy e(3);
  for (int i = 0; i < 500; ++i) {
    const std::string raw = testing::random_printable(e, e.uniform(5, 18));
    std::string once;
    try {
      once = normalize_login_name(raw);
    } catch (const Error&) {
      continue;
    }
    EXPECT_EQ(normalize_login_name(once), once);
  }
}

TEST(ValidateLoginPasswordTest, Rules) {
  EXPECT_NO_THROW(validate_login_password("dp7a3k"));
  try {
    validate_login_password("dp7A3k");
    FAIL();
  } catch (const InvalidLoginPassword& e) {
    EXPECT_EQ(e.reason(), PasswordViolation::kCharset);
  }
  try {
    validate_login_password("abc1");
    FAIL();
  } catch (const InvalidLoginPassword& e) {
    EXPECT_EQ(e.reason(), PasswordViolation::kLength);
  }
  EXPECT_THROW(validate_login_password(std::string(16, 'a')),
               InvalidLoginPassword);
}

TEST(ClassifyTest, Flags) {
  const CharClassProfile all = classify("aB3$");
  EXPECT_TRUE(all.has_upper && all.has_lower && all.has_digit && all.has_symbol);
  EXPECT_EQ(all.class_count(), 4);

  const CharClassProfile lower = classify("abc");
  EXPECT_TRUE(lower.has_lower);
  EXPECT_EQ(lower.class_count(), 1);

  const CharClassProfile digits = classify("1234567890");
  EXPECT_TRUE(digits.has_digit);
  EXPECT_EQ(digits.class_count(), 1);

  EXPECT_EQ(code_of([] { classify("ab c"); }), ErrorCode::kUnsupportedCharacter);
  EXPECT_EQ(code_of([] { classify("\xc3\xa9"); }),
            ErrorCode::kUnsupportedCharacter);
}

TEST(ClassifyTest, PartitionsPrintableAscii) {
  int symbols = 0;
  for (char c : printable_ascii()) {
    const CharClassProfile p = classify(std::string(1, c));
    EXPECT_EQ(p.class_count(), 1) << c;
    symbols += p.has_symbol;
  }
  EXPECT_EQ(symbols, 32);
}

TEST(CheckApPolicyTest, Clauses) {
  EXPECT_TRUE(check_ap_policy("aBc3$defghijklmnopqr"));
  EXPECT_FALSE(check_ap_policy(std::string(20, 'a')));
  EXPECT_FALSE(check_ap_policy("aBc3$defghijklmnopq"));  // 19
  // Uppercase and symbol only after position 4.
  EXPECT_FALSE(check_ap_policy("abc3defgB$hijklmnopq"));
  // Symbol in the head satisfies the head rule.
  EXPECT_TRUE(check_ap_policy("ab#3defgBhijklmnopqr"));
  EXPECT_FALSE(check_ap_policy("aBc3 defghijklmnopqr"));
}

TEST(FieldAcceptsTest, Gatekeeping) {
  for (FieldKind f : {FieldKind::kLoginName, FieldKind::kLoginPassword}) {
    EXPECT_TRUE(field_accepts(f, "benz428"));
    EXPECT_TRUE(field_accepts(f, "dp7a3k"));
    EXPECT_FALSE(field_accepts(f, "4O^&17R2zF="));
    EXPECT_FALSE(field_accepts(f, "z%9CP213Rp"));
    EXPECT_FALSE(field_accepts(f, ""));
    EXPECT_FALSE(field_accepts(f, std::string(16, 'a')));
    EXPECT_FALSE(field_accepts(f, "Benz428"));
  }
}

}  // namespace
}  // namespace trident
