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

#include "trident/converter.hpp"

#include <algorithm>
#include <iostream>
#include <set>

#include "gtest/gtest.h"
#include "test_support.hpp"
#include "trident/error.hpp"
#include "trident/policy.hpp"

namespace trident {
namespace {

using testing::test_key;

constexpr char kImei[] = "490154203237518";
constexpr char kImsi[] = "310150123456789";

Stream test_stream(std::uint32_t attempt = 0, std::string credential = "x") {
  StreamContext ctx;
  ctx.credential = std::move(credential);
  ctx.attempt = attempt;
  return Stream(test_key(), ctx);
}

TEST(DeriveDigitsTest, ForcedVectors) {
  Stream s = test_stream();
  EXPECT_EQ(derive_digits(s, 4, 20), std::vector<int>({5, 5, 5, 5}));
  EXPECT_EQ(derive_digits(s, 20, 20), std::vector<int>(20, 1));
}

TEST(DeriveDigitsTest, InfeasibleTarget) {
  Stream s = test_stream();
  try {
    derive_digits(s, 3, 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleDigits);
  }
  EXPECT_THROW(derive_digits(s, 21, 20), Error);
}

TEST(DeriveDigitsTest, ConstrainedDrawsStayInsideBruteForceFeasibleSet) {
  for (int n : {5, 6, 9, 15}) {
    const auto all = testing::enumerate_digit_vectors(n, 20);
    const std::set<std::vector<int>> feasible(all.begin(), all.end());
    std::set<std::vector<int>> drawn;
    for (std::uint32_t seed = 0; seed < 64; ++seed) {
      Stream s = test_stream(seed, "n" + std::to_string(n));
      for (int k = 0; k < 60; ++k) {
        const std::vector<int> d = derive_digits(s, n, 20);
        ASSERT_TRUE(feasible.contains(d));
        drawn.insert(d);
      }
    }
    // Small feasible sets must be covered completely; a too-narrow per-step
    // bound would leave vectors unreachable.
    if (feasible.size() <= 200) {
      EXPECT_EQ(drawn.size(), feasible.size()) << "n=" << n;
    }
  }
}

TEST(DeriveDigitsTest, UnconstrainedInRange) {
  Stream s = test_stream();
  std::set<int> seen;
  for (int d : derive_digits(s, 200, std::nullopt)) {
    ASSERT_GE(d, 1);
    ASSERT_LE(d, 5);
    seen.insert(d);
  }
  EXPECT_EQ(seen.size(), 5u);
}

TEST(DeriveRowTest, Shape) {
  Stream s = test_stream();
  const ConverterRow first = derive_row(s, 'b', 1, true);
  EXPECT_EQ(first.converted.size(), 1u);
  EXPECT_FALSE(first.label);

  const ConverterRow e = derive_row(s, 'e', 5, false);
  EXPECT_EQ(e.input, 'e');
  EXPECT_EQ(e.converted.size(), 5u);
  ASSERT_TRUE(e.label);
  EXPECT_GE(e.label->offset, 1);
  EXPECT_LE(e.label->offset, 20);
  for (char c : e.converted) {
    EXPECT_GE(c, 0x21);
    EXPECT_LE(c, 0x7E);
  }
  EXPECT_THROW(derive_row(s, 'x', 6, false), std::invalid_argument);
}

TEST(DeriveRowTest, Deterministic) {
  Stream a = test_stream(3);
  Stream b = test_stream(3);
  EXPECT_EQ(derive_row(a, 'q', 4, false), derive_row(b, 'q', 4, false));
}

TEST(ShuffleLabelTest, TextForm) {
  EXPECT_EQ((ShuffleLabel{17, ShuffleLabel::Direction::kReverse}).to_string(),
            "17R");
  EXPECT_EQ((ShuffleLabel{5, ShuffleLabel::Direction::kForward}).to_string(),
            "5F");
  EXPECT_EQ(ShuffleLabel::parse("13F"),
            (ShuffleLabel{13, ShuffleLabel::Direction::kForward}));
  EXPECT_FALSE(ShuffleLabel::parse("21F"));
  EXPECT_FALSE(ShuffleLabel::parse("0R"));
  EXPECT_FALSE(ShuffleLabel::parse("05R"));
  EXPECT_FALSE(ShuffleLabel::parse("5X"));
  EXPECT_FALSE(ShuffleLabel::parse("F"));
}

TEST(BuildMatrixTest, LoginPasswordShape) {
  const QuasiMatrix m = build_matrix(test_key(), Nonce{},
                                     ConverterKind::kLoginPassword, "dp7a3k",
                                     kImei, kImsi, 0);
  ASSERT_EQ(m.rows.size(), 6u);
  EXPECT_EQ(m.digit_sum(), 20);
  EXPECT_FALSE(m.rows[0].label);
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    EXPECT_EQ(m.rows[i].input, std::string("dp7a3k")[i]);
    EXPECT_EQ(static_cast<int>(m.rows[i].converted.size()), m.rows[i].digit);
    if (i > 0) EXPECT_TRUE(m.rows[i].label);
  }
}

TEST(BuildMatrixTest, LoginNameShape) {
  const QuasiMatrix m = build_matrix(test_key(), Nonce{},
                                     ConverterKind::kLoginName, "benz428",
                                     kImei, kImsi, 0);
  EXPECT_EQ(m.rows.size(), 7u);
  EXPECT_EQ(m.kind, ConverterKind::kLoginName);
  for (const auto& row : m.rows) {
    EXPECT_EQ(static_cast<int>(row.converted.size()), row.digit);
  }
}

TEST(BuildMatrixTest, PureFunctionOfInputs) {
  SeededEntropy e(5);
  for (int i = 0; i < 200; ++i) {
    const Nonce nonce = e.bytes<16>();
    const std::string cred =
        testing::random_string(e, 5, 15, testing::kFieldAlphabet);
    const std::string imei = testing::random_digits(e);
    const std::string imsi = testing::random_digits(e);
    const auto kind = i % 2 ? ConverterKind::kLoginName
                            : ConverterKind::kLoginPassword;
    EXPECT_EQ(build_matrix(test_key(), nonce, kind, cred, imei, imsi, 2),
              build_matrix(test_key(), nonce, kind, cred, imei, imsi, 2));
  }
}

TEST(AssembleApTest, HandSimulatedExample) {
  using D = ShuffleLabel::Direction;
  QuasiMatrix m;
  m.kind = ConverterKind::kLoginPassword;
  m.rows = {{'a', 5, "abcde", std::nullopt},
            {'b', 5, "fghij", ShuffleLabel{1, D::kForward}},
            {'c', 5, "klmno", ShuffleLabel{3, D::kReverse}},
            {'d', 5, "pqrst", ShuffleLabel{18, D::kForward}}};
  // Row 2 starts at occupied slot 1 and moves to the first free slot 6.
  // Row 3 walks back from slot 3 and wraps to 20..16. Row 4 skips the
  // occupied tail and head and lands in 11..15.
  EXPECT_EQ(assemble_ap(m), "abcdefghijpqrstonmlk");
  EXPECT_EQ(testing::naive_assemble(m), "abcdefghijpqrstonmlk");
}

TEST(AssembleApTest, MatchesNaiveOracleOnRandomMatrices) {
  SeededEntropy e(21);
  for (int i = 0; i < 1000; ++i) {
    const QuasiMatrix m = testing::random_lp_matrix(e);
    const std::string ap = assemble_ap(m);
    ASSERT_EQ(ap, testing::naive_assemble(m)) << "matrix " << i;
    std::string a = ap, b = m.concatenated_strings();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ASSERT_EQ(a, b);
  }
}

TEST(AssembleApTest, DirectionFlipChangesPermutation) {
  SeededEntropy e(22);
  int changed = 0;
  int eligible = 0;
  for (int i = 0; i < 1000; ++i) {
    QuasiMatrix m = testing::random_lp_matrix(e);
    // Unique characters make the permutation itself observable.
    std::size_t k = 0;
    for (auto& row : m.rows) {
      for (char& c : row.converted) c = static_cast<char>('A' + k++);
    }
    const std::string before = assemble_ap(m);
    // A one-character row fills a single slot whichever way it walks, so
    // only rows that place at least two characters are flipped.
    std::vector<std::size_t> candidates;
    for (std::size_t r = 1; r < m.rows.size(); ++r) {
      if (m.rows[r].digit >= 2) candidates.push_back(r);
    }
    if (candidates.empty()) continue;
    ++eligible;
    auto& label =
        *m.rows[candidates[e.uniform(0, candidates.size() - 1)]].label;
    label.direction = label.direction == ShuffleLabel::Direction::kForward
                          ? ShuffleLabel::Direction::kReverse
                          : ShuffleLabel::Direction::kForward;
    const std::string after = assemble_ap(m);
    EXPECT_EQ(after, testing::naive_assemble(m));
    changed += after != before;
  }
  std::cout << "direction flip changed " << changed << "/" << eligible << "\n";
  EXPECT_GE(changed, eligible * 9 / 10);
}

TEST(AssembleApTest, RejectsNonLpMatrices) {
  EXPECT_THROW(assemble_ap(testing::reference_ln_matrix()),
               std::invalid_argument);
}

TEST(GenerateApTest, PolicyAndMinimalAttempt) {
  SeededEntropy e(31);
  const MasterKey key = test_key();
  std::uint64_t attempts = 0;
  for (int i = 0; i < 1000; ++i) {
    const Nonce nonce = e.bytes<16>();
    const std::string pw =
        testing::random_string(e, 5, 15, testing::kFieldAlphabet);
    const std::string imei = testing::random_digits(e);
    const std::string imsi = testing::random_digits(e);
    const GeneratedAp g = generate_ap(key, nonce, pw, imei, imsi);
    ASSERT_EQ(g.ap.size(), 20u);
    ASSERT_TRUE(check_ap_policy(g.ap));
    ASSERT_EQ(assemble_ap(g.matrix), g.ap);
    for (std::uint32_t a = 0; a < g.matrix.attempt; ++a) {
      const QuasiMatrix earlier = build_matrix(
          key, nonce, ConverterKind::kLoginPassword, pw, imei, imsi, a);
      EXPECT_FALSE(check_ap_policy(assemble_ap(earlier)));
    }
    attempts += g.matrix.attempt + 1;
  }
  EXPECT_LT(static_cast<double>(attempts) / 1000.0, 2.0);
}

TEST(GenerateApTest, SensitiveToEveryInput) {
  SeededEntropy e(32);
  int differing = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const Nonce nonce = e.bytes<16>();
    std::string pw = testing::random_string(e, 5, 15, testing::kFieldAlphabet);
    std::string imei = testing::random_digits(e);
    std::string imsi = testing::random_digits(e);
    const std::string base = generate_ap(test_key(), nonce, pw, imei, imsi).ap;
    Nonce n2 = nonce;
    MasterKey key2 = test_key();
    switch (i % 5) {
      case 0: pw[0] = pw[0] == 'a' ? 'b' : 'a'; break;
      case 1: imei[3] = imei[3] == '0' ? '1' : '0'; break;
      case 2: imsi[14] = imsi[14] == '0' ? '1' : '0'; break;
      case 3: n2[7] ^= 0x10; break;
      case 4: key2 = test_key(0x43); break;
    }
    differing += generate_ap(key2, n2, pw, imei, imsi).ap != base;
  }
  EXPECT_GE(differing, 999);
}

}  // namespace
}  // namespace trident
