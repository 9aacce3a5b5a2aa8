/*
 * Copyright 2026 The semdist Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "semdist/features.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "semdist/error.hpp"
#include "test_util.hpp"

namespace semdist {
namespace {

using testing::error_of;

SparseFeature make(std::vector<std::pair<std::uint32_t, double>> entries, std::string id = "x") {
  return testing::make_feature(std::move(entries), std::move(id));
}

TEST(ValidateVector, AcceptsNormalizedVector) {
  EXPECT_NO_THROW(validate_vector({"a", {0.5, 0.3, 0.2}}, 3, true));
}

TEST(ValidateVector, RejectsWrongLength) {
  EXPECT_EQ(error_of([] { validate_vector({"a", {0.5, 0.3}}, 3, true); }), Errc::kBadLength);
}

TEST(ValidateVector, RejectsUnnormalizedOnlyWhenStrict) {
  EXPECT_EQ(error_of([] { validate_vector({"a", {0.7, 0.7, 0.0}}, 3, true); }),
            Errc::kNotNormalized);
  EXPECT_NO_THROW(validate_vector({"a", {0.7, 0.7, 0.0}}, 3, false));
}

TEST(ValidateVector, RejectsOutOfRangeAndNan) {
  EXPECT_EQ(error_of([] { validate_vector({"a", {1.2, 0.0, 0.0}}, 3, false); }), Errc::kOutOfRange);
  EXPECT_EQ(error_of([] { validate_vector({"a", {-0.1, 0.6, 0.5}}, 3, false); }),
            Errc::kOutOfRange);
  EXPECT_EQ(error_of([] { validate_vector({"a", {std::nan(""), 0.5, 0.5}}, 3, false); }),
            Errc::kOutOfRange);
}

TEST(ValidateVector, SumToleranceIsOneThousandth) {
  EXPECT_NO_THROW(validate_vector({"a", {0.5, 0.3, 0.2009}}, 3, true));
  EXPECT_EQ(error_of([] { validate_vector({"a", {0.5, 0.3, 0.2011}}, 3, true); }),
            Errc::kNotNormalized);
}

TEST(SparseFeature, RejectsUnsortedDuplicateOrZero) {
  EXPECT_EQ(error_of([] { make({{2, 0.5}, {1, 0.5}}); }), Errc::kBadFeature);
  EXPECT_EQ(error_of([] { make({{1, 0.5}, {1, 0.5}}); }), Errc::kBadFeature);
  EXPECT_EQ(error_of([] { make({{0, 0.5}}); }), Errc::kBadFeature);
  EXPECT_EQ(error_of([] { make({{1, 0.0}}); }), Errc::kBadFeature);
  EXPECT_EQ(error_of([] { make({{1, 1.5}}); }), Errc::kBadFeature);
}

TEST(TruncateTopK, KeepsHighestProbabilities) {
  EXPECT_EQ(truncate_top_k({"a", {0.5, 0.3, 0.2}}, 2), make({{1, 0.5}, {2, 0.3}}, "a"));
}

TEST(TruncateTopK, BoundaryTieKeepsLowerClassId) {
  EXPECT_EQ(truncate_top_k({"a", {0.2, 0.6, 0.2}}, 2), make({{1, 0.2}, {2, 0.6}}, "a"));
}

TEST(TruncateTopK, DropsZeroProbabilities) {
  EXPECT_EQ(truncate_top_k({"a", {0.0, 1.0, 0.0}}, 60), make({{2, 1.0}}, "a"));
}

TEST(TruncateTopK, RejectsZeroK) {
  EXPECT_EQ(error_of([] { truncate_top_k(SemanticVector{"a", {1.0}}, 0); }), Errc::kInvalidConfig);
}

TEST(TruncateTopK, NoRenormalization) {
  const auto f = truncate_top_k({"a", {0.4, 0.35, 0.25}}, 1);
  ASSERT_EQ(f.k(), 1u);
  EXPECT_EQ(f.entries()[0].prob, 0.4);
}

TEST(SharedClassCount, Examples) {
  const auto a = make({{1, 0.5}, {2, 0.5}});
  const auto b = make({{2, 0.5}, {3, 0.5}});
  EXPECT_EQ(shared_class_count(a, b), 1u);
  EXPECT_EQ(shared_class_count(a, a), 2u);
  EXPECT_EQ(shared_class_count(make({{1, 1.0}}), make({{2, 1.0}})), 0u);
}

// Randomized properties against the full-sort oracle; vectors include zeros
// and forced ties so the boundary rules are exercised.
class TruncateProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(TruncateProperties, MatchesOracleAndInvariants) {
  std::mt19937_64 rng(GetParam());
  constexpr std::size_t kN = 200;
  for (int trial = 0; trial < 50; ++trial) {
    auto probs = oracle::random_probs(rng, kN, 0.3);
    // Plant ties by copying some values.
    for (int t = 0; t < 20; ++t) probs[rng() % kN] = probs[rng() % kN];
    const SemanticVector v{"v", probs};
    for (std::size_t k : {1, 5, 17, 60, 150, 400}) {
      const auto f = truncate_top_k(v, k);
      const auto expected = oracle::dense_top_k(probs, k);
      ASSERT_EQ(f.k(), expected.size());
      for (std::size_t i = 0; i < f.k(); ++i) {
        EXPECT_EQ(f.entries()[i].class_id.value, expected[i].first);
        EXPECT_EQ(f.entries()[i].prob, expected[i].second);
      }

      // Every kept probability dominates every dropped one.
      double min_kept = 2.0;
      for (const auto& e : f.entries()) min_kept = std::min(min_kept, e.prob);
      std::vector<bool> kept(kN, false);
      for (const auto& e : f.entries()) kept[e.class_id.value - 1] = true;
      for (std::size_t i = 0; i < kN; ++i) {
        if (!kept[i]) {
          EXPECT_LE(probs[i], min_kept);
        }
      }

      // Idempotent under densification, and the sparse overload agrees.
      EXPECT_EQ(truncate_top_k(densify(f, kN), k), f);
      const auto all = truncate_top_k(v, kN);
      EXPECT_EQ(truncate_top_k(all, k), f);

      // Monotone in k.
      const auto bigger = truncate_top_k(v, k + 7);
      for (const auto& e : f.entries()) {
        EXPECT_TRUE(std::find(bigger.entries().begin(), bigger.entries().end(), e) !=
                    bigger.entries().end());
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, TruncateProperties, ::testing::Values(1u, 2u, 3u, 99u));

TEST(SharedClassCount, SymmetricAndMatchesDense) {
  std::mt19937_64 rng(7);
  constexpr std::size_t kN = 100;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = truncate_top_k({"a", oracle::random_probs(rng, kN, 0.2)}, 1 + rng() % 60);
    const auto b = truncate_top_k({"b", oracle::random_probs(rng, kN, 0.2)}, 1 + rng() % 60);
    EXPECT_EQ(shared_class_count(a, b), shared_class_count(b, a));
    EXPECT_EQ(shared_class_count(a, a), a.k());
    EXPECT_EQ(shared_class_count(a, b),
              oracle::dense_shared(densify(a, kN).probs, densify(b, kN).probs));
  }
}

TEST(Densify, RejectsClassBeyondN) {
  EXPECT_EQ(error_of([] { densify(make({{5, 1.0}}), 4); }), Errc::kBadClassId);
}

}  // namespace
}  // namespace semdist
