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

#include "semdist/similarity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"

namespace semdist {
namespace {

using testing::error_of;
using testing::make_feature;

DistanceParams params_with_min_shared(std::size_t min_shared) {
  return DistanceParams::with_ratio(10000.0, min_shared, 60);
}

TEST(DistanceParams, DefaultsMatchPublishedSettings) {
  const DistanceParams params;
  EXPECT_EQ(params.m1, 10000.0);
  EXPECT_EQ(params.m2, 1.0);
  EXPECT_EQ(params.min_shared, 10u);
  EXPECT_EQ(params.k, 60u);
}

TEST(DistanceParams, RejectsNonPositiveWeights) {
  DistanceParams params;
  params.m1 = 0.0;
  EXPECT_EQ(error_of([&] { params.validate(); }), Errc::kInvalidConfig);
  params.m1 = 1.0;
  params.m2 = -1.0;
  EXPECT_EQ(error_of([&] { params.validate(); }), Errc::kInvalidConfig);
}

TEST(CoarseFilter, ThresholdIsInclusive) {
  std::vector<std::pair<std::uint32_t, double>> base, nine, ten;
  for (std::uint32_t c = 1; c <= 20; ++c) base.emplace_back(c, 0.05);
  for (std::uint32_t c = 12; c <= 31; ++c) nine.emplace_back(c, 0.05);  // shares 12..20
  for (std::uint32_t c = 11; c <= 30; ++c) ten.emplace_back(c, 0.05);   // shares 11..20
  const auto a = make_feature(base), b9 = make_feature(nine), b10 = make_feature(ten);
  const auto params = params_with_min_shared(10);
  EXPECT_EQ(shared_class_count(a, b9), 9u);
  EXPECT_EQ(shared_class_count(a, b10), 10u);
  EXPECT_FALSE(coarse_filter(a, b9, params));
  EXPECT_TRUE(coarse_filter(a, b10, params));
  EXPECT_FALSE(coarse_filter(b9, a, params));
  EXPECT_TRUE(coarse_filter(b10, a, params));
}

TEST(CoarseFilter, SelfComparisonPasses) {
  std::vector<std::pair<std::uint32_t, double>> e;
  for (std::uint32_t c = 1; c <= 60; ++c) e.emplace_back(c * 7, 1.0 / 60);
  const auto a = make_feature(e);
  EXPECT_TRUE(coarse_filter(a, a, DistanceParams{}));
}

TEST(Fuse, WorkedExample) {
  const auto a = make_feature({{1, 0.6}, {2, 0.3}});
  const auto b = make_feature({{1, 0.5}, {3, 0.4}});
  const auto fused = fuse(a, b);
  ASSERT_EQ(fused.n(), 3u);
  EXPECT_EQ(fused.pairs[0], (FusedPair{ClassId{1}, 0.6, 0.5}));
  EXPECT_EQ(fused.pairs[1], (FusedPair{ClassId{2}, 0.3, 0.0}));
  EXPECT_EQ(fused.pairs[2], (FusedPair{ClassId{3}, 0.0, 0.4}));
}

TEST(Fuse, IdenticalSingletonAndDisjointSupports) {
  const auto s = make_feature({{5, 1.0}});
  const auto fused = fuse(s, s);
  ASSERT_EQ(fused.n(), 1u);
  EXPECT_EQ(fused.pairs[0], (FusedPair{ClassId{5}, 1.0, 1.0}));

  const auto d = fuse(make_feature({{1, 0.9}}), make_feature({{2, 0.9}}));
  ASSERT_EQ(d.n(), 2u);
  EXPECT_EQ(d.pairs[0], (FusedPair{ClassId{1}, 0.9, 0.0}));
  EXPECT_EQ(d.pairs[1], (FusedPair{ClassId{2}, 0.0, 0.9}));
}

TEST(Fuse, EmptyUnionIsAnError) {
  EXPECT_EQ(error_of([] { fuse(make_feature({}), make_feature({})); }), Errc::kEmptyUnion);
}

TEST(Fuse, MatchesDenseUnionAndSizeBounds) {
  std::mt19937_64 rng(11);
  constexpr std::size_t kN = 300;
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = truncate_top_k({"a", oracle::random_probs(rng, kN, 0.1)}, 1 + rng() % 60);
    const auto b = truncate_top_k({"b", oracle::random_probs(rng, kN, 0.1)}, 1 + rng() % 60);
    const auto fused = fuse(a, b);
    const auto da = densify(a, kN).probs, db = densify(b, kN).probs;
    std::size_t expected = 0;
    for (std::size_t i = 0; i < kN; ++i) {
      if (da[i] == 0.0 && db[i] == 0.0) continue;
      ASSERT_LT(expected, fused.n());
      EXPECT_EQ(fused.pairs[expected].class_id.value, i + 1);
      EXPECT_EQ(fused.pairs[expected].f1, da[i]);
      EXPECT_EQ(fused.pairs[expected].f2, db[i]);
      ++expected;
    }
    EXPECT_EQ(fused.n(), expected);
    EXPECT_GE(fused.n(), std::max(a.k(), b.k()));
    EXPECT_LE(fused.n(), a.k() + b.k());
  }
}

TEST(SemanticDistance, WorkedExample) {
  const auto fused = fuse(make_feature({{1, 0.6}, {2, 0.3}}), make_feature({{1, 0.5}, {3, 0.4}}));
  // dot 0.30, squared differences 0.26, max product 0.30
  EXPECT_NEAR(semantic_distance(fused, params_with_min_shared(1)), 9999.133333333333, 1e-8);
}

TEST(SemanticDistance, IdenticalInputsGiveM1) {
  const auto a = make_feature({{1, 0.5}});
  EXPECT_DOUBLE_EQ(semantic_distance(fuse(a, a), DistanceParams{}), 10000.0);
}

TEST(SemanticDistance, DisjointSupportsHaveNoSharedClasses) {
  const auto fused = fuse(make_feature({{1, 0.9}}), make_feature({{2, 0.9}}));
  EXPECT_EQ(error_of([&] { semantic_distance(fused, DistanceParams{}); }), Errc::kNoSharedClasses);
}

TEST(SemanticDistance, StreamingPathIsBitIdentical) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = truncate_top_k({"a", oracle::random_probs(rng, 80)}, 60);
    const auto b = truncate_top_k({"b", oracle::random_probs(rng, 80)}, 60);
    EXPECT_EQ(fused_semantic_distance(a, b, DistanceParams{}),
              semantic_distance(fuse(a, b), DistanceParams{}));
  }
}

TEST(ScorePair, RejectedBelowThreshold) {
  const auto a = make_feature({{1, 0.6}, {2, 0.3}});
  const auto b = make_feature({{1, 0.5}, {3, 0.4}});
  EXPECT_FALSE(score_pair(a, b, DistanceParams{}).has_value());
  const auto score = score_pair(a, b, params_with_min_shared(1));
  ASSERT_TRUE(score.has_value());
  EXPECT_NEAR(*score, 9999.133333333333, 1e-8);
}

TEST(ScorePair, SelfScoreFormula) {
  std::vector<std::pair<std::uint32_t, double>> e;
  double sum_sq = 0.0, max_sq = 0.0;
  for (std::uint32_t c = 1; c <= 60; ++c) {
    const double p = 0.001 * c;
    e.emplace_back(c * 3, p);
    sum_sq += p * p;
    max_sq = std::max(max_sq, p * p);
  }
  const auto a = make_feature(e);
  const auto score = score_pair(a, a, DistanceParams{});
  ASSERT_TRUE(score.has_value());
  EXPECT_NEAR(*score, 10000.0 * sum_sq / max_sq, 1e-9 * 10000.0 * sum_sq / max_sq);
}

TEST(ScorePair, ZeroThresholdPropagatesNoSharedClasses) {
  EXPECT_EQ(error_of([] {
              score_pair(make_feature({{1, 0.9}}), make_feature({{2, 0.9}}),
                         params_with_min_shared(0));
            }),
            Errc::kNoSharedClasses);
}

TEST(ScorePair, SymmetricAndMatchesDenseOracle) {
  std::mt19937_64 rng(2024);
  constexpr std::size_t kN = 150;
  const auto params = params_with_min_shared(1);
  int scored = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = truncate_top_k({"a", oracle::random_probs(rng, kN)}, 60);
    const auto b = truncate_top_k({"b", oracle::random_probs(rng, kN)}, 60);
    const auto ab = score_pair(a, b, params);
    const auto ba = score_pair(b, a, params);
    ASSERT_EQ(ab.has_value(), ba.has_value());
    if (!ab) continue;
    ++scored;
    EXPECT_LE(std::fabs(*ab - *ba), 1e-12 * std::fabs(*ab));
    const double dense =
        oracle::dense_distance(densify(a, kN).probs, densify(b, kN).probs, params.m1, params.m2);
    EXPECT_LE(std::fabs(*ab - dense), 1e-9 * std::fabs(dense));
  }
  EXPECT_GT(scored, 900);
}

// Larger |f1 - f2| at fixed products and fixed max product lowers the score.
TEST(SemanticDistance, PenaltyGrowsWithDisagreement) {
  const DistanceParams params;
  // (0.2, 0.2) and (0.1, 0.4) share product 0.04; the max product 0.09 is elsewhere.
  FusedPairs agree{{{ClassId{1}, 0.3, 0.3}, {ClassId{2}, 0.2, 0.2}}};
  FusedPairs disagree{{{ClassId{1}, 0.3, 0.3}, {ClassId{2}, 0.1, 0.4}}};
  FusedPairs worse{{{ClassId{1}, 0.3, 0.3}, {ClassId{2}, 0.05, 0.8}}};
  EXPECT_GT(semantic_distance(agree, params), semantic_distance(disagree, params));
  EXPECT_GT(semantic_distance(disagree, params), semantic_distance(worse, params));
}

TEST(ScorePair, SelfDominatesPerturbedSameSupport) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = truncate_top_k({"a", oracle::random_probs(rng, 120)}, 60);
    // Shrink every entry except the one holding the max product, so the max
    // product and the support stay fixed.
    std::size_t top = 0;
    for (std::size_t i = 0; i < a.k(); ++i) {
      if (a.entries()[i].prob > a.entries()[top].prob) top = i;
    }
    std::vector<FeatureEntry> entries(a.entries().begin(), a.entries().end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i == top) continue;
      entries[i].prob *= u(rng);
    }
    const SparseFeature b("b", entries);
    EXPECT_GE(*score_pair(a, a, DistanceParams{}), *score_pair(a, b, DistanceParams{}));
  }
}

TEST(ScorePair, RankingInvariantUnderJointWeightScaling) {
  std::mt19937_64 rng(3);
  const auto q = truncate_top_k({"q", oracle::random_probs(rng, 100)}, 60);
  std::vector<SparseFeature> db;
  for (int i = 0; i < 200; ++i) db.push_back(truncate_top_k({"d", oracle::random_probs(rng, 100)}, 60));
  auto order = [&](double scale) {
    DistanceParams params = params_with_min_shared(1);
    params.m1 *= scale;
    params.m2 *= scale;
    std::vector<std::pair<double, int>> scores;
    for (int i = 0; i < 200; ++i) scores.emplace_back(-*score_pair(q, db[i], params), i);
    std::sort(scores.begin(), scores.end());
    std::vector<int> out;
    for (auto& s : scores) out.push_back(s.second);
    return out;
  };
  EXPECT_EQ(order(1.0), order(4.0));
  EXPECT_EQ(order(1.0), order(0.25));
}

}  // namespace
}  // namespace semdist
