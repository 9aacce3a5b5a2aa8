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

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "semdist/features.hpp"

namespace semdist {

inline constexpr double kDefaultWeightRatio = 10000.0;
inline constexpr std::size_t kDefaultMinShared = 10;

/// Weights and pruning threshold of the semantic score.
///
/// Only the ratio m1/m2 matters for rankings, so the defaults pin m2 = 1 and
/// m1 = ratio. A candidate pair is scored only when the two features share at
/// least `min_shared` class ids.
struct DistanceParams {
  double m1 = kDefaultWeightRatio;
  double m2 = 1.0;
  std::size_t min_shared = kDefaultMinShared;
  std::size_t k = kDefaultTopK;

  static DistanceParams with_ratio(double ratio, std::size_t min_shared = kDefaultMinShared,
                                   std::size_t k = kDefaultTopK);

  // Throws Error(kInvalidConfig) unless m1 > 0, m2 > 0 (both finite) and k >= 1.
  void validate() const;
};

struct FusedPair {
  ClassId class_id;
  double f1 = 0.0;
  double f2 = 0.0;

  friend bool operator==(const FusedPair&, const FusedPair&) = default;
};

/// Union-aligned probabilities of two features, zero where a class is
/// missing from one side, ordered by class id.
struct FusedPairs {
  std::vector<FusedPair> pairs;

  std::size_t n() const noexcept { return pairs.size(); }
};

bool coarse_filter(const SparseFeature& a, const SparseFeature& b, const DistanceParams& params);

// Throws Error(kEmptyUnion) when both features are empty.
FusedPairs fuse(const SparseFeature& a, const SparseFeature& b);

// D = (m1 * sum f1*f2 - m2 * sum (f1 - f2)^2) / max(f1*f2), accumulated in
// ascending class order. Larger is more similar. Throws
// Error(kNoSharedClasses) when every per-class product is zero.
double semantic_distance(const FusedPairs& fused, const DistanceParams& params);

// Same value as semantic_distance(fuse(a, b), params), bit for bit, without
// materializing the fused matrix. Does not apply the coarse filter.
double fused_semantic_distance(const SparseFeature& a, const SparseFeature& b,
                               const DistanceParams& params);

// Coarse filter followed by fusion and scoring. std::nullopt means the pair
// was rejected by the filter and never fused.
std::optional<double> score_pair(const SparseFeature& a, const SparseFeature& b,
                                 const DistanceParams& params);

}  // namespace semdist
