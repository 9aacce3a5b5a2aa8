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

#include <cmath>
#include <string>

#include "semdist/error.hpp"

namespace semdist {
namespace {

// Shared by the materialized and the streaming path so both produce the
// same bits.
struct DistanceAccumulator {
  double dot = 0.0;
  double sq = 0.0;
  double max_product = 0.0;

  void add(double f1, double f2) {
    const double product = f1 * f2;
    const double diff = f1 - f2;
    dot += product;
    sq += diff * diff;
    if (product > max_product) max_product = product;
  }

  double finish(const DistanceParams& params) const {
    if (!(max_product > 0.0)) {
      throw Error(Errc::kNoSharedClasses, "no class carries a positive probability in both features");
    }
    return (params.m1 * dot - params.m2 * sq) / max_product;
  }
};

template <typename Visit>
void merge_supports(const SparseFeature& a, const SparseFeature& b, Visit&& visit) {
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].class_id < eb[j].class_id)) {
      visit(ea[i].class_id, ea[i].prob, 0.0);
      ++i;
    } else if (i == ea.size() || eb[j].class_id < ea[i].class_id) {
      visit(eb[j].class_id, 0.0, eb[j].prob);
      ++j;
    } else {
      visit(ea[i].class_id, ea[i].prob, eb[j].prob);
      ++i;
      ++j;
    }
  }
}

}  // namespace

DistanceParams DistanceParams::with_ratio(double ratio, std::size_t min_shared, std::size_t k) {
  DistanceParams params;
  params.m1 = ratio;
  params.m2 = 1.0;
  params.min_shared = min_shared;
  params.k = k;
  return params;
}

void DistanceParams::validate() const {
  if (!(m1 > 0.0) || !std::isfinite(m1) || !(m2 > 0.0) || !std::isfinite(m2)) {
    throw Error(Errc::kInvalidConfig, "weights must be positive and finite (m1=" +
                                          std::to_string(m1) + ", m2=" + std::to_string(m2) + ")");
  }
  if (k == 0) throw Error(Errc::kInvalidConfig, "k must be at least 1");
}

bool coarse_filter(const SparseFeature& a, const SparseFeature& b, const DistanceParams& params) {
  return shared_class_count(a, b) >= params.min_shared;
}

FusedPairs fuse(const SparseFeature& a, const SparseFeature& b) {
  if (a.empty() && b.empty()) {
    throw Error(Errc::kEmptyUnion, "cannot fuse two empty features ('" + a.image_id() + "', '" +
                                       b.image_id() + "')");
  }
  FusedPairs fused;
  fused.pairs.reserve(a.k() + b.k());
  merge_supports(a, b, [&](ClassId id, double f1, double f2) {
    fused.pairs.push_back({id, f1, f2});
  });
  return fused;
}

double semantic_distance(const FusedPairs& fused, const DistanceParams& params) {
  DistanceAccumulator acc;
  for (const auto& p : fused.pairs) acc.add(p.f1, p.f2);
  return acc.finish(params);
}

double fused_semantic_distance(const SparseFeature& a, const SparseFeature& b,
                               const DistanceParams& params) {
  DistanceAccumulator acc;
  merge_supports(a, b, [&](ClassId, double f1, double f2) { acc.add(f1, f2); });
  return acc.finish(params);
}

std::optional<double> score_pair(const SparseFeature& a, const SparseFeature& b,
                                 const DistanceParams& params) {
  if (!coarse_filter(a, b, params)) return std::nullopt;
  if (a.empty() && b.empty()) {
    throw Error(Errc::kEmptyUnion, "cannot fuse two empty features");
  }
  return fused_semantic_distance(a, b, params);
}

}  // namespace semdist
