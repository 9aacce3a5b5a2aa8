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
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semdist/features.hpp"
#include "semdist/metrics.hpp"
#include "semdist/retrieval_index.hpp"
#include "semdist/similarity.hpp"

namespace semdist {

struct RunConfig {
  std::size_t n_classes = kDefaultClassCount;
  std::size_t k = kDefaultTopK;
  double m_ratio = kDefaultWeightRatio;
  std::size_t min_shared = kDefaultMinShared;
  std::size_t p = kDefaultCutoff;
  std::size_t workers = 1;
  std::uint64_t seed = 42;
  bool strict_prob = false;
  RelevanceMode relevance = RelevanceMode::kSharedLabels;

  // Throws Error(kInvalidConfig) unless all sizes are positive, k <= n_classes
  // and the ratio is positive and finite.
  void validate() const;

  DistanceParams distance_params() const;
  EvaluationOptions evaluation_options() const;
};

// Truncates `features` to config.k, indexes them and evaluates every one of
// them as a leave-one-out query.
EvaluationReport evaluate_corpus(std::span<const SparseFeature> features, const LabelMap& labels,
                                 const RunConfig& config);

struct SweepRow {
  double value = 0.0;  // K or M1/M2
  double mean_ndcg = 0.0;
  double mean_acg = 0.0;
  std::size_t degenerate = 0;
};

// One evaluate_corpus run per K; features must already hold at least
// max(k_values) entries where available, since truncation can only shrink.
std::vector<SweepRow> sweep_k(std::span<const SparseFeature> features, const LabelMap& labels,
                              const RunConfig& config, std::span<const std::size_t> k_values);

std::vector<SweepRow> sweep_m(std::span<const SparseFeature> features, const LabelMap& labels,
                              const RunConfig& config, std::span<const double> ratios);

// `<column>,NDCG@p,ACG@p` header then one row per sweep point.
void write_sweep_csv(std::ostream& out, const std::string& column, std::span<const SweepRow> rows,
                     std::size_t p);

}  // namespace semdist
