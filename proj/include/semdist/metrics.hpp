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
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semdist/features.hpp"
#include "semdist/retrieval_index.hpp"

namespace semdist {

inline constexpr std::size_t kDefaultCutoff = 100;

struct LabelSet {
  std::string image_id;
  std::set<std::string> labels;
};

using LabelMap = std::unordered_map<std::string, LabelSet>;

// Graded relevance r_i of a retrieved image to the query.
enum class RelevanceMode {
  kSharedLabels,  // number of shared concept labels
  kBinary,        // 1 if any label is shared, else 0
};

using RelevanceLevels = std::vector<unsigned>;

unsigned relevance_level(const LabelSet& query, const LabelSet& item,
                         RelevanceMode mode = RelevanceMode::kSharedLabels);

// sum_{i=1..min(p, n)} (2^{r_i} - 1) / log2(1 + i)
double dcg_at_p(std::span<const unsigned> levels, std::size_t p);

// dcg(levels) / dcg(ideal); 0 when the ideal DCG is 0.
double ndcg_at_p(std::span<const unsigned> levels, std::span<const unsigned> ideal, std::size_t p);

// (1/p) sum_{i=1..p} r_i; positions past the end of `levels` count as 0.
double acg_at_p(std::span<const unsigned> levels, std::size_t p);

// Best achievable ordering of a relevance multiset, truncated to p.
RelevanceLevels ideal_levels(RelevanceLevels all, std::size_t p);

struct QueryEvaluation {
  std::string query_id;
  double ndcg = 0.0;
  double acg = 0.0;
  bool degenerate = false;  // ideal DCG is 0; excluded from the means
};

struct EvaluationReport {
  std::size_t p = kDefaultCutoff;
  std::vector<QueryEvaluation> queries;
  double mean_ndcg = 0.0;
  double mean_acg = 0.0;
  std::size_t degenerate_count = 0;
};

struct EvaluationOptions {
  std::size_t p = kDefaultCutoff;
  std::size_t workers = 1;
  RelevanceMode relevance = RelevanceMode::kSharedLabels;
};

// Ranks every query against the index and scores the top-p list. The ideal
// ordering is taken over all database items except the query itself. Every
// query and every database image needs labels, otherwise
// Error(kMissingLabels). Rows keep the order of `queries`.
EvaluationReport evaluate_run(const FeatureIndex& index, std::span<const SparseFeature> queries,
                              const LabelMap& labels, const EvaluationOptions& options);

// One `query_id\tNDCG\tACG\tdegenerate` line per query, then
// `MEAN\tNDCG\tACG\t<degenerate count>`; six decimals.
void write_report(std::ostream& out, const EvaluationReport& report);

}  // namespace semdist
