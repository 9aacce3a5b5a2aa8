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

// Reference implementations used only by tests. They deliberately take the
// slow, obvious route (dense loops, full sorts, std::set intersections) so
// they can check the optimized code paths.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "semdist/features.hpp"
#include "semdist/metrics.hpp"
#include "semdist/retrieval_index.hpp"
#include "semdist/similarity.hpp"

namespace semdist::oracle {

// Full-sort top-k over a dense vector: positive entries by (prob desc, id asc).
std::vector<std::pair<std::uint32_t, double>> dense_top_k(const std::vector<double>& probs,
                                                          std::size_t k);

// Semantic score over all N dense dimensions where either side is positive.
// Throws std::domain_error when no dimension has a positive product.
double dense_distance(const std::vector<double>& a, const std::vector<double>& b, double m1,
                      double m2);

std::size_t dense_shared(const std::vector<double>& a, const std::vector<double>& b);

// score_pair against every database item, full sort, truncate to p.
RankedList naive_query(const FeatureIndex& index, const SparseFeature& q, std::size_t p);

struct BruteForceResult {
  double mean_ndcg = 0.0;
  double mean_acg = 0.0;
  std::size_t degenerate = 0;
  // Fraction of each query's top-p whose cluster matches the query's.
  std::vector<double> same_cluster_fraction;
};

// All-pairs evaluation through dense vectors: for every image, scores every
// other image with dense_distance (coarse filter from dense_shared), sorts,
// and computes NDCG/ACG with shared-label relevance.
BruteForceResult brute_force_evaluate(const std::vector<SparseFeature>& features,
                                      const LabelMap& labels,
                                      const std::vector<std::size_t>& cluster_of,
                                      std::size_t n_classes, std::size_t k, double m1, double m2,
                                      std::size_t min_shared, std::size_t p);

double reference_dcg(const std::vector<unsigned>& levels, std::size_t p);

// Random probability vector of length n with a random number of zeros,
// normalized to sum 1.
std::vector<double> random_probs(std::mt19937_64& rng, std::size_t n, double zero_fraction = 0.0);

}  // namespace semdist::oracle
