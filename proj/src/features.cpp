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

#include <algorithm>
#include <cmath>

#include "semdist/error.hpp"

namespace semdist {

SparseFeature::SparseFeature(std::string image_id, std::vector<FeatureEntry> entries)
    : image_id_(std::move(image_id)), entries_(std::move(entries)) {
  std::uint32_t prev = 0;
  for (const auto& e : entries_) {
    if (e.class_id.value == 0 || e.class_id.value <= prev) {
      throw Error(Errc::kBadFeature,
                  "feature '" + image_id_ + "': class ids must be positive and strictly increasing");
    }
    if (!(e.prob > 0.0 && e.prob <= 1.0)) {
      throw Error(Errc::kBadFeature, "feature '" + image_id_ + "': probability of class " +
                                         std::to_string(e.class_id.value) + " outside (0, 1]");
    }
    prev = e.class_id.value;
  }
}

void validate_vector(const SemanticVector& v, std::size_t n_classes, bool strict) {
  if (v.probs.size() != n_classes) {
    throw Error(Errc::kBadLength, "vector '" + v.image_id + "' has " +
                                      std::to_string(v.probs.size()) + " entries, expected " +
                                      std::to_string(n_classes));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < v.probs.size(); ++i) {
    const double p = v.probs[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(Errc::kOutOfRange, "vector '" + v.image_id + "': class " + std::to_string(i + 1) +
                                         " probability outside [0, 1]");
    }
    sum += p;
  }
  if (strict && std::fabs(sum - 1.0) > kProbabilitySumTolerance) {
    throw Error(Errc::kNotNormalized,
                "vector '" + v.image_id + "' sums to " + std::to_string(sum));
  }
}

SparseFeature truncate_top_k(std::string image_id, std::span<const double> probs, std::size_t k) {
  if (k == 0) throw Error(Errc::kInvalidConfig, "top-k size must be at least 1");

  std::vector<std::uint32_t> positive;
  positive.reserve(probs.size());
  for (std::uint32_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) positive.push_back(i);
  }

  if (positive.size() > k) {
    auto by_rank = [&](std::uint32_t a, std::uint32_t b) {
      if (probs[a] != probs[b]) return probs[a] > probs[b];
      return a < b;
    };
    std::nth_element(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(k) - 1,
                     positive.end(), by_rank);
    positive.resize(k);
    std::sort(positive.begin(), positive.end());
  }

  std::vector<FeatureEntry> entries;
  entries.reserve(positive.size());
  for (auto i : positive) entries.push_back({ClassId{i + 1}, probs[i]});
  return SparseFeature(std::move(image_id), std::move(entries));
}

SparseFeature truncate_top_k(const SemanticVector& v, std::size_t k) {
  return truncate_top_k(v.image_id, v.probs, k);
}

SparseFeature truncate_top_k(const SparseFeature& f, std::size_t k) {
  if (k == 0) throw Error(Errc::kInvalidConfig, "top-k size must be at least 1");
  if (f.k() <= k) return f;
  std::vector<FeatureEntry> entries(f.entries().begin(), f.entries().end());
  std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(k) - 1,
                   entries.end(), [](const FeatureEntry& a, const FeatureEntry& b) {
                     if (a.prob != b.prob) return a.prob > b.prob;
                     return a.class_id < b.class_id;
                   });
  entries.resize(k);
  std::sort(entries.begin(), entries.end(),
            [](const FeatureEntry& a, const FeatureEntry& b) { return a.class_id < b.class_id; });
  return SparseFeature(f.image_id(), std::move(entries));
}

SemanticVector densify(const SparseFeature& f, std::size_t n_classes) {
  if (f.max_class_id() > n_classes) {
    throw Error(Errc::kBadClassId, "feature '" + f.image_id() + "' has class " +
                                       std::to_string(f.max_class_id()) + " > " +
                                       std::to_string(n_classes));
  }
  SemanticVector v{f.image_id(), std::vector<double>(n_classes, 0.0)};
  for (const auto& e : f.entries()) v.probs[e.class_id.value - 1] = e.prob;
  return v;
}

std::size_t shared_class_count(const SparseFeature& a, const SparseFeature& b) noexcept {
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0, shared = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].class_id < eb[j].class_id) {
      ++i;
    } else if (eb[j].class_id < ea[i].class_id) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return shared;
}

}  // namespace semdist
