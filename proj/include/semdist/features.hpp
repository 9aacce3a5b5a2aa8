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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace semdist {

inline constexpr std::size_t kDefaultClassCount = 1000;
inline constexpr std::size_t kDefaultTopK = 60;
inline constexpr double kProbabilitySumTolerance = 1e-3;

/// 1-based serial number of a classifier output class.
struct ClassId {
  std::uint32_t value = 0;

  friend auto operator<=>(ClassId, ClassId) = default;
};

/// Dense classifier output for one image. probs[i] belongs to class i + 1.
struct SemanticVector {
  std::string image_id;
  std::vector<double> probs;
};

struct FeatureEntry {
  ClassId class_id;
  double prob = 0.0;

  friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

/// Compact top-K semantic feature: strictly positive probabilities keyed by
/// strictly increasing class id. Immutable once constructed.
class SparseFeature {
 public:
  SparseFeature() = default;

  // Throws Error(kBadFeature) if ids are not strictly increasing, an id is 0,
  // or a probability is outside (0, 1].
  SparseFeature(std::string image_id, std::vector<FeatureEntry> entries);

  const std::string& image_id() const noexcept { return image_id_; }
  std::span<const FeatureEntry> entries() const noexcept { return entries_; }
  std::size_t k() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  // Largest class id, or 0 for an empty feature.
  std::uint32_t max_class_id() const noexcept {
    return entries_.empty() ? 0 : entries_.back().class_id.value;
  }

  friend bool operator==(const SparseFeature&, const SparseFeature&) = default;

 private:
  std::string image_id_;
  std::vector<FeatureEntry> entries_;
};

// Throws Error with kBadLength, kOutOfRange or kNotNormalized. The sum check
// (|sum - 1| <= 1e-3) only runs when `strict` is set.
void validate_vector(const SemanticVector& v, std::size_t n_classes, bool strict);

// Keeps the min(k, #positive) highest-probability classes; at the boundary a
// lower class id wins a tie. Output is ordered by class id and not
// renormalized. k must be >= 1.
SparseFeature truncate_top_k(std::string image_id, std::span<const double> probs, std::size_t k);
SparseFeature truncate_top_k(const SemanticVector& v, std::size_t k);

// Equivalent to truncate_top_k(densify(f), k) for any N covering f.
SparseFeature truncate_top_k(const SparseFeature& f, std::size_t k);

SemanticVector densify(const SparseFeature& f, std::size_t n_classes);

std::size_t shared_class_count(const SparseFeature& a, const SparseFeature& b) noexcept;

}  // namespace semdist
