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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semdist/features.hpp"
#include "semdist/similarity.hpp"

namespace semdist {

struct RankedItem {
  std::string image_id;
  std::optional<double> score;  // std::nullopt: rejected by the coarse filter
  std::size_t shared = 0;

  bool rejected() const noexcept { return !score.has_value(); }

  friend bool operator==(const RankedItem&, const RankedItem&) = default;
};

/// Scored items by descending score (ties: ascending image id), followed by
/// rejected items by descending shared count (ties: ascending image id).
struct RankedList {
  std::string query_id;
  std::vector<RankedItem> items;

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

// Ordering used for the scored prefix and the rejected tail of a RankedList.
bool ranks_before(const RankedItem& a, const RankedItem& b);

/// Immutable database of sparse features with per-class posting lists.
///
/// Features are stored sorted by image id, so a feature's position doubles as
/// its id rank; posting lists hold positions in ascending order. Copies share
/// the underlying storage.
class FeatureIndex {
 public:
  FeatureIndex() = default;

  // Throws Error with kDuplicateImageId, kBadClassId (class id > n_classes)
  // or kBadFeature (more than params.k entries).
  static FeatureIndex build(std::vector<SparseFeature> features, const DistanceParams& params,
                            std::size_t n_classes = kDefaultClassCount);

  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }
  std::size_t n_classes() const noexcept;
  const DistanceParams& params() const noexcept { return params_; }

  // Same features and postings, different scoring parameters.
  FeatureIndex with_params(const DistanceParams& params) const;

  const SparseFeature& feature(std::size_t position) const;
  std::span<const SparseFeature> features() const noexcept;
  std::optional<std::size_t> find(std::string_view image_id) const;
  std::span<const std::uint32_t> postings(ClassId id) const noexcept;

  // Shared-class counts of `q` against every feature, by position.
  std::vector<std::uint32_t> shared_counts(const SparseFeature& q) const;

  // Top-p ranked list for `q`. A database item with q's image id is left out.
  // Items sharing fewer than max(min_shared, 1) classes are never fused.
  RankedList query(const SparseFeature& q, std::size_t p) const;

 private:
  struct Storage;

  std::shared_ptr<const Storage> storage_;
  DistanceParams params_;
};

// Text format:
//   semdist-index v1 N=<classes> K=<k>
//   <image_id>\t<k>\t<class>:<prob> <class>:<prob> ...
// Probabilities use the shortest decimal that round-trips.
void write_index(std::ostream& out, const FeatureIndex& index);
void save_index(const std::string& path, const FeatureIndex& index);

// Rebuilds the index with the N and K from the header; weights and
// min_shared come from `params`. Throws ParseError on malformed input.
FeatureIndex read_index(std::istream& in, DistanceParams params,
                        std::string_view source = "<index>");
FeatureIndex load_index(const std::string& path, const DistanceParams& params);

}  // namespace semdist
