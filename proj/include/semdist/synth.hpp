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
#include <string>
#include <vector>

#include "semdist/features.hpp"
#include "semdist/metrics.hpp"

namespace semdist {

/// Planted-cluster corpus parameters.
///
/// Every image has exactly `k` positive classes. Members of a cluster share
/// `overlap` core classes whose probabilities follow a cluster profile with
/// per-image noise; with `subclusters > 1` each sub-group additionally shares
/// `sub_overlap` classes and gets a second label, which yields graded
/// relevance (2 = same sub-group, 1 = same cluster). The remaining classes are
/// drawn uniformly from everything outside the shared ones and always carry
/// less mass than any core class.
struct SynthConfig {
  std::size_t clusters = 10;
  std::size_t per_cluster = 100;
  std::size_t overlap = 40;
  std::size_t subclusters = 1;
  std::size_t sub_overlap = 0;
  std::size_t k = kDefaultTopK;
  std::size_t n_classes = kDefaultClassCount;
  std::uint64_t seed = 42;

  // Throws Error(kInvalidConfig) for impossible shapes.
  void validate() const;
};

struct SynthCorpus {
  std::vector<SparseFeature> features;  // normalized to sum 1, image order
  std::vector<std::string> image_ids;
  std::vector<std::size_t> cluster_of;
  LabelMap labels;
};

SynthCorpus generate_synthetic(const SynthConfig& config);

}  // namespace semdist
