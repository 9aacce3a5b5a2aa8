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
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semdist/features.hpp"
#include "semdist/metrics.hpp"

namespace semdist {

// Probability files hold one image per line, in either flavor:
//   dense:   img_001,0.5,0.3,0.2          (exactly N values, class 1..N)
//   sparse:  img_002 7:0.8 12:0.2         (unlisted classes are 0)
// Blank lines and lines starting with '#' are ignored. Malformed lines raise
// ParseError with the line number; well-formed but invalid vectors raise the
// validation error of validate_vector.
struct ProbabilityFileOptions {
  std::size_t n_classes = kDefaultClassCount;
  bool strict_prob = false;
};

// Streams every vector to `sink` without holding the whole file in memory.
void read_probabilities(std::istream& in, const ProbabilityFileOptions& options,
                        const std::function<void(SemanticVector&&)>& sink,
                        std::string_view source = "<probabilities>");

std::vector<SemanticVector> ingest_probabilities(const std::string& path,
                                                 const ProbabilityFileOptions& options);

// Reads vectors and truncates each to its top-k on the fly.
std::vector<SparseFeature> ingest_features(const std::string& path,
                                           const ProbabilityFileOptions& options, std::size_t k);

void write_probabilities_sparse(std::ostream& out, std::span<const SparseFeature> features);
void write_probabilities_dense(std::ostream& out, std::span<const SparseFeature> features,
                               std::size_t n_classes);

// Label files: `image_id<TAB>label;label;...`. An empty label field is legal.
LabelMap read_labels(std::istream& in, std::string_view source = "<labels>");
LabelMap ingest_labels(const std::string& path);

// Lines are emitted in the order of `order`.
void write_labels(std::ostream& out, const LabelMap& labels, std::span<const std::string> order);

}  // namespace semdist
