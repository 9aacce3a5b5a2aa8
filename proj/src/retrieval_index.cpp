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

#include "semdist/retrieval_index.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "semdist/error.hpp"
#include "semdist/text.hpp"

namespace semdist {

struct FeatureIndex::Storage {
  std::size_t n_classes = 0;
  std::vector<SparseFeature> features;          // sorted by image id
  std::vector<std::uint32_t> posting_offsets;  // n_classes + 2 entries, indexed by class id
  std::vector<std::uint32_t> posting_data;
};

namespace {

struct Candidate {
  double score;
  std::uint32_t shared;
  std::uint32_t position;
};

bool scored_before(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.position < b.position;
}

bool rejected_before(const Candidate& a, const Candidate& b) {
  if (a.shared != b.shared) return a.shared > b.shared;
  return a.position < b.position;
}

void take_top(std::vector<Candidate>& v, std::size_t count,
              bool (*before)(const Candidate&, const Candidate&)) {
  count = std::min(count, v.size());
  std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(count), v.end(), before);
  v.resize(count);
}

}  // namespace

bool ranks_before(const RankedItem& a, const RankedItem& b) {
  if (a.rejected() != b.rejected()) return !a.rejected();
  if (!a.rejected() && *a.score != *b.score) return *a.score > *b.score;
  if (a.rejected() && a.shared != b.shared) return a.shared > b.shared;
  return a.image_id < b.image_id;
}

FeatureIndex FeatureIndex::build(std::vector<SparseFeature> features, const DistanceParams& params,
                                 std::size_t n_classes) {
  params.validate();
  if (n_classes == 0) throw Error(Errc::kInvalidConfig, "class count must be at least 1");

  std::sort(features.begin(), features.end(),
            [](const SparseFeature& a, const SparseFeature& b) { return a.image_id() < b.image_id(); });
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    if (i > 0 && features[i - 1].image_id() == f.image_id()) {
      throw Error(Errc::kDuplicateImageId, "image id '" + f.image_id() + "' appears twice");
    }
    if (f.max_class_id() > n_classes) {
      throw Error(Errc::kBadClassId, "feature '" + f.image_id() + "' has class " +
                                         std::to_string(f.max_class_id()) + " > N=" +
                                         std::to_string(n_classes));
    }
    if (f.k() > params.k) {
      throw Error(Errc::kBadFeature, "feature '" + f.image_id() + "' has " + std::to_string(f.k()) +
                                         " entries, more than K=" + std::to_string(params.k));
    }
  }

  auto storage = std::make_shared<Storage>();
  storage->n_classes = n_classes;

  // Counting sort into CSR posting lists; visiting features in position order
  // keeps every list ascending.
  std::vector<std::uint32_t> offsets(n_classes + 2, 0);
  for (const auto& f : features) {
    for (const auto& e : f.entries()) ++offsets[e.class_id.value + 1];
  }
  for (std::size_t c = 1; c < offsets.size(); ++c) offsets[c] += offsets[c - 1];
  std::vector<std::uint32_t> data(offsets.back());
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::uint32_t pos = 0; pos < features.size(); ++pos) {
    for (const auto& e : features[pos].entries()) data[cursor[e.class_id.value]++] = pos;
  }

  storage->posting_offsets = std::move(offsets);
  storage->posting_data = std::move(data);
  storage->features = std::move(features);

  FeatureIndex index;
  index.storage_ = std::move(storage);
  index.params_ = params;
  return index;
}

std::size_t FeatureIndex::size() const noexcept {
  return storage_ ? storage_->features.size() : 0;
}

std::size_t FeatureIndex::n_classes() const noexcept {
  return storage_ ? storage_->n_classes : 0;
}

FeatureIndex FeatureIndex::with_params(const DistanceParams& params) const {
  params.validate();
  for (const auto& f : features()) {
    if (f.k() > params.k) {
      throw Error(Errc::kBadFeature, "feature '" + f.image_id() + "' exceeds K=" +
                                         std::to_string(params.k));
    }
  }
  FeatureIndex copy = *this;
  copy.params_ = params;
  return copy;
}

const SparseFeature& FeatureIndex::feature(std::size_t position) const {
  return storage_->features.at(position);
}

std::span<const SparseFeature> FeatureIndex::features() const noexcept {
  if (!storage_) return {};
  return storage_->features;
}

std::optional<std::size_t> FeatureIndex::find(std::string_view image_id) const {
  auto all = features();
  auto it = std::lower_bound(all.begin(), all.end(), image_id,
                             [](const SparseFeature& f, std::string_view id) { return f.image_id() < id; });
  if (it == all.end() || it->image_id() != image_id) return std::nullopt;
  return static_cast<std::size_t>(it - all.begin());
}

std::span<const std::uint32_t> FeatureIndex::postings(ClassId id) const noexcept {
  if (!storage_ || id.value == 0 || id.value > storage_->n_classes) return {};
  const auto& off = storage_->posting_offsets;
  return std::span<const std::uint32_t>(storage_->posting_data)
      .subspan(off[id.value], off[id.value + 1] - off[id.value]);
}

std::vector<std::uint32_t> FeatureIndex::shared_counts(const SparseFeature& q) const {
  std::vector<std::uint32_t> counts(size(), 0);
  for (const auto& e : q.entries()) {
    for (auto pos : postings(e.class_id)) ++counts[pos];
  }
  return counts;
}

RankedList FeatureIndex::query(const SparseFeature& q, std::size_t p) const {
  RankedList result;
  result.query_id = q.image_id();
  if (p == 0 || empty()) return result;

  const auto counts = shared_counts(q);
  const auto self = find(q.image_id());
  const std::size_t threshold = std::max<std::size_t>(params_.min_shared, 1);
  const auto& all = storage_->features;

  std::vector<Candidate> scored;
  for (std::uint32_t pos = 0; pos < all.size(); ++pos) {
    if (counts[pos] < threshold || (self && *self == pos)) continue;
    scored.push_back({fused_semantic_distance(q, all[pos], params_), counts[pos], pos});
  }
  take_top(scored, p, scored_before);

  std::vector<Candidate> rejected;
  if (scored.size() < p) {
    for (std::uint32_t pos = 0; pos < all.size(); ++pos) {
      if (counts[pos] >= threshold || (self && *self == pos)) continue;
      rejected.push_back({0.0, counts[pos], pos});
    }
    take_top(rejected, p - scored.size(), rejected_before);
  }

  result.items.reserve(scored.size() + rejected.size());
  for (const auto& c : scored) result.items.push_back({all[c.position].image_id(), c.score, c.shared});
  for (const auto& c : rejected) {
    result.items.push_back({all[c.position].image_id(), std::nullopt, c.shared});
  }
  return result;
}

void write_index(std::ostream& out, const FeatureIndex& index) {
  out << "semdist-index v1 N=" << index.n_classes() << " K=" << index.params().k << '\n';
  for (const auto& f : index.features()) {
    out << f.image_id() << '\t' << f.k() << '\t';
    bool first = true;
    for (const auto& e : f.entries()) {
      if (!first) out << ' ';
      first = false;
      out << e.class_id.value << ':' << text::format_shortest(e.prob);
    }
    out << '\n';
  }
}

void save_index(const std::string& path, const FeatureIndex& index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot open '" + path + "' for writing");
  write_index(out, index);
  if (!out) throw Error(Errc::kIoError, "write to '" + path + "' failed");
}

FeatureIndex read_index(std::istream& in, DistanceParams params, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing index header");
  const auto header = text::split_any(text::trim(line), " ");
  std::optional<unsigned long long> n, k;
  if (header.size() == 4 && header[0] == "semdist-index" && header[1] == "v1" &&
      header[2].starts_with("N=") && header[3].starts_with("K=")) {
    n = text::parse_unsigned(header[2].substr(2));
    k = text::parse_unsigned(header[3].substr(2));
  }
  if (!n || !k || *n == 0 || *k == 0) {
    throw ParseError(source, 1, "expected 'semdist-index v1 N=<classes> K=<k>'");
  }
  params.k = static_cast<std::size_t>(*k);

  std::vector<SparseFeature> features;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = text::split_exact(line, '\t');
    if (fields.size() != 3 || fields[0].empty()) {
      throw ParseError(source, line_no, "expected '<image_id>\\t<k>\\t<class:prob ...>'");
    }
    const auto count = text::parse_unsigned(fields[1]);
    if (!count) throw ParseError(source, line_no, "bad entry count '" + std::string(fields[1]) + "'");

    std::vector<FeatureEntry> entries;
    for (auto token : text::split_any(fields[2], " ")) {
      const auto colon = token.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(source, line_no, "bad entry '" + std::string(token) + "'");
      }
      const auto cls = text::parse_unsigned(token.substr(0, colon));
      const auto prob = text::parse_double(token.substr(colon + 1));
      if (!cls || !prob || *cls == 0 || *cls > *n) {
        throw ParseError(source, line_no, "bad entry '" + std::string(token) + "'");
      }
      entries.push_back({ClassId{static_cast<std::uint32_t>(*cls)}, *prob});
    }
    if (entries.size() != *count) {
      throw ParseError(source, line_no, "entry count does not match the stated k");
    }
    try {
      features.emplace_back(std::string(fields[0]), std::move(entries));
    } catch (const Error& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return FeatureIndex::build(std::move(features), params, static_cast<std::size_t>(*n));
}

FeatureIndex load_index(const std::string& path, const DistanceParams& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path + "'");
  return read_index(in, params, path);
}

}  // namespace semdist
