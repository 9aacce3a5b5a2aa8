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

#include "semdist/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <unordered_map>

#include "semdist/error.hpp"
#include "semdist/parallel.hpp"
#include "semdist/text.hpp"

namespace semdist {
namespace {

// Label sets as fixed-width bitsets over an interned vocabulary, so the
// per-pair relevance used for the ideal ordering is a popcount.
class LabelBits {
 public:
  LabelBits(const LabelMap& labels) {
    std::unordered_map<std::string, std::size_t> vocab;
    for (const auto& [id, set] : labels) {
      for (const auto& label : set.labels) vocab.try_emplace(label, vocab.size());
    }
    vocab_ = std::move(vocab);
    words_ = std::max<std::size_t>(1, (vocab_.size() + 63) / 64);
  }

  std::vector<std::uint64_t> encode(const std::vector<const LabelSet*>& sets) const {
    std::vector<std::uint64_t> bits(sets.size() * words_, 0);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (const auto& label : sets[i]->labels) {
        const std::size_t b = vocab_.at(label);
        bits[i * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
      }
    }
    return bits;
  }

  std::size_t words() const { return words_; }

 private:
  std::unordered_map<std::string, std::size_t> vocab_;
  std::size_t words_ = 1;
};

unsigned apply_mode(unsigned shared, RelevanceMode mode) {
  return mode == RelevanceMode::kBinary ? (shared > 0 ? 1u : 0u) : shared;
}

const LabelSet& require_labels(const LabelMap& labels, const std::string& id) {
  auto it = labels.find(id);
  if (it == labels.end()) throw Error(Errc::kMissingLabels, "no labels for image '" + id + "'");
  return it->second;
}

}  // namespace

unsigned relevance_level(const LabelSet& query, const LabelSet& item, RelevanceMode mode) {
  unsigned shared = 0;
  auto a = query.labels.begin();
  auto b = item.labels.begin();
  while (a != query.labels.end() && b != item.labels.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++shared;
      ++a;
      ++b;
    }
  }
  return apply_mode(shared, mode);
}

double dcg_at_p(std::span<const unsigned> levels, std::size_t p) {
  const std::size_t n = std::min(p, levels.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gain = std::ldexp(1.0, static_cast<int>(levels[i])) - 1.0;
    dcg += gain / std::log2(static_cast<double>(i + 2));
  }
  return dcg;
}

double ndcg_at_p(std::span<const unsigned> levels, std::span<const unsigned> ideal, std::size_t p) {
  const double z = dcg_at_p(ideal, p);
  if (!(z > 0.0)) return 0.0;
  return dcg_at_p(levels, p) / z;
}

double acg_at_p(std::span<const unsigned> levels, std::size_t p) {
  if (p == 0) return 0.0;
  const std::size_t n = std::min(p, levels.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += levels[i];
  return sum / static_cast<double>(p);
}

RelevanceLevels ideal_levels(RelevanceLevels all, std::size_t p) {
  const std::size_t n = std::min(p, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(),
                    std::greater<>());
  all.resize(n);
  return all;
}

EvaluationReport evaluate_run(const FeatureIndex& index, std::span<const SparseFeature> queries,
                              const LabelMap& labels, const EvaluationOptions& options) {
  if (options.p == 0) throw Error(Errc::kInvalidConfig, "p must be at least 1");

  std::vector<const LabelSet*> db_sets;
  db_sets.reserve(index.size());
  for (const auto& f : index.features()) db_sets.push_back(&require_labels(labels, f.image_id()));
  std::vector<const LabelSet*> query_sets;
  query_sets.reserve(queries.size());
  for (const auto& q : queries) query_sets.push_back(&require_labels(labels, q.image_id()));

  const LabelBits vocab(labels);
  const std::size_t words = vocab.words();
  const auto db_bits = vocab.encode(db_sets);
  const auto query_bits = vocab.encode(query_sets);

  EvaluationReport report;
  report.p = options.p;
  report.queries.resize(queries.size());

  parallel_for(queries.size(), options.workers, [&](std::size_t qi) {
    const auto& q = queries[qi];
    const std::uint64_t* qb = &query_bits[qi * words];
    auto shared_labels = [&](std::size_t pos) {
      const std::uint64_t* db = &db_bits[pos * words];
      unsigned n = 0;
      for (std::size_t w = 0; w < words; ++w) n += std::popcount(qb[w] & db[w]);
      return apply_mode(n, options.relevance);
    };

    const auto ranked = index.query(q, options.p);
    RelevanceLevels levels;
    levels.reserve(ranked.items.size());
    for (const auto& item : ranked.items) {
      levels.push_back(shared_labels(*index.find(item.image_id)));
    }

    // Ideal ordering from a histogram of relevance levels.
    const auto self = index.find(q.image_id());
    std::vector<std::size_t> histogram;
    for (std::size_t pos = 0; pos < index.size(); ++pos) {
      if (self && *self == pos) continue;
      const unsigned r = shared_labels(pos);
      if (r >= histogram.size()) histogram.resize(r + 1, 0);
      ++histogram[r];
    }
    RelevanceLevels ideal;
    ideal.reserve(options.p);
    for (std::size_t r = histogram.size(); r-- > 0 && ideal.size() < options.p;) {
      const std::size_t take = std::min(histogram[r], options.p - ideal.size());
      ideal.insert(ideal.end(), take, static_cast<unsigned>(r));
    }

    auto& row = report.queries[qi];
    row.query_id = q.image_id();
    row.degenerate = !(dcg_at_p(ideal, options.p) > 0.0);
    row.ndcg = ndcg_at_p(levels, ideal, options.p);
    row.acg = acg_at_p(levels, options.p);
  });

  double ndcg_sum = 0.0;
  double acg_sum = 0.0;
  std::size_t counted = 0;
  for (const auto& row : report.queries) {
    if (row.degenerate) {
      ++report.degenerate_count;
      continue;
    }
    ndcg_sum += row.ndcg;
    acg_sum += row.acg;
    ++counted;
  }
  if (counted > 0) {
    report.mean_ndcg = ndcg_sum / static_cast<double>(counted);
    report.mean_acg = acg_sum / static_cast<double>(counted);
  }
  return report;
}

void write_report(std::ostream& out, const EvaluationReport& report) {
  for (const auto& row : report.queries) {
    out << row.query_id << '\t' << text::format_fixed(row.ndcg, 6) << '\t'
        << text::format_fixed(row.acg, 6) << '\t' << (row.degenerate ? 1 : 0) << '\n';
  }
  out << "MEAN\t" << text::format_fixed(report.mean_ndcg, 6) << '\t'
      << text::format_fixed(report.mean_acg, 6) << '\t' << report.degenerate_count << '\n';
}

}  // namespace semdist
