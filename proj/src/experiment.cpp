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

#include "semdist/experiment.hpp"

#include <cmath>
#include <ostream>

#include "semdist/error.hpp"
#include "semdist/text.hpp"

namespace semdist {

void RunConfig::validate() const {
  if (n_classes == 0 || k == 0 || p == 0 || workers == 0) {
    throw Error(Errc::kInvalidConfig, "n-classes, k, p and workers must be positive");
  }
  if (k > n_classes) {
    throw Error(Errc::kInvalidConfig,
                "k=" + std::to_string(k) + " exceeds n-classes=" + std::to_string(n_classes));
  }
  if (!(m_ratio > 0.0) || !std::isfinite(m_ratio)) {
    throw Error(Errc::kInvalidConfig, "m-ratio must be positive and finite");
  }
}

DistanceParams RunConfig::distance_params() const {
  return DistanceParams::with_ratio(m_ratio, min_shared, k);
}

EvaluationOptions RunConfig::evaluation_options() const {
  return EvaluationOptions{p, workers, relevance};
}

EvaluationReport evaluate_corpus(std::span<const SparseFeature> features, const LabelMap& labels,
                                 const RunConfig& config) {
  config.validate();
  std::vector<SparseFeature> truncated;
  truncated.reserve(features.size());
  for (const auto& f : features) truncated.push_back(truncate_top_k(f, config.k));
  const auto index = FeatureIndex::build(truncated, config.distance_params(), config.n_classes);
  return evaluate_run(index, truncated, labels, config.evaluation_options());
}

std::vector<SweepRow> sweep_k(std::span<const SparseFeature> features, const LabelMap& labels,
                              const RunConfig& config, std::span<const std::size_t> k_values) {
  std::vector<SweepRow> rows;
  for (auto k : k_values) {
    RunConfig run = config;
    run.k = k;
    const auto report = evaluate_corpus(features, labels, run);
    rows.push_back({static_cast<double>(k), report.mean_ndcg, report.mean_acg,
                    report.degenerate_count});
  }
  return rows;
}

std::vector<SweepRow> sweep_m(std::span<const SparseFeature> features, const LabelMap& labels,
                              const RunConfig& config, std::span<const double> ratios) {
  config.validate();
  std::vector<SparseFeature> truncated;
  truncated.reserve(features.size());
  for (const auto& f : features) truncated.push_back(truncate_top_k(f, config.k));
  const auto base = FeatureIndex::build(truncated, config.distance_params(), config.n_classes);

  std::vector<SweepRow> rows;
  for (double ratio : ratios) {
    RunConfig run = config;
    run.m_ratio = ratio;
    run.validate();
    const auto index = base.with_params(run.distance_params());
    const auto report = evaluate_run(index, truncated, labels, run.evaluation_options());
    rows.push_back({ratio, report.mean_ndcg, report.mean_acg, report.degenerate_count});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::string& column, std::span<const SweepRow> rows,
                     std::size_t p) {
  out << column << ",NDCG@" << p << ",ACG@" << p << '\n';
  for (const auto& row : rows) {
    out << text::format_shortest(row.value) << ',' << text::format_fixed(row.mean_ndcg, 6) << ','
        << text::format_fixed(row.mean_acg, 6) << '\n';
  }
}

}  // namespace semdist
