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

// Command-line front end: ingest, build-index, query, evaluate, sweep-k,
// sweep-m and gen-synth.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semdist/corpus_io.hpp"
#include "semdist/error.hpp"
#include "semdist/experiment.hpp"
#include "semdist/metrics.hpp"
#include "semdist/parallel.hpp"
#include "semdist/retrieval_index.hpp"
#include "semdist/synth.hpp"
#include "semdist/text.hpp"

namespace {

using namespace semdist;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParse = 2;

struct Options {
  RunConfig config;
  std::string probs;
  std::string labels;
  std::string index;
  std::string out;
  std::string query_id;
  std::string vector_file;
  std::string relevance = "shared";
  std::vector<std::size_t> k_values{20, 30, 40, 50, 60};
  std::vector<double> ratios{2000, 5000, 10000, 50000};
  SynthConfig synth;
  bool dense = false;
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(Errc::kIoError, "cannot open '" + path + "' for writing");
    }
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }

  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw Error(Errc::kIoError, "write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

ProbabilityFileOptions prob_options(const Options& o) {
  return ProbabilityFileOptions{o.config.n_classes, o.config.strict_prob};
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--n-classes", o.config.n_classes, "Number of classifier classes N")
      ->capture_default_str();
  cmd->add_option("--k", o.config.k, "Top-K classes kept per image")->capture_default_str();
  cmd->add_flag("--strict-prob", o.config.strict_prob, "Require every vector to sum to 1 (+-1e-3)");
}

void add_scoring_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--m-ratio", o.config.m_ratio, "Weight ratio M1/M2 (M2 = 1)")
      ->capture_default_str();
  cmd->add_option("--min-shared", o.config.min_shared, "Coarse-filter threshold on shared classes")
      ->capture_default_str();
  cmd->add_option("--p", o.config.p, "Ranking cutoff")->capture_default_str();
}

void add_eval_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--labels", o.labels, "Label file (image_id<TAB>label;label)")->required();
  cmd->add_option("--workers", o.config.workers, "Worker threads")->capture_default_str();
  cmd->add_option("--relevance", o.relevance, "Relevance level: shared | binary")
      ->check(CLI::IsMember({"shared", "binary"}))
      ->capture_default_str();
}

FeatureIndex load_database(const Options& o) {
  o.config.validate();
  if (!o.index.empty()) {
    auto params = o.config.distance_params();
    auto index = load_index(o.index, params);
    return index;
  }
  auto features = ingest_features(o.probs, prob_options(o), o.config.k);
  return FeatureIndex::build(std::move(features), o.config.distance_params(), o.config.n_classes);
}

int run_ingest(const Options& o, bool truncate) {
  const auto vectors = ingest_probabilities(o.probs, prob_options(o));
  if (!o.out.empty()) {
    std::vector<SparseFeature> features;
    features.reserve(vectors.size());
    for (const auto& v : vectors) {
      features.push_back(truncate_top_k(v, truncate ? o.config.k : o.config.n_classes));
    }
    Output out(o.out);
    write_probabilities_sparse(out.stream(), features);
    out.close();
  }
  std::cout << "vectors=" << vectors.size() << " N=" << o.config.n_classes << '\n';
  return kExitOk;
}

int run_build_index(const Options& o) {
  o.config.validate();
  auto features = ingest_features(o.probs, prob_options(o), o.config.k);
  const auto index =
      FeatureIndex::build(std::move(features), o.config.distance_params(), o.config.n_classes);
  save_index(o.out, index);
  std::cout << "indexed=" << index.size() << " N=" << index.n_classes() << " K=" << o.config.k
            << '\n';
  return kExitOk;
}

int run_query(const Options& o) {
  const auto index = load_database(o);
  std::vector<SparseFeature> queries;
  if (!o.query_id.empty()) {
    const auto pos = index.find(o.query_id);
    if (!pos) throw Error(Errc::kUnknownImageId, "no image '" + o.query_id + "' in the database");
    queries.push_back(index.feature(*pos));
  } else {
    ProbabilityFileOptions options{index.n_classes(), o.config.strict_prob};
    queries = ingest_features(o.vector_file, options, index.params().k);
  }

  Output out(o.out);
  for (const auto& q : queries) {
    const auto ranked = index.query(q, o.config.p);
    std::size_t rank = 0;
    for (const auto& item : ranked.items) {
      out.stream() << ranked.query_id << '\t' << ++rank << '\t' << item.image_id << '\t'
                   << (item.score ? text::format_shortest(*item.score) : std::string("REJECTED"))
                   << '\t' << item.shared << '\n';
    }
  }
  out.close();
  return kExitOk;
}

int run_evaluate(const Options& o) {
  const auto index = load_database(o);
  const auto labels = ingest_labels(o.labels);
  std::vector<SparseFeature> external;
  std::span<const SparseFeature> queries = index.features();
  if (!o.vector_file.empty()) {
    ProbabilityFileOptions options{index.n_classes(), o.config.strict_prob};
    external = ingest_features(o.vector_file, options, index.params().k);
    queries = external;
  }
  const auto report = evaluate_run(index, queries, labels, o.config.evaluation_options());
  Output out(o.out);
  write_report(out.stream(), report);
  out.close();
  if (!o.out.empty()) {
    std::cout << "NDCG@" << report.p << '=' << text::format_fixed(report.mean_ndcg, 6) << " ACG@"
              << report.p << '=' << text::format_fixed(report.mean_acg, 6)
              << " degenerate=" << report.degenerate_count << '\n';
  }
  return kExitOk;
}

int run_sweep_k(const Options& o) {
  std::size_t k_max = 0;
  for (auto k : o.k_values) k_max = std::max(k_max, k);
  const auto features = ingest_features(o.probs, prob_options(o), std::max<std::size_t>(k_max, 1));
  const auto labels = ingest_labels(o.labels);
  const auto rows = sweep_k(features, labels, o.config, o.k_values);
  Output out(o.out);
  write_sweep_csv(out.stream(), "K", rows, o.config.p);
  out.close();
  return kExitOk;
}

int run_sweep_m(const Options& o) {
  o.config.validate();
  const auto features = ingest_features(o.probs, prob_options(o), o.config.k);
  const auto labels = ingest_labels(o.labels);
  const auto rows = sweep_m(features, labels, o.config, o.ratios);
  Output out(o.out);
  write_sweep_csv(out.stream(), "M1/M2", rows, o.config.p);
  out.close();
  return kExitOk;
}

int run_gen_synth(const Options& o) {
  SynthConfig synth = o.synth;
  synth.k = o.config.k;
  synth.n_classes = o.config.n_classes;
  synth.seed = o.config.seed;
  const auto corpus = generate_synthetic(synth);

  Output probs(o.probs);
  if (o.dense) {
    write_probabilities_dense(probs.stream(), corpus.features, synth.n_classes);
  } else {
    write_probabilities_sparse(probs.stream(), corpus.features);
  }
  probs.close();
  Output labels(o.labels);
  write_labels(labels.stream(), corpus.labels, corpus.image_ids);
  labels.close();
  std::cout << "images=" << corpus.features.size() << " clusters=" << synth.clusters << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  o.config.workers = default_worker_count();

  CLI::App app{"Semantic-feature image retrieval: sparse top-K class probabilities, "
               "fusion-based semantic scoring, NDCG/ACG evaluation"};
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Validate a probability file");
  ingest->add_option("--probs", o.probs, "Probability file (dense CSV or sparse class:prob)")
      ->required();
  add_model_flags(ingest, o);
  ingest->add_option("--out", o.out, "Write the (optionally top-K) vectors in sparse form");

  auto* build = app.add_subcommand("build-index", "Truncate vectors to top-K and write an index");
  build->add_option("--probs", o.probs, "Probability file")->required();
  add_model_flags(build, o);
  build->add_option("--out", o.out, "Index file")->required();

  auto* query = app.add_subcommand("query", "Rank the database against one or more queries");
  auto* q_index = query->add_option("--index", o.index, "Index file");
  auto* q_probs = query->add_option("--probs", o.probs, "Probability file used as the database");
  q_index->excludes(q_probs);
  add_model_flags(query, o);
  add_scoring_flags(query, o);
  auto* q_id = query->add_option("--id", o.query_id, "Query by database image id");
  auto* q_vec = query->add_option("--vector-file", o.vector_file, "Probability file of queries");
  q_id->excludes(q_vec);
  query->add_option("--out", o.out, "Ranked output (stdout by default)");

  auto* evaluate = app.add_subcommand("evaluate", "Leave-one-out NDCG@p / ACG@p report");
  auto* e_index = evaluate->add_option("--index", o.index, "Index file");
  auto* e_probs = evaluate->add_option("--probs", o.probs, "Probability file");
  e_index->excludes(e_probs);
  add_model_flags(evaluate, o);
  add_scoring_flags(evaluate, o);
  add_eval_flags(evaluate, o);
  evaluate->add_option("--vector-file", o.vector_file,
                       "External query vectors (default: every database image)");
  evaluate->add_option("--out", o.out, "Report file (stdout by default)");

  auto* sweep_k_cmd = app.add_subcommand("sweep-k", "Mean NDCG/ACG for several K (CSV)");
  sweep_k_cmd->add_option("--probs", o.probs, "Probability file")->required();
  add_model_flags(sweep_k_cmd, o);
  add_scoring_flags(sweep_k_cmd, o);
  add_eval_flags(sweep_k_cmd, o);
  sweep_k_cmd->add_option("--k-values", o.k_values, "K values")->delimiter(',')
      ->capture_default_str();
  sweep_k_cmd->add_option("--out", o.out, "CSV file (stdout by default)");

  auto* sweep_m_cmd = app.add_subcommand("sweep-m", "Mean NDCG/ACG for several M1/M2 (CSV)");
  sweep_m_cmd->add_option("--probs", o.probs, "Probability file")->required();
  add_model_flags(sweep_m_cmd, o);
  add_scoring_flags(sweep_m_cmd, o);
  add_eval_flags(sweep_m_cmd, o);
  sweep_m_cmd->add_option("--ratios", o.ratios, "M1/M2 values")->delimiter(',')
      ->capture_default_str();
  sweep_m_cmd->add_option("--out", o.out, "CSV file (stdout by default)");

  auto* synth = app.add_subcommand("gen-synth", "Write a planted-cluster corpus");
  synth->add_option("--probs", o.probs, "Output probability file")->required();
  synth->add_option("--labels", o.labels, "Output label file")->required();
  synth->add_option("--n-classes", o.config.n_classes, "Number of classes N")->capture_default_str();
  synth->add_option("--k", o.config.k, "Positive classes per image")->capture_default_str();
  synth->add_option("--seed", o.config.seed, "Generator seed")->capture_default_str();
  synth->add_option("--clusters", o.synth.clusters, "Number of clusters")->capture_default_str();
  synth->add_option("--per-cluster", o.synth.per_cluster, "Images per cluster")
      ->capture_default_str();
  synth->add_option("--overlap", o.synth.overlap, "Core classes shared inside a cluster")
      ->capture_default_str();
  synth->add_option("--subclusters", o.synth.subclusters, "Sub-groups per cluster (extra label)")
      ->capture_default_str();
  synth->add_option("--sub-overlap", o.synth.sub_overlap, "Classes shared inside a sub-group")
      ->capture_default_str();
  synth->add_flag("--dense", o.dense, "Write dense CSV instead of sparse class:prob lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  o.config.relevance =
      o.relevance == "binary" ? RelevanceMode::kBinary : RelevanceMode::kSharedLabels;

  try {
    if (*ingest) return run_ingest(o, ingest->count("--k") > 0);
    if (*build) return run_build_index(o);
    if (*query) {
      if (o.index.empty() && o.probs.empty()) throw CLI::RequiredError("--index or --probs");
      if (o.query_id.empty() && o.vector_file.empty()) throw CLI::RequiredError("--id or --vector-file");
      return run_query(o);
    }
    if (*evaluate) {
      if (o.index.empty() && o.probs.empty()) throw CLI::RequiredError("--index or --probs");
      return run_evaluate(o);
    }
    if (*sweep_k_cmd) return run_sweep_k(o);
    if (*sweep_m_cmd) return run_sweep_m(o);
    if (*synth) return run_gen_synth(o);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::kParseError ? kExitParse : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
