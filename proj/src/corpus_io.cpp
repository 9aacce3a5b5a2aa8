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

#include "semdist/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "semdist/error.hpp"
#include "semdist/text.hpp"

namespace semdist {
namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path + "'");
  return in;
}

bool valid_image_id(std::string_view id) {
  return !id.empty() && id.find_first_of(" \t\r\n,") == std::string_view::npos;
}

SemanticVector parse_dense(std::string_view line, std::string_view source, std::size_t line_no) {
  const auto fields = text::split_exact(line, ',');
  const auto id = text::trim(fields[0]);
  if (!valid_image_id(id)) throw ParseError(source, line_no, "bad image id");
  SemanticVector v{std::string(id), {}};
  v.probs.reserve(fields.size() - 1);
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const auto prob = text::parse_double(fields[i]);
    if (!prob) {
      throw ParseError(source, line_no, "bad probability '" + std::string(text::trim(fields[i])) + "'");
    }
    v.probs.push_back(*prob);
  }
  return v;
}

SemanticVector parse_sparse(std::string_view line, std::size_t n_classes, std::string_view source,
                            std::size_t line_no) {
  const auto tokens = text::split_any(line, " \t");
  if (!valid_image_id(tokens[0])) throw ParseError(source, line_no, "bad image id");
  SemanticVector v{std::string(tokens[0]), std::vector<double>(n_classes, 0.0)};
  std::vector<bool> seen(n_classes, false);
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto token = tokens[i];
    const auto colon = token.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(source, line_no, "expected class:prob, got '" + std::string(token) + "'");
    }
    const auto cls = text::parse_unsigned(token.substr(0, colon));
    const auto prob = text::parse_double(token.substr(colon + 1));
    if (!cls || !prob) {
      throw ParseError(source, line_no, "expected class:prob, got '" + std::string(token) + "'");
    }
    if (*cls == 0 || *cls > n_classes) {
      throw Error(Errc::kBadClassId, std::string(source) + ":" + std::to_string(line_no) +
                                         ": class " + std::to_string(*cls) + " outside 1.." +
                                         std::to_string(n_classes));
    }
    if (seen[*cls - 1]) {
      throw ParseError(source, line_no, "class " + std::to_string(*cls) + " listed twice");
    }
    seen[*cls - 1] = true;
    v.probs[*cls - 1] = *prob;
  }
  return v;
}

}  // namespace

void read_probabilities(std::istream& in, const ProbabilityFileOptions& options,
                        const std::function<void(SemanticVector&&)>& sink,
                        std::string_view source) {
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;

    SemanticVector v = body.find(',') != std::string_view::npos
                           ? parse_dense(body, source, line_no)
                           : parse_sparse(body, options.n_classes, source, line_no);
    try {
      validate_vector(v, options.n_classes, options.strict_prob);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(v.image_id).second) {
      throw Error(Errc::kDuplicateImageId, std::string(source) + ":" + std::to_string(line_no) +
                                               ": image id '" + v.image_id + "' repeated");
    }
    sink(std::move(v));
  }
  if (in.bad()) throw Error(Errc::kIoError, "read error in " + std::string(source));
}

std::vector<SemanticVector> ingest_probabilities(const std::string& path,
                                                 const ProbabilityFileOptions& options) {
  auto in = open_input(path);
  std::vector<SemanticVector> out;
  read_probabilities(in, options, [&](SemanticVector&& v) { out.push_back(std::move(v)); }, path);
  return out;
}

std::vector<SparseFeature> ingest_features(const std::string& path,
                                           const ProbabilityFileOptions& options, std::size_t k) {
  auto in = open_input(path);
  std::vector<SparseFeature> out;
  read_probabilities(
      in, options, [&](SemanticVector&& v) { out.push_back(truncate_top_k(v, k)); }, path);
  return out;
}

void write_probabilities_sparse(std::ostream& out, std::span<const SparseFeature> features) {
  for (const auto& f : features) {
    out << f.image_id();
    for (const auto& e : f.entries()) {
      out << ' ' << e.class_id.value << ':' << text::format_shortest(e.prob);
    }
    out << '\n';
  }
}

void write_probabilities_dense(std::ostream& out, std::span<const SparseFeature> features,
                               std::size_t n_classes) {
  for (const auto& f : features) {
    const auto v = densify(f, n_classes);
    out << v.image_id;
    for (double p : v.probs) out << ',' << text::format_shortest(p);
    out << '\n';
  }
}

LabelMap read_labels(std::istream& in, std::string_view source) {
  LabelMap labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || text::trim(line).front() == '#') continue;

    const auto tab = line.find('\t');
    const auto id = text::trim(std::string_view(line).substr(0, tab));
    if (!valid_image_id(id)) throw ParseError(source, line_no, "bad image id");
    LabelSet set{std::string(id), {}};
    if (tab != std::string::npos) {
      for (auto label : text::split_exact(std::string_view(line).substr(tab + 1), ';')) {
        label = text::trim(label);
        if (!label.empty()) set.labels.emplace(label);
      }
    }
    if (!labels.emplace(set.image_id, set).second) {
      throw Error(Errc::kDuplicateImageId, std::string(source) + ":" + std::to_string(line_no) +
                                               ": image id '" + set.image_id + "' repeated");
    }
  }
  if (in.bad()) throw Error(Errc::kIoError, "read error in " + std::string(source));
  return labels;
}

LabelMap ingest_labels(const std::string& path) {
  auto in = open_input(path);
  return read_labels(in, path);
}

void write_labels(std::ostream& out, const LabelMap& labels, std::span<const std::string> order) {
  for (const auto& id : order) {
    const auto& set = labels.at(id);
    out << id << '\t';
    bool first = true;
    for (const auto& label : set.labels) {
      if (!first) out << ';';
      first = false;
      out << label;
    }
    out << '\n';
  }
}

}  // namespace semdist
