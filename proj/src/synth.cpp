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

#include "semdist/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "semdist/error.hpp"

namespace semdist {
namespace {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// the mapping to reals and ranges is done by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint32_t below(std::uint32_t bound) {
    // Rejection sampling for an unbiased draw in [0, bound).
    const std::uint64_t limit = engine_.max() - engine_.max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::uint32_t>(x % bound);
  }

 private:
  std::mt19937_64 engine_;
};

// Draws `count` distinct class ids (1-based) not yet marked in `used`.
std::vector<std::uint32_t> draw_classes(Rng& rng, std::size_t count, std::vector<bool>& used) {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  while (out.size() < count) {
    const std::uint32_t c = rng.below(static_cast<std::uint32_t>(used.size()));
    if (used[c]) continue;
    used[c] = true;
    out.push_back(c + 1);
  }
  return out;
}

std::string image_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img_%05zu", i);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (clusters == 0 || per_cluster == 0 || subclusters == 0) {
    throw Error(Errc::kInvalidConfig, "clusters, per-cluster and subclusters must be positive");
  }
  if (k == 0 || k > n_classes) throw Error(Errc::kInvalidConfig, "need 1 <= k <= n_classes");
  if (overlap + sub_overlap > k) {
    throw Error(Errc::kInvalidConfig, "overlap + sub_overlap exceeds k");
  }
  if (subclusters == 1 && sub_overlap != 0) {
    throw Error(Errc::kInvalidConfig, "sub_overlap requires subclusters > 1");
  }
  // Shared classes of one sub-group plus the random tail must fit in N.
  if (overlap + subclusters * sub_overlap + (k - overlap - sub_overlap) > n_classes) {
    throw Error(Errc::kInvalidConfig, "not enough classes for the requested overlaps");
  }
}

SynthCorpus generate_synthetic(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SynthCorpus corpus;
  const std::size_t total = config.clusters * config.per_cluster;
  corpus.features.reserve(total);
  corpus.image_ids.reserve(total);
  corpus.cluster_of.reserve(total);

  for (std::size_t c = 0; c < config.clusters; ++c) {
    std::vector<bool> reserved(config.n_classes, false);
    const auto core = draw_classes(rng, config.overlap, reserved);
    std::vector<double> core_profile(core.size());
    for (auto& w : core_profile) w = 0.5 + 0.5 * rng.uniform();

    std::vector<std::vector<std::uint32_t>> sub_classes(config.subclusters);
    std::vector<std::vector<double>> sub_profile(config.subclusters);
    for (std::size_t s = 0; s < config.subclusters; ++s) {
      sub_classes[s] = draw_classes(rng, config.sub_overlap, reserved);
      sub_profile[s].resize(sub_classes[s].size());
      for (auto& w : sub_profile[s]) w = 0.25 + 0.15 * rng.uniform();
    }

    for (std::size_t m = 0; m < config.per_cluster; ++m) {
      const std::size_t s = m % config.subclusters;
      std::vector<double> dense(config.n_classes, 0.0);
      std::vector<bool> used = reserved;

      for (std::size_t j = 0; j < core.size(); ++j) {
        dense[core[j] - 1] = core_profile[j] * (0.8 + 0.4 * rng.uniform());
      }
      for (std::size_t j = 0; j < sub_classes[s].size(); ++j) {
        dense[sub_classes[s][j] - 1] = sub_profile[s][j] * (0.8 + 0.4 * rng.uniform());
      }
      const std::size_t tail = config.k - config.overlap - config.sub_overlap;
      for (auto cls : draw_classes(rng, tail, used)) {
        dense[cls - 1] = 0.02 + 0.2 * rng.uniform();
      }

      double sum = 0.0;
      for (double p : dense) sum += p;
      for (double& p : dense) p /= sum;

      const std::size_t index = corpus.features.size();
      auto id = image_name(index);
      corpus.features.push_back(truncate_top_k(id, dense, config.k));

      LabelSet labels{id, {"c" + std::to_string(c)}};
      if (config.subclusters > 1) {
        labels.labels.insert("c" + std::to_string(c) + "s" + std::to_string(s));
      }
      corpus.labels.emplace(id, std::move(labels));
      corpus.image_ids.push_back(std::move(id));
      corpus.cluster_of.push_back(c);
    }
  }
  return corpus;
}

}  // namespace semdist
