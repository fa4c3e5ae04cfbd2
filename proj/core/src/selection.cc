// Copyright 2026 The Ruleboot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ruleboot/selection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ruleboot/error.h"

namespace ruleboot {

namespace {

// Scoring over a subset of members given by ascending indices, so that a
// held-out member can be excluded without copying embeddings.
double LocalOver(const Embedding &query, std::span<const Embedding> members,
                 const std::vector<int> &pool) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i : pool) best = std::max(best, Cosine(query, members[i]));
  return best;
}

double GlobalOver(const Embedding &query, std::span<const Embedding> members,
                  const std::vector<int> &pool, int samples, int sample_size, Rng &rng) {
  const int size = static_cast<int>(pool.size());
  const int take = std::min(sample_size, size);
  const bool with_replacement = size < sample_size;
  std::vector<int> picked(take);
  double total = 0.0;
  for (int j = 0; j < samples; ++j) {
    if (with_replacement) {
      std::uniform_int_distribution<int> pick(0, size - 1);
      for (int &p : picked) p = pool[pick(rng)];
      std::sort(picked.begin(), picked.end());
    } else {
      std::sample(pool.begin(), pool.end(), picked.begin(), take, rng);
    }
    Embedding prototype = Embedding::Zero(query.size());
    for (int p : picked) prototype += members[p];
    prototype /= static_cast<double>(take);
    total += Cosine(prototype, query);
  }
  return total / samples;
}

double ConfidenceOver(const Embedding &query, std::span<const Embedding> members,
                      const std::vector<int> &pool, const SelectionParams &params, Rng &rng) {
  const double local = LocalOver(query, members, pool);
  const double global = GlobalOver(query, members, pool, params.global_samples,
                                   params.global_sample_size, rng);
  return CombineScores(local, global);
}

std::vector<int> AllIndices(size_t n) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  return pool;
}

}  // namespace

Embedding InstanceEmbedding(const Sentence &sentence, Range range) {
  if (range.length() <= 0) throw Error("empty span has no embedding");
  Embedding mean = Embedding::Zero(sentence.tokens[range.start].embedding.size());
  for (int i = range.start; i < range.end; ++i) mean += sentence.tokens[i].embedding;
  return mean / static_cast<double>(range.length());
}

double Cosine(const Embedding &a, const Embedding &b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw Error("degenerate embedding");
  return a.dot(b) / (na * nb);
}

double LocalScore(const Embedding &query, std::span<const Embedding> members) {
  if (members.empty()) throw Error("local score needs a non-empty set");
  return LocalOver(query, members, AllIndices(members.size()));
}

double GlobalScore(const Embedding &query, std::span<const Embedding> members, int samples,
                   int sample_size, Rng &rng) {
  if (members.empty()) throw Error("global score needs a non-empty set");
  if (samples < 1 || sample_size < 1) throw Error("global score needs N >= 1 and s >= 1");
  return GlobalOver(query, members, AllIndices(members.size()), samples, sample_size, rng);
}

double CombineScores(double local, double global) {
  const double l = std::clamp(local, 0.0, 1.0);
  const double g = std::clamp(global, 0.0, 1.0);
  return std::sqrt(l * g);
}

double ConfidenceScore(const Embedding &query, std::span<const Embedding> members,
                       const SelectionParams &params, Rng &rng) {
  if (members.empty()) throw Error("confidence score needs a non-empty set");
  return ConfidenceOver(query, members, AllIndices(members.size()), params, rng);
}

double DynamicThreshold(std::span<const Embedding> members, double temperature, int repeats,
                        const SelectionParams &params, Rng &rng) {
  const int size = static_cast<int>(members.size());
  if (size < 2) throw Error("set too small for holdout");
  if (temperature < 0.0 || temperature > 1.0) throw Error("temperature must lie in [0, 1]");
  const int holdouts = std::clamp(repeats, 1, size);
  std::vector<int> all = AllIndices(size);
  std::vector<int> chosen(holdouts);
  if (holdouts == size) {
    chosen = all;
  } else {
    std::sample(all.begin(), all.end(), chosen.begin(), holdouts, rng);
  }
  double lowest = std::numeric_limits<double>::infinity();
  std::vector<int> rest;
  rest.reserve(size - 1);
  for (int k : chosen) {
    rest.clear();
    for (int i = 0; i < size; ++i) {
      if (i != k) rest.push_back(i);
    }
    lowest = std::min(lowest, ConfidenceOver(members[k], members, rest, params, rng));
  }
  return temperature * lowest;
}

HighPrecisionSet::HighPrecisionSet(std::vector<std::string> labels)
    : labels_(std::move(labels)),
      keys_(labels_.size()),
      embeddings_(labels_.size()),
      iterations_(labels_.size()) {}

bool HighPrecisionSet::Add(int category, const SpanKey &key, Embedding embedding,
                           int iteration) {
  if (category < 0 || category >= category_count()) throw Error("unknown category index");
  if (!all_keys_.insert(key).second) return false;
  keys_[category].push_back(key);
  embeddings_[category].push_back(std::move(embedding));
  iterations_[category].push_back(iteration);
  return true;
}

SelectionOutcome SeedHighPrecisionSet(const std::vector<WeakLabel> &weak_labels,
                                      const Corpus &corpus, HighPrecisionSet &set,
                                      int iteration) {
  SelectionOutcome outcome;
  outcome.thresholds.assign(set.category_count(), 0.0);
  for (const WeakLabel &w : weak_labels) {
    if (set.Contains(w.key)) {
      ++outcome.already_known;
      continue;
    }
    set.Add(w.label, w.key, InstanceEmbedding(corpus.sentences[w.key.sentence], w.key.range()),
            iteration);
    outcome.accepted.push_back({w.candidate, w.key, w.label, 1.0});
  }
  return outcome;
}

SelectionOutcome SelectLabels(const std::vector<WeakLabel> &weak_labels, const Corpus &corpus,
                              HighPrecisionSet &set, const SelectionParams &params,
                              int iteration, Rng &rng) {
  SelectionOutcome outcome;
  const int categories = set.category_count();
  outcome.thresholds.assign(categories, std::numeric_limits<double>::quiet_NaN());
  for (int c = 0; c < categories; ++c) {
    if (set.size(c) < 2) continue;
    outcome.thresholds[c] = DynamicThreshold(set.embeddings(c), params.temperature,
                                             params.max_holdouts, params, rng);
  }

  // Score against the snapshot; admit afterwards.
  std::vector<std::pair<const WeakLabel *, double>> admitted;
  for (const WeakLabel &w : weak_labels) {
    if (set.Contains(w.key)) {
      ++outcome.already_known;
      continue;
    }
    const double threshold = outcome.thresholds[w.label];
    if (std::isnan(threshold)) {
      ++outcome.rejected;
      continue;
    }
    const Embedding query = InstanceEmbedding(corpus.sentences[w.key.sentence], w.key.range());
    const double confidence = ConfidenceScore(query, set.embeddings(w.label), params, rng);
    if (confidence > threshold) {
      admitted.emplace_back(&w, confidence);
    } else {
      ++outcome.rejected;
    }
  }
  for (const auto &[w, confidence] : admitted) {
    set.Add(w->label, w->key, InstanceEmbedding(corpus.sentences[w->key.sentence], w->key.range()),
            iteration);
    outcome.accepted.push_back({w->candidate, w->key, w->label, confidence});
  }
  return outcome;
}

}  // namespace ruleboot
