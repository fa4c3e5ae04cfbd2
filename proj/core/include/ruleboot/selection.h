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

#ifndef RULEBOOT_SELECTION_H_
#define RULEBOOT_SELECTION_H_

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "ruleboot/corpus.h"
#include "ruleboot/random.h"
#include "ruleboot/rules.h"
#include "ruleboot/span.h"

namespace ruleboot {

using Embedding = Eigen::VectorXd;

// Mean of the token embeddings in |range|.
Embedding InstanceEmbedding(const Sentence &sentence, Range range);

// Throws Error("degenerate embedding") when either vector has zero norm.
double Cosine(const Embedding &a, const Embedding &b);

// Maximum cosine between |query| and any member.
double LocalScore(const Embedding &query, std::span<const Embedding> members);

// Mean cosine between |query| and |samples| prototypes, each the centroid of
// min(sample_size, |members|) members drawn without replacement (with
// replacement when fewer than |sample_size| members exist).
double GlobalScore(const Embedding &query, std::span<const Embedding> members, int samples,
                   int sample_size, Rng &rng);

// Geometric mean of the two scores after clamping each to [0, 1].
double CombineScores(double local, double global);

struct SelectionParams {
  int global_samples = 50;     // N
  int global_sample_size = 3;  // s
  double temperature = 0.8;    // tau
  int max_holdouts = 50;       // T = min(|H_i|, max_holdouts)
};

double ConfidenceScore(const Embedding &query, std::span<const Embedding> members,
                       const SelectionParams &params, Rng &rng);

// tau times the minimum confidence of a held-out member against the rest,
// over min(|members|, repeats) distinct held-out members (all of them when
// the set is small enough). Throws Error if fewer than two members.
double DynamicThreshold(std::span<const Embedding> members, double temperature, int repeats,
                        const SelectionParams &params, Rng &rng);

// Per-category pool of accepted instances. Only ever grows; a span key is
// held by at most one category.
class HighPrecisionSet {
 public:
  explicit HighPrecisionSet(std::vector<std::string> labels);

  const std::vector<std::string> &labels() const { return labels_; }
  int category_count() const { return static_cast<int>(labels_.size()); }

  bool Contains(const SpanKey &key) const { return all_keys_.count(key) > 0; }
  // Returns false and leaves the set unchanged for a key already present.
  bool Add(int category, const SpanKey &key, Embedding embedding, int iteration);

  size_t size(int category) const { return keys_[category].size(); }
  size_t total_size() const { return all_keys_.size(); }
  const std::vector<SpanKey> &keys(int category) const { return keys_[category]; }
  const std::vector<Embedding> &embeddings(int category) const { return embeddings_[category]; }
  const std::vector<int> &iterations(int category) const { return iterations_[category]; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<SpanKey>> keys_;
  std::vector<std::vector<Embedding>> embeddings_;
  std::vector<std::vector<int>> iterations_;
  std::unordered_set<SpanKey, SpanKeyHash> all_keys_;
};

struct AcceptedLabel {
  CandidateId candidate = 0;
  SpanKey key;
  int label = 0;
  double confidence = 1.0;
};

struct SelectionOutcome {
  std::vector<AcceptedLabel> accepted;
  // Per category; NaN when the category was frozen (fewer than 2 members).
  std::vector<double> thresholds;
  size_t rejected = 0;
  size_t already_known = 0;
};

// Seed matches enter the set unconditionally.
SelectionOutcome SeedHighPrecisionSet(const std::vector<WeakLabel> &weak_labels,
                                      const Corpus &corpus, HighPrecisionSet &set,
                                      int iteration = 0);

// Scores every weak label not yet in |set| against a snapshot of it and
// admits those whose confidence exceeds their category's threshold.
SelectionOutcome SelectLabels(const std::vector<WeakLabel> &weak_labels, const Corpus &corpus,
                              HighPrecisionSet &set, const SelectionParams &params,
                              int iteration, Rng &rng);

}  // namespace ruleboot

#endif  // RULEBOOT_SELECTION_H_
