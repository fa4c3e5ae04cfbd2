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

#ifndef RULEBOOT_BOOTSTRAP_H_
#define RULEBOOT_BOOTSTRAP_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ruleboot/candidates.h"
#include "ruleboot/corpus.h"
#include "ruleboot/entities.h"
#include "ruleboot/explain.h"
#include "ruleboot/learner.h"
#include "ruleboot/metrics.h"
#include "ruleboot/rules.h"
#include "ruleboot/selection.h"
#include "ruleboot/tagger.h"

namespace ruleboot {

struct BootstrapConfig {
  int max_span_len = 5;
  int ngram_max = 3;
  int k0 = 20;  // 60 suits large-vocabulary corpora
  int eta = 1;
  double theta = 0.9;
  double confident_fraction = 0.7;
  SelectionParams selection;  // tau, N, s, holdout cap
  int iterations = 32;
  TiePolicy tie_policy = TiePolicy::kAbstain;
  SelectionStrategy strategy = SelectionStrategy::kEntityType;
  TaggerHyperParams tagger;
  // Candidates predicted NEG above this confidence join the negative pool.
  double negative_confidence = 0.9;
  bool warm_start = false;
  bool rules_only = false;  // final predictions from the learned rules
  uint64_t seed = 13;

  // Throws Error for out-of-range values.
  void Validate() const;
};

// JSON object with the field names above; the tagger block and the
// selection parameters use the keys "tagger", "tau", "global_samples",
// "global_sample_size" and "max_holdouts". Unknown keys are rejected.
BootstrapConfig ParseConfig(const std::string &json_text);
BootstrapConfig LoadConfig(const std::string &path);
std::string ConfigToJson(const BootstrapConfig &config);

// A corpus with its candidate and pattern indexes. Not movable: the rule
// candidate set keeps a pointer to the pattern index.
class IndexedCorpus {
 public:
  IndexedCorpus(const Corpus &corpus, const PhraseLexicon &lexicon, int max_span_len,
                int ngram_max);
  IndexedCorpus(const IndexedCorpus &) = delete;
  IndexedCorpus &operator=(const IndexedCorpus &) = delete;

  const Corpus &corpus() const { return *corpus_; }
  const CandidateIndex &candidates() const { return candidates_; }
  const PatternIndex &patterns() const { return patterns_; }

 private:
  const Corpus *corpus_;
  CandidateIndex candidates_;
  PatternIndex patterns_;
};

struct IterationReport {
  int iteration = 0;
  size_t rules_selected = 0;
  size_t rules_total = 0;
  size_t weak_labels = 0;
  size_t accepted = 0;
  std::vector<size_t> high_precision_sizes;  // per category
  std::vector<double> thresholds;            // per category, NaN when frozen
  std::vector<size_t> members;               // confident spans per category
  std::optional<Metrics> dev;        // tagger on the dev corpus
  std::optional<Metrics> dev_rules;  // current rule set applied to dev
  double wall_seconds = 0.0;

  std::string ToJson() const;
};

struct RunArtifacts {
  std::vector<std::string> labels;
  RuleSet rules;  // seeds first, then learned rules in selection order
  std::vector<IterationReport> reports;
  int best_iteration = 0;
  TaggerParams best_params;
  std::vector<EntitySpan> predictions;  // on the training corpus
  std::vector<Explanation> explanations;
};

// Where a run writes its files. An empty directory means "in memory only".
struct RunOutput {
  std::string directory;
  // Recorded in run.json so that `explain --run` can rebuild the corpus view.
  std::string train_path;
  std::string dev_path;
  std::string seeds_path;
  std::string phrases_path;
};

// Runs the full bootstrap loop:
//   per iteration: apply rules -> select weak labels into the high-precision
//   set -> train the tagger -> predict all candidates -> score and select
//   new rules (effective next iteration) -> evaluate on dev.
// Errors are rethrown as Error("iteration t, phase p: ...") after an abort
// marker is written to the run directory.
RunArtifacts Bootstrap(const BootstrapConfig &config, const Corpus &train, const Corpus *dev,
                       const RuleSet &seeds, const PhraseLexicon &lexicon,
                       const RunOutput &output = {});

// Initialization seed of the tagger trained at |iteration|.
uint64_t TaggerSeed(uint64_t seed, int iteration);

// File names inside a run directory.
inline constexpr const char *kConfigFile = "config.json";
inline constexpr const char *kRunFile = "run.json";
inline constexpr const char *kRulesFile = "rules.jsonl";
inline constexpr const char *kReportsFile = "reports.jsonl";
inline constexpr const char *kCheckpointFile = "checkpoint.json";
inline constexpr const char *kPredictionsFile = "predictions.jsonl";
inline constexpr const char *kExplanationsFile = "explanations.jsonl";
inline constexpr const char *kAbortFile = "ABORTED";

// Rebuilds explanations for a finished run directory from its inputs,
// rules and predictions.
std::vector<Explanation> ExplainRun(const std::string &run_directory);

}  // namespace ruleboot

#endif  // RULEBOOT_BOOTSTRAP_H_
