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


#include <benchmark/benchmark.h>

#include <vector>

#include "planted.h"
#include "ruleboot/candidates.h"
#include "ruleboot/learner.h"
#include "ruleboot/rules.h"
#include "ruleboot/tagger.h"

namespace ruleboot {
namespace {

const testing::PlantedData &Data() {
  static const testing::PlantedData data = [] {
    testing::PlantedOptions options;
    options.train_sentences = 2000;
    return testing::GeneratePlanted(options);
  }();
  return data;
}

const CandidateIndex &Candidates() {
  static const CandidateIndex index = CandidateIndex::Build(Data().train, PhraseLexicon(), 5);
  return index;
}

const PatternIndex &Patterns() {
  static const PatternIndex index = PatternIndex::Build(Data().train, Candidates());
  return index;
}

void BM_EnumerateCandidates(benchmark::State &state) {
  for (auto _ : state) {
    CandidateIndex index = CandidateIndex::Build(Data().train, PhraseLexicon(), 5);
    benchmark::DoNotOptimize(index.size());
  }
  state.SetItemsProcessed(state.iterations() * Data().train.sentences.size());
}
BENCHMARK(BM_EnumerateCandidates)->Unit(benchmark::kMillisecond);

void BM_BuildPatternIndex(benchmark::State &state) {
  for (auto _ : state) {
    PatternIndex index = PatternIndex::Build(Data().train, Candidates());
    benchmark::DoNotOptimize(index.pattern_count());
  }
  state.SetItemsProcessed(state.iterations() * Candidates().size());
}
BENCHMARK(BM_BuildPatternIndex)->Unit(benchmark::kMillisecond);

void BM_ApplyRules(benchmark::State &state) {
  RuleSet rules = Data().seeds;
  rules.insert(rules.end(), Data().planted.begin(), Data().planted.end());
  for (auto _ : state) {
    auto labels = ApplyRules(rules, Patterns(), Candidates(), Data().labels);
    benchmark::DoNotOptimize(labels.data());
  }
}
BENCHMARK(BM_ApplyRules)->Unit(benchmark::kMillisecond);

void BM_ScoreRuleCandidates(benchmark::State &state) {
  const RuleCandidateSet rule_candidates = RuleCandidateSet::Build(Patterns(), Candidates());
  // Members: every candidate a planted rule matches, under that rule's label.
  std::vector<std::vector<CandidateId>> members(Data().labels.size());
  auto weak = ApplyRules(Data().planted, Patterns(), Candidates(), Data().labels);
  for (const WeakLabel &w : weak) members[w.label].push_back(w.candidate);
  const CategoryMembers category_members(Candidates().size(), members);
  for (auto _ : state) {
    auto scored = ScoreRuleCandidates(rule_candidates, category_members, 0.5);
    benchmark::DoNotOptimize(scored.data());
  }
  state.SetItemsProcessed(state.iterations() * rule_candidates.size());
}
BENCHMARK(BM_ScoreRuleCandidates)->Unit(benchmark::kMillisecond);

void BM_PredictCorpus(benchmark::State &state) {
  TaggerHyperParams hyper;
  hyper.hidden = static_cast<int>(state.range(0));
  const TaggerParams params =
      TaggerParams::Initialize(Data().labels, Data().train.dim, hyper, 1);
  for (auto _ : state) {
    auto predictions = PredictCorpus(params, Data().train, Candidates());
    benchmark::DoNotOptimize(predictions.data());
  }
  state.SetItemsProcessed(state.iterations() * Candidates().size());
}
BENCHMARK(BM_PredictCorpus)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ruleboot

BENCHMARK_MAIN();
