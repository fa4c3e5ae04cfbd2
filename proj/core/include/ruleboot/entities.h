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

#ifndef RULEBOOT_ENTITIES_H_
#define RULEBOOT_ENTITIES_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ruleboot/candidates.h"
#include "ruleboot/corpus.h"
#include "ruleboot/rules.h"
#include "ruleboot/tagger.h"

namespace ruleboot {

inline constexpr std::string_view kNegLabel = "NEG";

// One predicted or gold entity: {"sentence":id,"start":s,"end":e,
// "label":L,"confidence":c} in JSONL form.
struct EntitySpan {
  std::string sentence;
  int start = 0;
  int end = 0;
  std::string label;
  double confidence = 1.0;
};

void WriteEntityJsonl(const EntitySpan &entity, std::ostream &out);
std::vector<EntitySpan> ReadEntitiesJsonl(std::istream &in, const std::string &source);
std::vector<EntitySpan> LoadEntitiesJsonl(const std::string &path);

std::vector<EntitySpan> GoldEntities(const Corpus &corpus);

// A labeled candidate awaiting decoding.
struct ScoredSpan {
  SpanKey key;
  int label = 0;
  double confidence = 0.0;
};

// Greedy non-overlapping selection: highest confidence first (then longer
// span, then key), skipping spans that share a token with one already
// kept. Output is ordered by key.
std::vector<ScoredSpan> DecodeNonOverlapping(std::vector<ScoredSpan> spans);

// Non-NEG tagger predictions, decoded.
std::vector<EntitySpan> DecodePredictions(std::span<const SpanPrediction> predictions,
                                          const Corpus &corpus,
                                          const std::vector<std::string> &labels);

// Weak labels, decoded, with confidence = winning votes / all votes.
std::vector<EntitySpan> DecodeWeakLabels(const std::vector<WeakLabel> &weak_labels,
                                         const Corpus &corpus,
                                         const std::vector<std::string> &labels);

}  // namespace ruleboot

#endif  // RULEBOOT_ENTITIES_H_
