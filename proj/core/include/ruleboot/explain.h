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

#ifndef RULEBOOT_EXPLAIN_H_
#define RULEBOOT_EXPLAIN_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "ruleboot/candidates.h"
#include "ruleboot/corpus.h"
#include "ruleboot/entities.h"
#include "ruleboot/rules.h"

namespace ruleboot {

struct Explanation {
  std::string sentence;       // sentence id
  std::string sentence_text;
  int start = 0;
  int end = 0;
  std::string span_text;
  std::string label;
  double confidence = 0.0;
  std::vector<std::string> rules;  // rendered, ascending rule id
  bool model_only = false;         // no rule matches the span
};

// Pairs each predicted entity with the rules matching its canonical unit.
// Predictions naming an unknown sentence or a non-candidate span are
// explained as model-only.
std::vector<Explanation> Explain(const std::vector<EntitySpan> &predictions, const Corpus &corpus,
                                 const CandidateIndex &candidates, const RuleSet &rules,
                                 const RuleMatchTable &matches);

void WriteExplanationJsonl(const Explanation &explanation, std::ostream &out);

}  // namespace ruleboot

#endif  // RULEBOOT_EXPLAIN_H_
