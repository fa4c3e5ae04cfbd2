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

#include "ruleboot/explain.h"

#include <ostream>
#include <unordered_map>

#include "json.hpp"

namespace ruleboot {

std::vector<Explanation> Explain(const std::vector<EntitySpan> &predictions, const Corpus &corpus,
                                 const CandidateIndex &candidates, const RuleSet &rules,
                                 const RuleMatchTable &matches) {
  std::unordered_map<std::string, int> sentence_index;
  for (size_t i = 0; i < corpus.sentences.size(); ++i) {
    sentence_index.emplace(corpus.sentences[i].id, static_cast<int>(i));
  }
  std::vector<Explanation> out;
  out.reserve(predictions.size());
  for (const EntitySpan &p : predictions) {
    Explanation e;
    e.sentence = p.sentence;
    e.start = p.start;
    e.end = p.end;
    e.label = p.label;
    e.confidence = p.confidence;
    auto it = sentence_index.find(p.sentence);
    if (it != sentence_index.end()) {
      const Sentence &s = corpus.sentences[it->second];
      e.sentence_text = s.Text();
      if (p.start >= 0 && p.start < p.end && p.end <= s.size()) {
        e.span_text = s.Text({p.start, p.end});
      }
      if (auto id = candidates.CanonicalOf({it->second, p.start, p.end})) {
        for (int r : matches.RulesFor(*id)) e.rules.push_back(rules[r].Render());
      }
    }
    e.model_only = e.rules.empty();
    out.push_back(std::move(e));
  }
  return out;
}

void WriteExplanationJsonl(const Explanation &e, std::ostream &out) {
  nlohmann::json record = {{"sentence", e.sentence}, {"sentence_text", e.sentence_text},
                           {"start", e.start},       {"end", e.end},
                           {"span_text", e.span_text}, {"label", e.label},
                           {"confidence", e.confidence}, {"rules", e.rules},
                           {"model_only", e.model_only}};
  out << record.dump() << '\n';
}

}  // namespace ruleboot
