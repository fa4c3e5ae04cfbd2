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

#ifndef RULEBOOT_TESTS_SUPPORT_REFERENCE_H_
#define RULEBOOT_TESTS_SUPPORT_REFERENCE_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ruleboot/corpus.h"
#include "ruleboot/rule.h"

// Deliberately naive re-implementations used as test oracles. Nothing here
// calls into the pattern extractor, the candidate index or the matcher.
namespace ruleboot::reference {

struct SpanPatterns {
  std::string token_string;
  std::vector<std::string> pre;   // pre[n-1] is the n-gram, when it fits
  std::vector<std::string> post;
  std::string pos;
  std::optional<std::string> dep1;
  std::optional<std::string> dep2;
};

SpanPatterns Patterns(const Sentence &sentence, int start, int end, int ngram_max = 3);

// The set of "Predicate=pattern" strings for a span.
std::set<std::string> PatternStrings(const Sentence &sentence, int start, int end,
                                     int ngram_max = 3);

bool Matches(const Rule &rule, const Sentence &sentence, int start, int end, int ngram_max = 3);

// Canonical units of a sentence: every span of length <= max_len mapped to
// the leftmost-longest lexicon phrase containing it, deduplicated.
std::vector<std::pair<int, int>> CanonicalUnits(const Sentence &sentence,
                                                const std::set<std::string> &phrases,
                                                int max_len);

struct Vote {
  int sentence = 0;
  int start = 0;
  int end = 0;
  std::string label;
  std::vector<int> rule_ids;
  std::map<std::string, int> tally;

  bool operator==(const Vote &) const = default;
};

// Per (rule, canonical span) matching with a vote tally. |first_by_rule_id|
// selects the tie policy that lets the lowest-id rule's label win.
std::vector<Vote> ApplyRules(const RuleSet &rules, const Corpus &corpus,
                             const std::set<std::string> &phrases, int max_len,
                             bool first_by_rule_id = false);

}  // namespace ruleboot::reference

#endif  // RULEBOOT_TESTS_SUPPORT_REFERENCE_H_
