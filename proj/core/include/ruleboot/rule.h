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

#ifndef RULEBOOT_RULE_H_
#define RULEBOOT_RULE_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ruleboot {

// The five condition predicates a simple rule can test.
enum class Predicate {
  kTokenString,
  kPreNgram,
  kPostNgram,
  kPosTag,
  kDependencyRel,
};

std::string_view PredicateName(Predicate predicate);
std::optional<Predicate> ParsePredicate(std::string_view name);

struct SimplePattern {
  Predicate predicate = Predicate::kTokenString;
  std::string pattern;

  std::string Render() const;  // "PreNgram=move to the"

  auto operator<=>(const SimplePattern &) const = default;
};

// Rule shapes. The first five are the shapes the learner may produce;
// kOtherSimple only occurs for hand-written single-predicate seeds.
enum class RuleType {
  kTokenString,
  kPreNgramPostNgram,
  kPreNgramPosTag,
  kPosTagPostNgram,
  kDependencyRelPosTag,
  kOtherSimple,
};

inline constexpr int kLearnableRuleTypes = 5;

std::string_view RuleTypeName(RuleType type);

// Returns the rule type of a conjunct list already in canonical order, or
// nothing if the combination is not an allowed shape.
std::optional<RuleType> ClassifyConjuncts(const std::vector<SimplePattern> &conjuncts);

// Puts conjuncts in canonical order (PreNgram/DependencyRel, POSTag,
// PostNgram) and checks that the result is an allowed shape. Throws Error.
std::vector<SimplePattern> CanonicalConjuncts(std::vector<SimplePattern> conjuncts);

// Per-category evidence for a rule against the tagger's confident spans.
struct RuleStats {
  int64_t members = 0;  // F: matched spans that are category members
  int64_t matched = 0;  // N: all matched spans
  double precision = 0.0;
  double score = 0.0;
};

struct Rule {
  std::vector<SimplePattern> conjuncts;
  std::string label;
  bool seed = false;
  int iteration = 0;  // 0 for seeds, otherwise the iteration that learned it
  std::optional<RuleStats> stats;

  RuleType type() const;

  // Label-free identity of the condition, e.g.
  // "PreNgram=move to the & POSTag=PROPN PROPN".
  std::string ConditionKey() const;

  // "PreNgram=a patient with ∧ PostNgram=and → Disease", with a trailing
  // " (seed)" for seed rules.
  std::string Render() const;
};

// Rule ids are positions in this vector.
using RuleSet = std::vector<Rule>;

// Category labels in order of first appearance.
std::vector<std::string> LabelsOf(const RuleSet &rules);

// One JSON object per line:
// {"iteration":t,"label":L,"conjuncts":[{"type":T,"pattern":P}],
//  "score":s,"precision":p,"matches":F}
// Seeds carry iteration 0 and "seed":true.
void WriteRuleJsonl(const Rule &rule, std::ostream &out);
RuleSet ReadRulesJsonl(std::istream &in, const std::string &source);
RuleSet LoadRulesJsonl(const std::string &path);

}  // namespace ruleboot

#endif  // RULEBOOT_RULE_H_
