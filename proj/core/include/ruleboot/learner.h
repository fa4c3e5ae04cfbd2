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

#ifndef RULEBOOT_LEARNER_H_
#define RULEBOOT_LEARNER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ruleboot/candidates.h"
#include "ruleboot/rule.h"
#include "ruleboot/rules.h"

namespace ruleboot {

enum class SelectionStrategy {
  kEntityType,         // top K per category
  kRuleType,           // top K per rule type
  kEntityAndRuleType,  // top K per (category, rule type)
};

std::string_view StrategyName(SelectionStrategy strategy);
std::optional<SelectionStrategy> ParseStrategy(std::string_view name);

// (F / N) * log2(F); -infinity when F == 0. Throws Error when N == 0.
double RlogfScore(int64_t members, int64_t matched);

// F, N, precision and score together; N == 0 yields score -infinity.
RuleStats MakeRuleStats(int64_t members, int64_t matched);

// K0 + eta * (t - 1) for iteration t >= 1.
int KSchedule(int k0, int eta, int iteration);

// Dense membership of canonical candidates in each category's confident set.
class CategoryMembers {
 public:
  CategoryMembers(size_t candidate_count, const std::vector<std::vector<CandidateId>> &members);

  int category_count() const { return static_cast<int>(flags_.size()); }
  bool Contains(int category, CandidateId id) const { return flags_[category][id] != 0; }
  size_t size(int category) const { return sizes_[category]; }

 private:
  std::vector<std::vector<uint8_t>> flags_;
  std::vector<size_t> sizes_;
};

// Per-category stats for one match set.
std::vector<RuleStats> ComputeRuleStats(std::span<const CandidateId> matches,
                                        const CategoryMembers &members);

struct ScoredRule {
  size_t skeleton = 0;
  std::vector<SimplePattern> conjuncts;
  std::string key;  // Rule::ConditionKey of the conjuncts
  RuleType type = RuleType::kTokenString;
  int category = 0;  // argmax of the per-category score, lowest index on ties
  RuleStats stats;   // stats for that category
};

// Scores every rule candidate and keeps those with a finite score and
// precision >= |min_precision|.
std::vector<ScoredRule> ScoreRuleCandidates(const RuleCandidateSet &candidates,
                                            const CategoryMembers &members,
                                            double min_precision = 0.0);

// Drops candidates below |theta| or already in |existing| (condition keys),
// then keeps the top |k| of each strategy group by score, then F, then key.
// Selected rules are labeled with their category and stamped with
// |iteration|.
RuleSet SelectNewRules(std::vector<ScoredRule> candidates, SelectionStrategy strategy, int k,
                       double theta, const std::unordered_set<std::string> &existing,
                       const std::vector<std::string> &labels, int iteration);

}  // namespace ruleboot

#endif  // RULEBOOT_LEARNER_H_
