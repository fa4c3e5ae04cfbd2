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

#include "ruleboot/learner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ruleboot/error.h"

namespace ruleboot {

std::string_view StrategyName(SelectionStrategy strategy) {
  switch (strategy) {
    case SelectionStrategy::kEntityType: return "entity_type";
    case SelectionStrategy::kRuleType: return "rule_type";
    case SelectionStrategy::kEntityAndRuleType: return "entity_and_rule_type";
  }
  return "?";
}

std::optional<SelectionStrategy> ParseStrategy(std::string_view name) {
  for (auto s : {SelectionStrategy::kEntityType, SelectionStrategy::kRuleType,
                 SelectionStrategy::kEntityAndRuleType}) {
    if (StrategyName(s) == name) return s;
  }
  return std::nullopt;
}

double RlogfScore(int64_t members, int64_t matched) {
  if (matched <= 0) throw Error("RlogF needs at least one matched span");
  if (members <= 0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(members) / static_cast<double>(matched) *
         std::log2(static_cast<double>(members));
}

RuleStats MakeRuleStats(int64_t members, int64_t matched) {
  RuleStats stats;
  stats.members = members;
  stats.matched = matched;
  if (matched <= 0) {
    stats.precision = 0.0;
    stats.score = -std::numeric_limits<double>::infinity();
    return stats;
  }
  stats.precision = static_cast<double>(members) / static_cast<double>(matched);
  stats.score = RlogfScore(members, matched);
  return stats;
}

int KSchedule(int k0, int eta, int iteration) {
  if (k0 < 1 || eta < 0 || iteration < 1) throw Error("invalid K schedule arguments");
  return k0 + eta * (iteration - 1);
}

CategoryMembers::CategoryMembers(size_t candidate_count,
                                 const std::vector<std::vector<CandidateId>> &members)
    : flags_(members.size(), std::vector<uint8_t>(candidate_count, 0)),
      sizes_(members.size(), 0) {
  for (size_t c = 0; c < members.size(); ++c) {
    for (CandidateId id : members[c]) {
      if (id >= candidate_count) throw Error("member id outside the candidate universe");
      if (!flags_[c][id]) ++sizes_[c];
      flags_[c][id] = 1;
    }
  }
}

std::vector<RuleStats> ComputeRuleStats(std::span<const CandidateId> matches,
                                        const CategoryMembers &members) {
  const int categories = members.category_count();
  std::vector<int64_t> hits(categories, 0);
  for (CandidateId id : matches) {
    for (int c = 0; c < categories; ++c) hits[c] += members.Contains(c, id);
  }
  std::vector<RuleStats> stats;
  stats.reserve(categories);
  for (int c = 0; c < categories; ++c) {
    stats.push_back(MakeRuleStats(hits[c], static_cast<int64_t>(matches.size())));
  }
  return stats;
}

std::vector<ScoredRule> ScoreRuleCandidates(const RuleCandidateSet &candidates,
                                            const CategoryMembers &members,
                                            double min_precision) {
  std::vector<ScoredRule> out;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const RuleSkeleton &skeleton = candidates.skeleton(i);
    const auto stats = ComputeRuleStats(skeleton.matches, members);
    int best = -1;
    for (int c = 0; c < static_cast<int>(stats.size()); ++c) {
      if (best < 0 || stats[c].score > stats[best].score) best = c;
    }
    if (best < 0 || !std::isfinite(stats[best].score)) continue;
    if (stats[best].precision < min_precision) continue;
    ScoredRule scored;
    scored.skeleton = i;
    scored.conjuncts = candidates.Conjuncts(i);
    scored.type = skeleton.type;
    scored.category = best;
    scored.stats = stats[best];
    Rule probe{scored.conjuncts, "", false, 0, std::nullopt};
    scored.key = probe.ConditionKey();
    out.push_back(std::move(scored));
  }
  return out;
}

RuleSet SelectNewRules(std::vector<ScoredRule> candidates, SelectionStrategy strategy, int k,
                       double theta, const std::unordered_set<std::string> &existing,
                       const std::vector<std::string> &labels, int iteration) {
  if (theta < 0.0 || theta > 1.0) throw Error("theta must lie in [0, 1]");
  std::erase_if(candidates, [&](const ScoredRule &r) {
    return !std::isfinite(r.stats.score) || r.stats.precision < theta ||
           existing.count(r.key) > 0;
  });
  auto group_of = [strategy](const ScoredRule &r) -> std::pair<int, int> {
    switch (strategy) {
      case SelectionStrategy::kEntityType: return {r.category, 0};
      case SelectionStrategy::kRuleType: return {0, static_cast<int>(r.type)};
      case SelectionStrategy::kEntityAndRuleType:
        return {r.category, static_cast<int>(r.type)};
    }
    return {0, 0};
  };
  std::map<std::pair<int, int>, std::vector<const ScoredRule *>> groups;
  for (const ScoredRule &r : candidates) groups[group_of(r)].push_back(&r);

  RuleSet selected;
  for (auto &[group, list] : groups) {
    std::sort(list.begin(), list.end(), [](const ScoredRule *a, const ScoredRule *b) {
      if (a->stats.score != b->stats.score) return a->stats.score > b->stats.score;
      if (a->stats.members != b->stats.members) return a->stats.members > b->stats.members;
      return a->key < b->key;
    });
    const size_t take = std::min(list.size(), static_cast<size_t>(std::max(0, k)));
    for (size_t i = 0; i < take; ++i) {
      const ScoredRule &r = *list[i];
      Rule rule;
      rule.conjuncts = r.conjuncts;
      rule.label = labels.at(r.category);
      rule.seed = false;
      rule.iteration = iteration;
      rule.stats = r.stats;
      selected.push_back(std::move(rule));
    }
  }
  return selected;
}

}  // namespace ruleboot
