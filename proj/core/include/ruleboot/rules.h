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

#ifndef RULEBOOT_RULES_H_
#define RULEBOOT_RULES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ruleboot/candidates.h"
#include "ruleboot/corpus.h"
#include "ruleboot/rule.h"

namespace ruleboot {

inline constexpr int kDefaultNgramMax = 3;
inline constexpr std::string_view kDependencySeparator = "||";

// Patterns of every predicate for one span:
//  - TokenString: lemmas of the span;
//  - PreNgram / PostNgram: the 1..ngram_max lemma n-grams just before/after
//    the span that fit inside the sentence;
//  - POSTag: the span's POS tags;
//  - DependencyRel: lemma of the governor of the span's last token, and
//    "grand-governor||governor" when that exists too.
std::vector<SimplePattern> ExtractSimplePatterns(const Sentence &sentence, Range span,
                                                 int ngram_max = kDefaultNgramMax);

// True iff every conjunct of |rule| equals the pattern the span yields for
// that predicate. Tests the span's own range, not its canonical unit.
bool RuleMatches(const Rule &rule, const SpanCandidate &candidate, const Sentence &sentence,
                 int ngram_max = kDefaultNgramMax);

using PatternId = uint32_t;
inline constexpr PatternId kNoPattern = UINT32_MAX;

struct SimplePatternHash {
  size_t operator()(const SimplePattern &p) const {
    return std::hash<std::string>()(p.pattern) * 31 + static_cast<size_t>(p.predicate);
  }
};

// Inverted index from simple patterns to the canonical candidates that
// produce them.
class PatternIndex {
 public:
  PatternIndex() = default;

  static PatternIndex Build(const Corpus &corpus, const CandidateIndex &candidates,
                            int ngram_max = kDefaultNgramMax);

  size_t pattern_count() const { return patterns_.size(); }
  const SimplePattern &pattern(PatternId id) const { return patterns_[id]; }
  std::optional<PatternId> Lookup(const SimplePattern &pattern) const;

  // Candidates producing a pattern, ascending.
  std::span<const CandidateId> Postings(PatternId id) const;
  // Patterns produced by a candidate, in extraction order.
  std::span<const PatternId> PatternsOf(CandidateId id) const;

  // Candidates matched by a conjunction (sorted intersection of postings).
  std::vector<CandidateId> Match(const std::vector<SimplePattern> &conjuncts) const;

 private:
  std::vector<SimplePattern> patterns_;
  std::unordered_map<SimplePattern, PatternId, SimplePatternHash> ids_;
  std::vector<uint32_t> posting_offsets_;
  std::vector<CandidateId> postings_;
  std::vector<uint32_t> candidate_offsets_;
  std::vector<PatternId> candidate_patterns_;
};

// A label-free rule condition plus the candidates it matches.
struct RuleSkeleton {
  PatternId first = kNoPattern;
  PatternId second = kNoPattern;  // kNoPattern for TokenString singletons
  RuleType type = RuleType::kTokenString;
  std::vector<CandidateId> matches;  // ascending
};

// Every TokenString singleton plus every allowed conjunction that co-occurs
// on some canonical candidate, deduplicated corpus-wide.
class RuleCandidateSet {
 public:
  static RuleCandidateSet Build(const PatternIndex &patterns, const CandidateIndex &candidates);

  size_t size() const { return skeletons_.size(); }
  bool empty() const { return skeletons_.empty(); }
  const RuleSkeleton &skeleton(size_t i) const { return skeletons_[i]; }
  const std::vector<RuleSkeleton> &skeletons() const { return skeletons_; }

  std::vector<SimplePattern> Conjuncts(size_t i) const;
  std::optional<size_t> Find(const std::vector<SimplePattern> &conjuncts) const;

 private:
  static uint64_t PackKey(PatternId a, PatternId b) {
    return (static_cast<uint64_t>(a) << 32) | b;
  }

  const PatternIndex *patterns_ = nullptr;
  std::vector<RuleSkeleton> skeletons_;
  std::unordered_map<uint64_t, uint32_t> by_key_;
};

// Which rules (by id) match each canonical candidate.
class RuleMatchTable {
 public:
  RuleMatchTable() = default;
  RuleMatchTable(size_t candidate_count, std::vector<std::pair<CandidateId, int>> pairs);

  std::span<const int> RulesFor(CandidateId id) const;
  size_t candidate_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

 private:
  std::vector<uint32_t> offsets_;
  std::vector<int> rule_ids_;
};

RuleMatchTable MatchRules(const RuleSet &rules, const PatternIndex &patterns,
                          const CandidateIndex &candidates);

enum class TiePolicy {
  kAbstain,        // ties produce no weak label
  kFirstByRuleId,  // the tied label voted by the lowest rule id wins
};

struct WeakLabel {
  CandidateId candidate = 0;
  SpanKey key;
  int label = 0;                // index into the label list
  std::vector<int> rule_ids;    // every matching rule, ascending
  std::vector<int> votes;       // per label
};

// Majority vote over rule matches on canonical candidates. Output is
// ordered by candidate id. Throws Error if a rule's label is not in |labels|.
std::vector<WeakLabel> ApplyRules(const RuleSet &rules, const RuleMatchTable &matches,
                                  const CandidateIndex &candidates,
                                  const std::vector<std::string> &labels,
                                  TiePolicy tie_policy = TiePolicy::kAbstain);

std::vector<WeakLabel> ApplyRules(const RuleSet &rules, const PatternIndex &patterns,
                                  const CandidateIndex &candidates,
                                  const std::vector<std::string> &labels,
                                  TiePolicy tie_policy = TiePolicy::kAbstain);

}  // namespace ruleboot

#endif  // RULEBOOT_RULES_H_
