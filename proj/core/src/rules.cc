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

#include "ruleboot/rules.h"

#include <algorithm>

#include "ruleboot/error.h"

namespace ruleboot {

std::vector<SimplePattern> ExtractSimplePatterns(const Sentence &sentence, Range span,
                                                 int ngram_max) {
  std::vector<SimplePattern> out;
  const int n = sentence.size();
  out.push_back({Predicate::kTokenString, sentence.Lemmas(span)});
  for (int len = 1; len <= ngram_max && span.start - len >= 0; ++len) {
    out.push_back({Predicate::kPreNgram, sentence.Lemmas({span.start - len, span.start})});
  }
  for (int len = 1; len <= ngram_max && span.end + len <= n; ++len) {
    out.push_back({Predicate::kPostNgram, sentence.Lemmas({span.end, span.end + len})});
  }
  std::string tags;
  for (int i = span.start; i < span.end; ++i) {
    if (i > span.start) tags += ' ';
    tags += sentence.tokens[i].pos;
  }
  out.push_back({Predicate::kPosTag, std::move(tags)});

  // The last token stands in for the span's head word.
  const int head = span.end - 1;
  const int governor = sentence.tokens[head].head;
  if (governor >= 0) {
    const std::string &gov_lemma = sentence.tokens[governor].lemma;
    out.push_back({Predicate::kDependencyRel, gov_lemma});
    const int grand = sentence.tokens[governor].head;
    if (grand >= 0) {
      out.push_back({Predicate::kDependencyRel, sentence.tokens[grand].lemma +
                                                    std::string(kDependencySeparator) +
                                                    gov_lemma});
    }
  }
  return out;
}

bool RuleMatches(const Rule &rule, const SpanCandidate &candidate, const Sentence &sentence,
                 int ngram_max) {
  const auto patterns =
      ExtractSimplePatterns(sentence, {candidate.start, candidate.end}, ngram_max);
  for (const SimplePattern &conjunct : rule.conjuncts) {
    if (std::find(patterns.begin(), patterns.end(), conjunct) == patterns.end()) return false;
  }
  return !rule.conjuncts.empty();
}

PatternIndex PatternIndex::Build(const Corpus &corpus, const CandidateIndex &candidates,
                                 int ngram_max) {
  PatternIndex index;
  const size_t count = candidates.size();
  index.candidate_offsets_.reserve(count + 1);
  for (CandidateId id = 0; id < count; ++id) {
    index.candidate_offsets_.push_back(static_cast<uint32_t>(index.candidate_patterns_.size()));
    const SpanKey &key = candidates.key(id);
    for (SimplePattern &p :
         ExtractSimplePatterns(corpus.sentences[key.sentence], key.range(), ngram_max)) {
      auto [it, inserted] = index.ids_.try_emplace(p, static_cast<PatternId>(index.patterns_.size()));
      if (inserted) index.patterns_.push_back(std::move(p));
      index.candidate_patterns_.push_back(it->second);
    }
  }
  index.candidate_offsets_.push_back(static_cast<uint32_t>(index.candidate_patterns_.size()));

  // Transpose into postings; candidates are visited in ascending order so
  // every posting list comes out sorted.
  std::vector<uint32_t> counts(index.patterns_.size() + 1, 0);
  for (PatternId p : index.candidate_patterns_) ++counts[p + 1];
  for (size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  index.posting_offsets_ = counts;
  index.postings_.resize(index.candidate_patterns_.size());
  std::vector<uint32_t> cursor(counts.begin(), counts.end() - 1);
  for (CandidateId id = 0; id < count; ++id) {
    for (uint32_t k = index.candidate_offsets_[id]; k < index.candidate_offsets_[id + 1]; ++k) {
      index.postings_[cursor[index.candidate_patterns_[k]]++] = id;
    }
  }
  return index;
}

std::optional<PatternId> PatternIndex::Lookup(const SimplePattern &pattern) const {
  auto it = ids_.find(pattern);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::span<const CandidateId> PatternIndex::Postings(PatternId id) const {
  return {postings_.data() + posting_offsets_[id], postings_.data() + posting_offsets_[id + 1]};
}

std::span<const PatternId> PatternIndex::PatternsOf(CandidateId id) const {
  return {candidate_patterns_.data() + candidate_offsets_[id],
          candidate_patterns_.data() + candidate_offsets_[id + 1]};
}

std::vector<CandidateId> PatternIndex::Match(const std::vector<SimplePattern> &conjuncts) const {
  std::vector<CandidateId> result;
  if (conjuncts.empty()) return result;
  std::vector<std::span<const CandidateId>> lists;
  for (const SimplePattern &c : conjuncts) {
    auto id = Lookup(c);
    if (!id) return result;
    lists.push_back(Postings(*id));
  }
  std::sort(lists.begin(), lists.end(),
            [](const auto &a, const auto &b) { return a.size() < b.size(); });
  result.assign(lists[0].begin(), lists[0].end());
  for (size_t i = 1; i < lists.size() && !result.empty(); ++i) {
    std::vector<CandidateId> next;
    std::set_intersection(result.begin(), result.end(), lists[i].begin(), lists[i].end(),
                          std::back_inserter(next));
    result = std::move(next);
  }
  return result;
}

RuleCandidateSet RuleCandidateSet::Build(const PatternIndex &patterns,
                                         const CandidateIndex &candidates) {
  RuleCandidateSet set;
  set.patterns_ = &patterns;
  std::vector<PatternId> pre, post, dep;
  auto add = [&set](PatternId a, PatternId b, RuleType type, CandidateId c) {
    auto [it, inserted] =
        set.by_key_.try_emplace(PackKey(a, b), static_cast<uint32_t>(set.skeletons_.size()));
    if (inserted) set.skeletons_.push_back({a, b, type, {}});
    set.skeletons_[it->second].matches.push_back(c);
  };
  for (CandidateId c = 0; c < candidates.size(); ++c) {
    PatternId token = kNoPattern, pos = kNoPattern;
    pre.clear();
    post.clear();
    dep.clear();
    for (PatternId p : patterns.PatternsOf(c)) {
      switch (patterns.pattern(p).predicate) {
        case Predicate::kTokenString: token = p; break;
        case Predicate::kPreNgram: pre.push_back(p); break;
        case Predicate::kPostNgram: post.push_back(p); break;
        case Predicate::kPosTag: pos = p; break;
        case Predicate::kDependencyRel: dep.push_back(p); break;
      }
    }
    add(token, kNoPattern, RuleType::kTokenString, c);
    for (PatternId a : pre) {
      for (PatternId b : post) add(a, b, RuleType::kPreNgramPostNgram, c);
    }
    for (PatternId a : pre) add(a, pos, RuleType::kPreNgramPosTag, c);
    for (PatternId b : post) add(pos, b, RuleType::kPosTagPostNgram, c);
    for (PatternId a : dep) add(a, pos, RuleType::kDependencyRelPosTag, c);
  }
  return set;
}

std::vector<SimplePattern> RuleCandidateSet::Conjuncts(size_t i) const {
  const RuleSkeleton &s = skeletons_[i];
  std::vector<SimplePattern> out{patterns_->pattern(s.first)};
  if (s.second != kNoPattern) out.push_back(patterns_->pattern(s.second));
  return out;
}

std::optional<size_t> RuleCandidateSet::Find(const std::vector<SimplePattern> &conjuncts) const {
  if (conjuncts.empty() || conjuncts.size() > 2 || patterns_ == nullptr) return std::nullopt;
  auto a = patterns_->Lookup(conjuncts[0]);
  if (!a) return std::nullopt;
  PatternId b = kNoPattern;
  if (conjuncts.size() == 2) {
    auto found = patterns_->Lookup(conjuncts[1]);
    if (!found) return std::nullopt;
    b = *found;
  }
  auto it = by_key_.find(PackKey(*a, b));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

RuleMatchTable::RuleMatchTable(size_t candidate_count,
                               std::vector<std::pair<CandidateId, int>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  offsets_.assign(candidate_count + 1, 0);
  for (const auto &[c, r] : pairs) ++offsets_[c + 1];
  for (size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  rule_ids_.reserve(pairs.size());
  for (const auto &[c, r] : pairs) rule_ids_.push_back(r);
}

std::span<const int> RuleMatchTable::RulesFor(CandidateId id) const {
  if (id + 1 >= offsets_.size()) return {};
  return {rule_ids_.data() + offsets_[id], rule_ids_.data() + offsets_[id + 1]};
}

RuleMatchTable MatchRules(const RuleSet &rules, const PatternIndex &patterns,
                          const CandidateIndex &candidates) {
  std::vector<std::pair<CandidateId, int>> pairs;
  for (size_t r = 0; r < rules.size(); ++r) {
    for (CandidateId c : patterns.Match(rules[r].conjuncts)) {
      pairs.emplace_back(c, static_cast<int>(r));
    }
  }
  return RuleMatchTable(candidates.size(), std::move(pairs));
}

std::vector<WeakLabel> ApplyRules(const RuleSet &rules, const RuleMatchTable &matches,
                                  const CandidateIndex &candidates,
                                  const std::vector<std::string> &labels,
                                  TiePolicy tie_policy) {
  std::vector<int> rule_label(rules.size());
  for (size_t r = 0; r < rules.size(); ++r) {
    auto it = std::find(labels.begin(), labels.end(), rules[r].label);
    if (it == labels.end()) throw Error("rule label \"" + rules[r].label + "\" is not a known category");
    rule_label[r] = static_cast<int>(it - labels.begin());
  }
  std::vector<WeakLabel> out;
  const int label_count = static_cast<int>(labels.size());
  for (CandidateId c = 0; c < candidates.size(); ++c) {
    auto ids = matches.RulesFor(c);
    if (ids.empty()) continue;
    std::vector<int> votes(label_count, 0);
    for (int r : ids) ++votes[rule_label[r]];
    const int top = *std::max_element(votes.begin(), votes.end());
    int winner = -1;
    int tied = 0;
    for (int l = 0; l < label_count; ++l) {
      if (votes[l] == top) {
        ++tied;
        if (winner < 0) winner = l;
      }
    }
    if (tied > 1) {
      if (tie_policy == TiePolicy::kAbstain) continue;
      // Rule ids are ascending; the first one voting for a tied label decides.
      for (int r : ids) {
        if (votes[rule_label[r]] == top) {
          winner = rule_label[r];
          break;
        }
      }
    }
    WeakLabel w;
    w.candidate = c;
    w.key = candidates.key(c);
    w.label = winner;
    w.rule_ids.assign(ids.begin(), ids.end());
    w.votes = std::move(votes);
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<WeakLabel> ApplyRules(const RuleSet &rules, const PatternIndex &patterns,
                                  const CandidateIndex &candidates,
                                  const std::vector<std::string> &labels,
                                  TiePolicy tie_policy) {
  return ApplyRules(rules, MatchRules(rules, patterns, candidates), candidates, labels,
                    tie_policy);
}

}  // namespace ruleboot
