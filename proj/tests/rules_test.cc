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

#include <gtest/gtest.h>

#include <set>

#include "reference.h"
#include "ruleboot/error.h"
#include "test_corpus.h"

namespace ruleboot {
namespace {

using testing::Pair;
using testing::S1;
using testing::Simple;
using P = Predicate;

std::set<std::string> Rendered(const std::vector<SimplePattern> &patterns) {
  std::set<std::string> out;
  for (const SimplePattern &p : patterns) out.insert(p.Render());
  return out;
}

TEST(ExtractSimplePatterns, UnitedStates) {
  const std::vector<SimplePattern> patterns = ExtractSimplePatterns(S1(), {4, 6});
  EXPECT_EQ(patterns.size(), 10u);
  EXPECT_EQ(Rendered(patterns),
            (std::set<std::string>{"TokenString=united state", "PreNgram=the",
                                   "PreNgram=to the", "PreNgram=move to the", "PostNgram=in",
                                   "PostNgram=in 1916", "PostNgram=in 1916 .",
                                   "POSTag=PROPN PROPN", "DependencyRel=to",
                                   "DependencyRel=move||to"}));
}

TEST(ExtractSimplePatterns, SentenceStartHasNoPreNgram) {
  for (const SimplePattern &p : ExtractSimplePatterns(S1(), {0, 1})) {
    EXPECT_NE(p.predicate, P::kPreNgram);
  }
}

TEST(ExtractSimplePatterns, RootTokenHasNoDependency) {
  Sentence s = testing::MakeSentence("one", {{"Aspirin", "PROPN", -1}});
  const auto patterns = ExtractSimplePatterns(s, {0, 1});
  EXPECT_EQ(Rendered(patterns),
            (std::set<std::string>{"TokenString=aspirin", "POSTag=PROPN"}));
}

TEST(ExtractSimplePatterns, AgreesWithReferenceAndBounds) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    Corpus c = testing::RandomCorpus(rng, {8, 12, 5, 2});
    for (const Sentence &s : c.sentences) {
      for (const SpanCandidate &span : EnumerateSpans(0, s, 5)) {
        const auto patterns = ExtractSimplePatterns(s, {span.start, span.end});
        int counts[5] = {0, 0, 0, 0, 0};
        for (const SimplePattern &p : patterns) ++counts[static_cast<int>(p.predicate)];
        EXPECT_EQ(counts[0], 1);
        EXPECT_LE(counts[1], 3);
        EXPECT_LE(counts[2], 3);
        EXPECT_EQ(counts[3], 1);
        EXPECT_LE(counts[4], 2);
        ASSERT_EQ(Rendered(patterns), reference::PatternStrings(s, span.start, span.end));
      }
    }
  }
}

TEST(RuleMatches, Examples) {
  const Sentence s = S1();
  const SpanCandidate united_states{0, 4, 6, 4, 6};
  const SpanCandidate united{0, 4, 5, 4, 6};
  EXPECT_TRUE(RuleMatches(Simple(P::kTokenString, "united state", "L"), united_states, s));
  EXPECT_FALSE(RuleMatches(Pair(P::kPreNgram, "move to the", P::kPosTag, "PROPN", "L"),
                           united_states, s));
  EXPECT_TRUE(RuleMatches(Pair(P::kPreNgram, "move to the", P::kPosTag, "PROPN PROPN", "L"),
                          united_states, s));
  EXPECT_TRUE(RuleMatches(Pair(P::kDependencyRel, "move||to", P::kPosTag, "PROPN PROPN", "L"),
                          united_states, s));
  EXPECT_FALSE(RuleMatches(Simple(P::kTokenString, "united state", "L"), united, s));
}

TEST(PatternIndex, PostingsAndMatch) {
  Corpus c = testing::S1Corpus();
  CandidateIndex candidates = CandidateIndex::Build(c, PhraseLexicon(), 5);
  PatternIndex index = PatternIndex::Build(c, candidates);
  auto id = index.Lookup({P::kPosTag, "PROPN"});
  ASSERT_TRUE(id.has_value());
  std::vector<CandidateId> propn(index.Postings(*id).begin(), index.Postings(*id).end());
  EXPECT_EQ(propn, (std::vector<CandidateId>{*candidates.Find({0, 0, 1}),
                                             *candidates.Find({0, 4, 5}),
                                             *candidates.Find({0, 5, 6})}));
  EXPECT_EQ(index.Match({{P::kPosTag, "PROPN"}, {P::kPostNgram, "in"}}),
            (std::vector<CandidateId>{*candidates.Find({0, 5, 6})}));
  EXPECT_TRUE(index.Match({{P::kPosTag, "NOPE"}}).empty());
  const CandidateId us = *candidates.Find({0, 4, 6});
  EXPECT_EQ(index.PatternsOf(us).size(), 10u);
}

TEST(RuleCandidateSet, ContainsPaperExample) {
  Corpus c = testing::S1Corpus();
  CandidateIndex candidates = CandidateIndex::Build(c, PhraseLexicon(), 5);
  PatternIndex patterns = PatternIndex::Build(c, candidates);
  RuleCandidateSet set = RuleCandidateSet::Build(patterns, candidates);
  auto found = set.Find(
      CanonicalConjuncts({{P::kPreNgram, "move to the"}, {P::kPosTag, "PROPN PROPN"}}));
  ASSERT_TRUE(found.has_value());
  EXPECT_EQ(set.skeleton(*found).matches,
            (std::vector<CandidateId>{*candidates.Find({0, 4, 6})}));
  EXPECT_EQ(set.skeleton(*found).type, RuleType::kPreNgramPosTag);
}

TEST(RuleCandidateSet, EmptyCorpus) {
  Corpus c;
  c.dim = 2;
  CandidateIndex candidates = CandidateIndex::Build(c, PhraseLexicon(), 5);
  PatternIndex patterns = PatternIndex::Build(c, candidates);
  EXPECT_TRUE(RuleCandidateSet::Build(patterns, candidates).empty());
}

TEST(RuleCandidateSet, DeduplicatesAcrossSentences) {
  Corpus c = testing::S1Corpus();
  c.sentences.push_back(S1());
  c.sentences[1].id = "S1b";
  CandidateIndex candidates = CandidateIndex::Build(c, PhraseLexicon(), 5);
  PatternIndex patterns = PatternIndex::Build(c, candidates);
  RuleCandidateSet set = RuleCandidateSet::Build(patterns, candidates);
  auto found = set.Find(
      CanonicalConjuncts({{P::kPreNgram, "move to the"}, {P::kPosTag, "PROPN PROPN"}}));
  ASSERT_TRUE(found.has_value());
  EXPECT_EQ(set.skeleton(*found).matches.size(), 2u);
}

// Each skeleton's match list equals naive matching over all canonical
// candidates, and the skeleton set equals the brute-force enumeration.
TEST(RuleCandidateSet, AgreesWithBruteForce) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    Corpus c = testing::RandomCorpus(rng, {6, 8, 4, 2});
    PhraseLexicon lexicon = testing::RandomLexicon(rng, c, 2);
    CandidateIndex candidates = CandidateIndex::Build(c, lexicon, 5);
    PatternIndex patterns = PatternIndex::Build(c, candidates);
    RuleCandidateSet set = RuleCandidateSet::Build(patterns, candidates);

    std::set<std::string> expected;
    for (CandidateId id = 0; id < candidates.size(); ++id) {
      const SpanKey &k = candidates.key(id);
      const auto p = reference::Patterns(c.sentences[k.sentence], k.start, k.end);
      expected.insert("TokenString=" + p.token_string);
      std::vector<std::string> deps;
      if (p.dep1) deps.push_back("DependencyRel=" + *p.dep1);
      if (p.dep2) deps.push_back("DependencyRel=" + *p.dep2);
      for (const auto &pre : p.pre) {
        for (const auto &post : p.post) expected.insert("PreNgram=" + pre + " & PostNgram=" + post);
        expected.insert("PreNgram=" + pre + " & POSTag=" + p.pos);
      }
      for (const auto &post : p.post) expected.insert("POSTag=" + p.pos + " & PostNgram=" + post);
      for (const auto &d : deps) expected.insert(d + " & POSTag=" + p.pos);
    }
    std::set<std::string> actual;
    for (size_t i = 0; i < set.size(); ++i) {
      Rule rule;
      rule.conjuncts = set.Conjuncts(i);
      rule.label = "L";
      actual.insert(rule.ConditionKey());
      EXPECT_EQ(rule.type(), set.skeleton(i).type);
      std::vector<CandidateId> naive;
      for (CandidateId id = 0; id < candidates.size(); ++id) {
        const SpanKey &k = candidates.key(id);
        if (reference::Matches(rule, c.sentences[k.sentence], k.start, k.end)) {
          naive.push_back(id);
        }
      }
      ASSERT_EQ(set.skeleton(i).matches, naive) << rule.ConditionKey();
    }
    EXPECT_EQ(actual, expected);
  }
}

class ApplyRulesTest : public ::testing::Test {
 protected:
  void SetUp() override {
    corpus_ = testing::S1Corpus();
    lexicon_.Add("united state");
    candidates_ = CandidateIndex::Build(corpus_, lexicon_, 5);
    patterns_ = PatternIndex::Build(corpus_, candidates_);
  }

  const WeakLabel *Find(const std::vector<WeakLabel> &labels, SpanKey key) {
    for (const WeakLabel &w : labels) {
      if (w.key == key) return &w;
    }
    return nullptr;
  }

  Corpus corpus_;
  PhraseLexicon lexicon_;
  CandidateIndex candidates_;
  PatternIndex patterns_;
};

TEST_F(ApplyRulesTest, MajorityWins) {
  RuleSet rules = {Simple(P::kTokenString, "united state", "Disease"),
                   Simple(P::kPosTag, "PROPN PROPN", "Disease"),
                   Simple(P::kPreNgram, "the", "Chemical")};
  auto labels = ApplyRules(rules, patterns_, candidates_, {"Disease", "Chemical"});
  const WeakLabel *w = Find(labels, {0, 4, 6});
  ASSERT_NE(w, nullptr);
  EXPECT_EQ(w->label, 0);
  EXPECT_EQ(w->rule_ids, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(w->votes, (std::vector<int>{2, 1}));
}

TEST_F(ApplyRulesTest, TiesAbstainByDefault) {
  RuleSet rules = {Simple(P::kPreNgram, "the", "Chemical"),
                   Simple(P::kTokenString, "united state", "Disease")};
  std::vector<std::string> labels = {"Disease", "Chemical"};
  EXPECT_EQ(Find(ApplyRules(rules, patterns_, candidates_, labels), {0, 4, 6}), nullptr);
  auto first = ApplyRules(rules, patterns_, candidates_, labels, TiePolicy::kFirstByRuleId);
  const WeakLabel *w = Find(first, {0, 4, 6});
  ASSERT_NE(w, nullptr);
  EXPECT_EQ(w->label, 1);
}

TEST_F(ApplyRulesTest, SingleSeedMatch) {
  RuleSet rules = {Simple(P::kTokenString, "einstein", "Person", true)};
  auto labels = ApplyRules(rules, patterns_, candidates_, {"Person"});
  ASSERT_EQ(labels.size(), 1u);
  EXPECT_EQ(labels[0].key, (SpanKey{0, 0, 1}));
  EXPECT_EQ(labels[0].rule_ids, std::vector<int>{0});
}

TEST_F(ApplyRulesTest, SubSpanRuleLabelsNothingButUnitMatches) {
  // "united" alone is not a candidate once merged into the phrase.
  RuleSet rules = {Simple(P::kTokenString, "united", "Location"),
                   Simple(P::kTokenString, "united state", "Location")};
  auto labels = ApplyRules(rules, patterns_, candidates_, {"Location"});
  ASSERT_EQ(labels.size(), 1u);
  EXPECT_EQ(labels[0].key, (SpanKey{0, 4, 6}));
  EXPECT_EQ(labels[0].rule_ids, std::vector<int>{1});
}

TEST_F(ApplyRulesTest, UnknownLabelThrows) {
  RuleSet rules = {Simple(P::kTokenString, "einstein", "Person")};
  EXPECT_THROW(ApplyRules(rules, patterns_, candidates_, {"Other"}), Error);
}

TEST_F(ApplyRulesTest, TableAndIndexAgree) {
  RuleSet rules = {Simple(P::kTokenString, "united state", "Disease"),
                   Pair(P::kDependencyRel, "to", P::kPosTag, "PROPN PROPN", "Disease"),
                   Pair(P::kPreNgram, "to", P::kPostNgram, "in", "Chemical")};
  std::vector<std::string> labels = {"Disease", "Chemical"};
  RuleMatchTable table = MatchRules(rules, patterns_, candidates_);
  auto a = ApplyRules(rules, table, candidates_, labels);
  auto b = ApplyRules(rules, patterns_, candidates_, labels);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].key, b[i].key);
    EXPECT_EQ(a[i].label, b[i].label);
  }
  EXPECT_EQ(table.candidate_count(), candidates_.size());
}

TEST(ApplyRules, MatchesReferenceOnRandomFixtures) {
  Rng rng(29);
  const std::vector<std::string> labels = {"A", "B", "C"};
  for (int trial = 0; trial < 25; ++trial) {
    Corpus c = testing::RandomCorpus(rng, {20, 12, 5, 2});
    PhraseLexicon lexicon = testing::RandomLexicon(rng, c, 3);
    RuleSet rules = testing::RandomRules(rng, c, labels);
    const bool first = trial % 2 == 1;
    CandidateIndex candidates = CandidateIndex::Build(c, lexicon, 5);
    PatternIndex patterns = PatternIndex::Build(c, candidates);
    auto actual = ApplyRules(rules, patterns, candidates, labels,
                             first ? TiePolicy::kFirstByRuleId : TiePolicy::kAbstain);
    std::set<std::string> phrases(lexicon.phrases().begin(), lexicon.phrases().end());
    auto expected = reference::ApplyRules(rules, c, phrases, 5, first);
    ASSERT_EQ(actual.size(), expected.size()) << "trial " << trial;
    for (size_t i = 0; i < actual.size(); ++i) {
      EXPECT_EQ(actual[i].key, (SpanKey{expected[i].sentence, expected[i].start,
                                        expected[i].end}));
      EXPECT_EQ(labels[actual[i].label], expected[i].label);
      EXPECT_EQ(actual[i].rule_ids, expected[i].rule_ids);
    }
  }
}

}  // namespace
}  // namespace ruleboot
