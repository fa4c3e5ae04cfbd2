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

#include "ruleboot/candidates.h"

#include <gtest/gtest.h>

#include <set>

#include "ruleboot/error.h"
#include "test_corpus.h"

namespace ruleboot {
namespace {

using testing::MakeSentence;
using testing::S1;

Sentence OfLength(int n) {
  std::vector<testing::TokenSpec> tokens;
  for (int i = 0; i < n; ++i) tokens.push_back({"w" + std::to_string(i), "NOUN", -1});
  return MakeSentence("n", tokens);
}

PhraseLexicon Lexicon(std::initializer_list<const char *> phrases) {
  PhraseLexicon lexicon;
  for (const char *p : phrases) lexicon.Add(p);
  return lexicon;
}

TEST(EnumerateSpans, Counts) {
  EXPECT_EQ(EnumerateSpans(0, OfLength(3), 5).size(), 6u);
  EXPECT_EQ(EnumerateSpans(0, OfLength(1), 5).size(), 1u);
  EXPECT_EQ(EnumerateSpans(0, S1(), 5).size(), 35u);
  EXPECT_TRUE(EnumerateSpans(0, OfLength(0), 5).empty());
  EXPECT_THROW(EnumerateSpans(0, OfLength(3), 0), Error);
}

TEST(EnumerateSpans, MatchesBruteForce) {
  for (int n = 0; n <= 20; ++n) {
    const Sentence s = OfLength(n);
    for (int max_len = 1; max_len <= 6; ++max_len) {
      std::vector<std::pair<int, int>> expected;
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
          if (b - a <= max_len) expected.push_back({a, b});
        }
      }
      std::vector<SpanCandidate> spans = EnumerateSpans(2, s, max_len);
      ASSERT_EQ(spans.size(), expected.size()) << n << " " << max_len;
      for (size_t i = 0; i < spans.size(); ++i) {
        EXPECT_EQ(spans[i].sentence, 2);
        EXPECT_EQ(std::make_pair(spans[i].start, spans[i].end), expected[i]);
        EXPECT_TRUE(spans[i].is_canonical());
      }
    }
  }
}

TEST(MergePhraseSpans, UnitedStates) {
  const Sentence s = S1();
  auto merged = MergePhraseSpans(EnumerateSpans(0, s, 5), Lexicon({"united state"}), s);
  for (const SpanCandidate &c : merged) {
    const bool inside = c.start >= 4 && c.end <= 6;
    if (inside) {
      EXPECT_EQ(c.canonical_start, 4);
      EXPECT_EQ(c.canonical_end, 6);
    } else {
      EXPECT_TRUE(c.is_canonical()) << c.start << "," << c.end;
    }
  }
}

TEST(MergePhraseSpans, IdentityWithoutMatches) {
  const Sentence s = S1();
  for (const PhraseLexicon &lexicon : {PhraseLexicon(), Lexicon({"new york"})}) {
    for (const SpanCandidate &c : MergePhraseSpans(EnumerateSpans(0, s, 5), lexicon, s)) {
      EXPECT_TRUE(c.is_canonical());
    }
  }
}

TEST(MergePhraseSpans, LeftmostLongest) {
  const Sentence s = MakeSentence("x", {{"a", "X"}, {"b", "X"}, {"c", "X"}, {"d", "X"}});
  EXPECT_EQ(FindPhrases(s, Lexicon({"b c", "a b", "a b c"}), 5),
            (std::vector<Range>{{0, 3}}));
  EXPECT_EQ(FindPhrases(s, Lexicon({"b c", "a b"}), 5), (std::vector<Range>{{0, 2}}));
  EXPECT_EQ(FindPhrases(s, Lexicon({"b c", "c d"}), 5), (std::vector<Range>{{1, 3}}));
  // Phrases longer than the span limit are ignored.
  EXPECT_TRUE(FindPhrases(s, Lexicon({"a b c"}), 2).empty());
}

TEST(MergePhraseSpans, Idempotent) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Corpus c = testing::RandomCorpus(rng, {10, 12, 4, 2});
    PhraseLexicon lexicon = testing::RandomLexicon(rng, c, 4);
    for (size_t i = 0; i < c.sentences.size(); ++i) {
      const Sentence &s = c.sentences[i];
      auto once = MergePhraseSpans(EnumerateSpans(i, s, 5), lexicon, s);
      auto twice = MergePhraseSpans(once, lexicon, s);
      ASSERT_EQ(once, twice);
      for (const SpanCandidate &span : once) {
        EXPECT_TRUE((Range{span.canonical_start, span.canonical_end})
                        .Contains({span.start, span.end}));
      }
    }
  }
}

TEST(InitialNegativeSpans, Examples) {
  const Sentence s = S1();
  auto negatives = InitialNegativeSpans(0, s, 5);
  std::set<std::pair<int, int>> keys;
  for (const SpanCandidate &c : negatives) keys.insert({c.start, c.end});
  EXPECT_TRUE(keys.count({1, 3}));
  EXPECT_FALSE(keys.count({2, 4}));
  EXPECT_FALSE(keys.count({0, 1}));

  Sentence covered = OfLength(4);
  covered.noun_chunks = {{0, 2}, {2, 4}};
  EXPECT_TRUE(InitialNegativeSpans(0, covered, 5).empty());
  EXPECT_EQ(InitialNegativeSpans(0, OfLength(4), 5).size(), 10u);
}

TEST(InitialNegativeSpans, NeverOverlapChunks) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    Corpus c = testing::RandomCorpus(rng, {10, 12, 4, 2});
    for (size_t i = 0; i < c.sentences.size(); ++i) {
      const Sentence &s = c.sentences[i];
      auto negatives = InitialNegativeSpans(i, s, 5);
      size_t expected = 0;
      for (const SpanCandidate &span : EnumerateSpans(i, s, 5)) {
        bool overlaps = false;
        for (const Range &chunk : s.noun_chunks) {
          for (int t = span.start; t < span.end; ++t) {
            overlaps = overlaps || (t >= chunk.start && t < chunk.end);
          }
        }
        if (!overlaps) ++expected;
      }
      EXPECT_EQ(negatives.size(), expected);
    }
  }
}

TEST(CandidateIndex, S1WithPhrase) {
  Corpus c = testing::S1Corpus();
  CandidateIndex index = CandidateIndex::Build(c, Lexicon({"united state"}), 5);
  EXPECT_EQ(index.size(), 33u);
  EXPECT_EQ(index.spans(0).size(), 35u);
  auto phrase = index.Find({0, 4, 6});
  ASSERT_TRUE(phrase.has_value());
  EXPECT_EQ(index.CanonicalOf({0, 4, 5}), phrase);
  EXPECT_EQ(index.CanonicalOf({0, 5, 6}), phrase);
  EXPECT_FALSE(index.Find({0, 4, 5}).has_value());
  EXPECT_EQ(index.CanonicalOf({0, 1, 3}), index.Find({0, 1, 3}));
  EXPECT_FALSE(index.CanonicalOf({0, 0, 9}).has_value());
  EXPECT_FALSE(index.Find({3, 0, 1}).has_value());
  EXPECT_TRUE(index.is_initial_negative(*index.Find({0, 1, 3})));
  EXPECT_FALSE(index.is_initial_negative(*phrase));
  EXPECT_EQ(index.sentence_begin(0), 0u);
  EXPECT_EQ(index.sentence_end(0), 33u);
}

TEST(CandidateIndex, KeysSortedAndUnique) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Corpus c = testing::RandomCorpus(rng, {20, 12, 4, 2});
    PhraseLexicon lexicon = testing::RandomLexicon(rng, c, 4);
    CandidateIndex index = CandidateIndex::Build(c, lexicon, 5);
    for (size_t i = 1; i < index.size(); ++i) ASSERT_LT(index.key(i - 1), index.key(i));
    for (CandidateId id : index.negatives()) EXPECT_TRUE(index.is_initial_negative(id));
    for (int s = 0; s < index.sentence_count(); ++s) {
      for (const SpanCandidate &span : index.spans(s)) {
        auto id = index.CanonicalOf(span.key());
        ASSERT_TRUE(id.has_value());
        EXPECT_EQ(index.key(*id), span.canonical_key());
      }
    }
  }
}

}  // namespace
}  // namespace ruleboot
