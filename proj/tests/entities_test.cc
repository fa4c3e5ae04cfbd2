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

#include "ruleboot/entities.h"

#include <gtest/gtest.h>

#include <sstream>

#include "ruleboot/error.h"
#include "test_corpus.h"

namespace ruleboot {
namespace {

TEST(DecodeNonOverlapping, GreedyByConfidence) {
  std::vector<ScoredSpan> spans = {
      {{0, 0, 2}, 0, 0.6}, {{0, 1, 3}, 1, 0.9}, {{0, 3, 4}, 0, 0.5}, {{1, 0, 1}, 0, 0.1}};
  std::vector<ScoredSpan> kept = DecodeNonOverlapping(spans);
  ASSERT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept[0].key, (SpanKey{0, 1, 3}));
  EXPECT_EQ(kept[1].key, (SpanKey{0, 3, 4}));
  EXPECT_EQ(kept[2].key, (SpanKey{1, 0, 1}));
}

TEST(DecodeNonOverlapping, LongerWinsTies) {
  std::vector<ScoredSpan> kept =
      DecodeNonOverlapping({{{0, 0, 1}, 0, 0.7}, {{0, 0, 2}, 0, 0.7}, {{0, 1, 2}, 0, 0.7}});
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].key, (SpanKey{0, 0, 2}));
}

TEST(DecodeNonOverlapping, OutputNeverOverlaps) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ScoredSpan> spans;
    for (int i = 0; i < 30; ++i) {
      const int start = static_cast<int>(rng() % 10);
      spans.push_back({{static_cast<int>(rng() % 2), start, start + 1 + static_cast<int>(rng() % 3)},
                       0, static_cast<double>(rng() % 100) / 100.0});
    }
    std::vector<ScoredSpan> kept = DecodeNonOverlapping(spans);
    for (size_t i = 0; i < kept.size(); ++i) {
      if (i > 0) EXPECT_LT(kept[i - 1].key, kept[i].key);
      for (size_t j = i + 1; j < kept.size(); ++j) {
        EXPECT_FALSE(kept[i].key.sentence == kept[j].key.sentence &&
                     kept[i].key.range().Overlaps(kept[j].key.range()));
      }
    }
    // Every dropped span overlaps a kept span at least as confident.
    for (const ScoredSpan &s : spans) {
      bool covered = false;
      for (const ScoredSpan &k : kept) {
        covered |= k.key.sentence == s.key.sentence && k.key.range().Overlaps(s.key.range()) &&
                   k.confidence >= s.confidence;
      }
      EXPECT_TRUE(covered);
    }
  }
}

TEST(DecodePredictions, SkipsNeg) {
  Corpus corpus = testing::S1Corpus();
  SpanPrediction person, neg;
  person.key = {0, 0, 1};
  person.label = 0;
  person.confidence = 0.8;
  neg.key = {0, 4, 6};
  neg.label = 2;
  neg.confidence = 0.99;
  std::vector<SpanPrediction> predictions = {person, neg};
  std::vector<EntitySpan> out = DecodePredictions(predictions, corpus, {"Person", "Location"});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].sentence, "S1");
  EXPECT_EQ(out[0].label, "Person");
  EXPECT_EQ(out[0].confidence, 0.8);
}

TEST(DecodeWeakLabels, VoteShare) {
  Corpus corpus = testing::S1Corpus();
  WeakLabel w;
  w.key = {0, 4, 6};
  w.label = 1;
  w.votes = {1, 3};
  std::vector<EntitySpan> out = DecodeWeakLabels({w}, corpus, {"Person", "Location"});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].label, "Location");
  EXPECT_EQ(out[0].confidence, 0.75);
}

TEST(EntityJsonl, Format) {
  std::ostringstream out;
  WriteEntityJsonl({"s1", 4, 6, "Location", 0.5}, out);
  EXPECT_EQ(out.str(),
            "{\"confidence\":0.5,\"end\":6,\"label\":\"Location\",\"sentence\":\"s1\",\"start\":4}\n");
}

TEST(EntityJsonl, RoundTrip) {
  std::vector<EntitySpan> in = {{"a", 0, 2, "X", 0.25}, {"b", 3, 4, "Y", 1.0}};
  std::stringstream buffer;
  for (const EntitySpan &e : in) WriteEntityJsonl(e, buffer);
  std::vector<EntitySpan> out = ReadEntitiesJsonl(buffer, "mem");
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].sentence, "b");
  EXPECT_EQ(out[0].confidence, 0.25);
  EXPECT_EQ(out[0].end, 2);
}

TEST(EntityJsonl, BadLineNamed) {
  std::istringstream in("{\"sentence\":\"a\",\"start\":0,\"end\":1,\"label\":\"X\"}\n{\"start\":1}\n");
  try {
    ReadEntitiesJsonl(in, "pred.jsonl");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(GoldEntities, FromCorpus) {
  Corpus corpus = testing::S1Corpus();
  corpus.sentences[0].gold = std::vector<LabeledRange>{{0, 1, "Person"}, {4, 6, "Location"}};
  std::vector<EntitySpan> gold = GoldEntities(corpus);
  ASSERT_EQ(gold.size(), 2u);
  EXPECT_EQ(gold[1].label, "Location");
  EXPECT_EQ(gold[1].start, 4);
}

}  // namespace
}  // namespace ruleboot
