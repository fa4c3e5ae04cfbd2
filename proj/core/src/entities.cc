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

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "ruleboot/error.h"

namespace ruleboot {

using json = nlohmann::json;

void WriteEntityJsonl(const EntitySpan &entity, std::ostream &out) {
  json record = {{"sentence", entity.sentence},
                 {"start", entity.start},
                 {"end", entity.end},
                 {"label", entity.label},
                 {"confidence", entity.confidence}};
  out << record.dump() << '\n';
}

std::vector<EntitySpan> ReadEntitiesJsonl(std::istream &in, const std::string &source) {
  std::vector<EntitySpan> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json record = json::parse(line);
      EntitySpan e;
      e.sentence = record.at("sentence").get<std::string>();
      e.start = record.at("start").get<int>();
      e.end = record.at("end").get<int>();
      e.label = record.at("label").get<std::string>();
      e.confidence = record.value("confidence", 1.0);
      out.push_back(std::move(e));
    } catch (const json::exception &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return out;
}

std::vector<EntitySpan> LoadEntitiesJsonl(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open predictions " + path);
  return ReadEntitiesJsonl(in, path);
}

std::vector<EntitySpan> GoldEntities(const Corpus &corpus) {
  std::vector<EntitySpan> out;
  for (const Sentence &s : corpus.sentences) {
    if (!s.gold) continue;
    for (const LabeledRange &g : *s.gold) out.push_back({s.id, g.start, g.end, g.label, 1.0});
  }
  return out;
}

std::vector<ScoredSpan> DecodeNonOverlapping(std::vector<ScoredSpan> spans) {
  std::sort(spans.begin(), spans.end(), [](const ScoredSpan &a, const ScoredSpan &b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    const int la = a.key.end - a.key.start;
    const int lb = b.key.end - b.key.start;
    if (la != lb) return la > lb;
    return a.key < b.key;
  });
  std::vector<ScoredSpan> kept;
  for (const ScoredSpan &s : spans) {
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](const ScoredSpan &k) {
      return k.key.sentence == s.key.sentence && k.key.range().Overlaps(s.key.range());
    });
    if (!clash) kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end(),
            [](const ScoredSpan &a, const ScoredSpan &b) { return a.key < b.key; });
  return kept;
}

namespace {

// Decoding is independent per sentence, which keeps the overlap scan short.
std::vector<EntitySpan> DecodeBySentence(std::vector<ScoredSpan> spans, const Corpus &corpus,
                                         const std::vector<std::string> &labels) {
  std::sort(spans.begin(), spans.end(),
            [](const ScoredSpan &a, const ScoredSpan &b) { return a.key < b.key; });
  std::vector<EntitySpan> out;
  size_t i = 0;
  while (i < spans.size()) {
    size_t j = i;
    while (j < spans.size() && spans[j].key.sentence == spans[i].key.sentence) ++j;
    std::vector<ScoredSpan> group(spans.begin() + i, spans.begin() + j);
    for (const ScoredSpan &s : DecodeNonOverlapping(std::move(group))) {
      out.push_back({corpus.sentences[s.key.sentence].id, s.key.start, s.key.end,
                     labels.at(s.label), s.confidence});
    }
    i = j;
  }
  return out;
}

}  // namespace

std::vector<EntitySpan> DecodePredictions(std::span<const SpanPrediction> predictions,
                                          const Corpus &corpus,
                                          const std::vector<std::string> &labels) {
  std::vector<ScoredSpan> spans;
  for (const SpanPrediction &p : predictions) {
    if (p.label < static_cast<int>(labels.size())) spans.push_back({p.key, p.label, p.confidence});
  }
  return DecodeBySentence(std::move(spans), corpus, labels);
}

std::vector<EntitySpan> DecodeWeakLabels(const std::vector<WeakLabel> &weak_labels,
                                         const Corpus &corpus,
                                         const std::vector<std::string> &labels) {
  std::vector<ScoredSpan> spans;
  for (const WeakLabel &w : weak_labels) {
    int total = 0;
    for (int v : w.votes) total += v;
    const double share = total > 0 ? static_cast<double>(w.votes[w.label]) / total : 0.0;
    spans.push_back({w.key, w.label, share});
  }
  return DecodeBySentence(std::move(spans), corpus, labels);
}

}  // namespace ruleboot
