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

#include <algorithm>

#include "ruleboot/error.h"

namespace ruleboot {

namespace {

bool OverlapsAnyChunk(const Sentence &sentence, Range range) {
  return std::any_of(sentence.noun_chunks.begin(), sentence.noun_chunks.end(),
                     [&](const Range &chunk) { return chunk.Overlaps(range); });
}

}  // namespace

std::vector<SpanCandidate> EnumerateSpans(int sentence_index, const Sentence &sentence,
                                          int max_span_len) {
  if (max_span_len < 1) throw Error("max_span_len must be >= 1");
  std::vector<SpanCandidate> spans;
  const int n = sentence.size();
  for (int start = 0; start < n; ++start) {
    for (int end = start + 1; end <= std::min(n, start + max_span_len); ++end) {
      spans.push_back({sentence_index, start, end, start, end});
    }
  }
  return spans;
}

std::vector<Range> FindPhrases(const Sentence &sentence, const PhraseLexicon &lexicon,
                               int max_len) {
  std::vector<Range> matches;
  if (lexicon.empty()) return matches;
  const int n = sentence.size();
  const int longest = std::min(max_len, lexicon.max_tokens());
  int i = 0;
  while (i < n) {
    int best = 0;
    for (int len = std::min(longest, n - i); len >= 2; --len) {
      if (lexicon.Contains(sentence.Lemmas({i, i + len}))) {
        best = len;
        break;
      }
    }
    if (best > 0) {
      matches.push_back({i, i + best});
      i += best;
    } else {
      ++i;
    }
  }
  return matches;
}

std::vector<SpanCandidate> MergePhraseSpans(std::span<const SpanCandidate> spans,
                                            const PhraseLexicon &lexicon,
                                            const Sentence &sentence) {
  std::vector<SpanCandidate> merged(spans.begin(), spans.end());
  int max_len = 0;
  for (const SpanCandidate &s : merged) max_len = std::max(max_len, s.end - s.start);
  const std::vector<Range> phrases = FindPhrases(sentence, lexicon, max_len);
  for (SpanCandidate &s : merged) {
    s.canonical_start = s.start;
    s.canonical_end = s.end;
    for (const Range &p : phrases) {
      if (p.Contains({s.start, s.end})) {
        s.canonical_start = p.start;
        s.canonical_end = p.end;
        break;
      }
    }
  }
  return merged;
}

std::vector<SpanCandidate> InitialNegativeSpans(int sentence_index, const Sentence &sentence,
                                                int max_span_len) {
  std::vector<SpanCandidate> negatives;
  for (const SpanCandidate &s : EnumerateSpans(sentence_index, sentence, max_span_len)) {
    if (!OverlapsAnyChunk(sentence, {s.start, s.end})) negatives.push_back(s);
  }
  return negatives;
}

CandidateIndex CandidateIndex::Build(const Corpus &corpus, const PhraseLexicon &lexicon,
                                     int max_span_len) {
  CandidateIndex index;
  index.max_span_len_ = max_span_len;
  const int count = static_cast<int>(corpus.sentences.size());
  index.spans_.reserve(count);
  index.offsets_.reserve(count + 1);
  for (int i = 0; i < count; ++i) {
    const Sentence &sentence = corpus.sentences[i];
    index.offsets_.push_back(static_cast<CandidateId>(index.canonical_.size()));
    auto spans = MergePhraseSpans(EnumerateSpans(i, sentence, max_span_len), lexicon, sentence);
    std::vector<SpanKey> canon;
    canon.reserve(spans.size());
    for (const SpanCandidate &s : spans) canon.push_back(s.canonical_key());
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    for (const SpanKey &key : canon) {
      const auto id = static_cast<CandidateId>(index.canonical_.size());
      index.canonical_.push_back(key);
      const bool negative = !OverlapsAnyChunk(sentence, key.range());
      index.negative_flag_.push_back(negative ? 1 : 0);
      if (negative) index.negatives_.push_back(id);
    }
    index.spans_.push_back(std::move(spans));
  }
  index.offsets_.push_back(static_cast<CandidateId>(index.canonical_.size()));
  return index;
}

std::optional<CandidateId> CandidateIndex::Find(const SpanKey &key) const {
  if (key.sentence < 0 || key.sentence >= sentence_count()) return std::nullopt;
  auto first = canonical_.begin() + offsets_[key.sentence];
  auto last = canonical_.begin() + offsets_[key.sentence + 1];
  auto it = std::lower_bound(first, last, key);
  if (it == last || *it != key) return std::nullopt;
  return static_cast<CandidateId>(it - canonical_.begin());
}

std::optional<CandidateId> CandidateIndex::CanonicalOf(const SpanKey &span) const {
  if (span.sentence < 0 || span.sentence >= sentence_count()) return std::nullopt;
  const auto &spans = spans_[span.sentence];
  auto it = std::lower_bound(spans.begin(), spans.end(), span,
                             [](const SpanCandidate &s, const SpanKey &k) {
                               return s.key() < k;
                             });
  if (it == spans.end() || it->key() != span) return std::nullopt;
  return Find(it->canonical_key());
}

}  // namespace ruleboot
