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

#ifndef RULEBOOT_CANDIDATES_H_
#define RULEBOOT_CANDIDATES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ruleboot/corpus.h"
#include "ruleboot/span.h"

namespace ruleboot {

// A contiguous span of one sentence together with the phrase-merged unit it
// belongs to. Outside a lexicon phrase the canonical range is the span itself.
struct SpanCandidate {
  int sentence = 0;
  int start = 0;
  int end = 0;
  int canonical_start = 0;
  int canonical_end = 0;

  SpanKey key() const { return {sentence, start, end}; }
  SpanKey canonical_key() const { return {sentence, canonical_start, canonical_end}; }
  bool is_canonical() const { return start == canonical_start && end == canonical_end; }

  bool operator==(const SpanCandidate &) const = default;
};

// All spans of length 1..max_span_len, sorted by (start, end), each
// canonical to itself.
std::vector<SpanCandidate> EnumerateSpans(int sentence_index, const Sentence &sentence,
                                          int max_span_len);

// Leftmost-longest, non-overlapping lexicon matches over token lemmas. Only
// phrases of at most |max_len| tokens are considered.
std::vector<Range> FindPhrases(const Sentence &sentence, const PhraseLexicon &lexicon,
                               int max_len);

// Returns |spans| with canonical ranges set: every span lying inside a
// phrase match is mapped to the whole phrase.
std::vector<SpanCandidate> MergePhraseSpans(std::span<const SpanCandidate> spans,
                                            const PhraseLexicon &lexicon,
                                            const Sentence &sentence);

// Spans sharing no token with any noun chunk.
std::vector<SpanCandidate> InitialNegativeSpans(int sentence_index, const Sentence &sentence,
                                                int max_span_len);

using CandidateId = uint32_t;

// Corpus-wide view of the entity candidates. Canonical candidates get dense
// ids ordered by (sentence, start, end); all rule matching, prediction and
// scoring is keyed by these ids.
class CandidateIndex {
 public:
  CandidateIndex() = default;

  static CandidateIndex Build(const Corpus &corpus, const PhraseLexicon &lexicon,
                              int max_span_len);

  int max_span_len() const { return max_span_len_; }
  int sentence_count() const { return static_cast<int>(spans_.size()); }

  // Every enumerated span of a sentence, with its canonical range.
  const std::vector<SpanCandidate> &spans(int sentence) const { return spans_[sentence]; }

  // Number of canonical candidates.
  size_t size() const { return canonical_.size(); }
  const SpanKey &key(CandidateId id) const { return canonical_[id]; }
  const std::vector<SpanKey> &keys() const { return canonical_; }

  // Ids of the canonical candidates of one sentence, as [first, last).
  CandidateId sentence_begin(int sentence) const { return offsets_[sentence]; }
  CandidateId sentence_end(int sentence) const { return offsets_[sentence + 1]; }

  // Looks up a canonical candidate by its exact key.
  std::optional<CandidateId> Find(const SpanKey &key) const;

  // Maps any enumerated span to the id of its canonical unit.
  std::optional<CandidateId> CanonicalOf(const SpanKey &span) const;

  // Canonical candidates outside every noun chunk, ascending.
  const std::vector<CandidateId> &negatives() const { return negatives_; }
  bool is_initial_negative(CandidateId id) const { return negative_flag_[id] != 0; }

 private:
  int max_span_len_ = 0;
  std::vector<std::vector<SpanCandidate>> spans_;
  std::vector<SpanKey> canonical_;
  std::vector<CandidateId> offsets_;
  std::vector<CandidateId> negatives_;
  std::vector<uint8_t> negative_flag_;
};

}  // namespace ruleboot

#endif  // RULEBOOT_CANDIDATES_H_
