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

#ifndef RULEBOOT_CORPUS_H_
#define RULEBOOT_CORPUS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ruleboot/rule.h"
#include "ruleboot/span.h"

namespace ruleboot {

inline constexpr std::string_view kCorpusFormat = "tallor-corpus";
inline constexpr int kCorpusVersion = 1;

struct Token {
  std::string text;
  std::string lemma;  // case-folded
  std::string pos;    // universal POS tag
  int head = -1;      // governor index within the sentence, -1 for root
  std::string deprel;
  Eigen::VectorXd embedding;

  bool operator==(const Token &other) const;
};

struct LabeledRange {
  int start = 0;
  int end = 0;
  std::string label;

  Range range() const { return {start, end}; }
  bool operator==(const LabeledRange &) const = default;
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;
  std::vector<Range> noun_chunks;  // sorted, non-overlapping
  std::optional<std::vector<LabeledRange>> gold;

  int size() const { return static_cast<int>(tokens.size()); }

  // Space-joined surface text / lemmas of a token range.
  std::string Text(Range range) const;
  std::string Text() const { return Text({0, size()}); }
  std::string Lemmas(Range range) const;

  bool operator==(const Sentence &) const = default;
};

// Immutable once loaded; safe to share between readers.
struct Corpus {
  int dim = 0;
  std::vector<Sentence> sentences;

  size_t token_count() const;
  bool has_gold() const;

  bool operator==(const Corpus &) const = default;
};

// Reads the JSON Lines corpus format. Line 1 is the header
// {"format":"tallor-corpus","version":1,"dim":D}; every further non-empty
// line is one sentence. Throws ParseError naming the offending line.
Corpus ReadCorpus(std::istream &in, const std::string &source = "<corpus>");
Corpus LoadCorpus(const std::string &path);

void WriteCorpus(const Corpus &corpus, std::ostream &out);
void SaveCorpus(const Corpus &corpus, const std::string &path);

// Lower-cased, lemmatized multi-token phrases, space-joined.
class PhraseLexicon {
 public:
  PhraseLexicon() = default;

  // Returns false (and does not insert) for single-token phrases.
  bool Add(std::string_view phrase);

  bool Contains(std::string_view phrase) const;
  size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }
  int max_tokens() const { return max_tokens_; }
  const std::set<std::string, std::less<>> &phrases() const { return phrases_; }

 private:
  std::set<std::string, std::less<>> phrases_;
  int max_tokens_ = 0;
};

// One phrase per line. Single-token lines are skipped and reported through
// |warnings| when it is non-null.
PhraseLexicon ReadPhraseLexicon(std::istream &in, const std::string &source,
                                std::vector<std::string> *warnings = nullptr);
PhraseLexicon LoadPhraseLexicon(const std::string &path,
                                std::vector<std::string> *warnings = nullptr);

// JSON array of {"type":..., "pattern":..., "label":...}. Every record
// becomes a single-conjunct seed rule at iteration 0.
RuleSet ReadSeedRules(std::istream &in, const std::string &source);
RuleSet LoadSeedRules(const std::string &path);

struct ValidationReport {
  bool pass = true;
  size_t sentences = 0;
  size_t tokens = 0;
  bool gold_present = false;
  bool dims_consistent = true;
  std::map<std::string, size_t> gold_per_label;
  std::vector<std::string> violations;

  std::string Summary() const;
};

// Diagnostic pass over an already loaded corpus; never throws.
ValidationReport ValidateCorpus(const Corpus &corpus);

}  // namespace ruleboot

#endif  // RULEBOOT_CORPUS_H_
