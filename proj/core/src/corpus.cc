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

#include "ruleboot/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "ruleboot/error.h"
#include "text_util.h"

namespace ruleboot {

using json = nlohmann::json;

bool Token::operator==(const Token &other) const {
  return text == other.text && lemma == other.lemma && pos == other.pos &&
         head == other.head && deprel == other.deprel &&
         embedding.size() == other.embedding.size() &&
         embedding == other.embedding;
}

std::string Sentence::Text(Range range) const {
  std::string out;
  for (int i = range.start; i < range.end; ++i) {
    if (i > range.start) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

std::string Sentence::Lemmas(Range range) const {
  std::string out;
  for (int i = range.start; i < range.end; ++i) {
    if (i > range.start) out += ' ';
    out += tokens[i].lemma;
  }
  return out;
}

size_t Corpus::token_count() const {
  size_t n = 0;
  for (const Sentence &s : sentences) n += s.tokens.size();
  return n;
}

bool Corpus::has_gold() const {
  return std::any_of(sentences.begin(), sentences.end(),
                     [](const Sentence &s) { return s.gold.has_value(); });
}

namespace {

Range ParseRange(const json &value) {
  if (value.is_array() && value.size() == 2) {
    return {value[0].get<int>(), value[1].get<int>()};
  }
  if (value.is_object()) {
    return {value.at("start").get<int>(), value.at("end").get<int>()};
  }
  throw Error("range must be [start,end]");
}

Sentence ParseSentence(const json &record, int dim) {
  Sentence sentence;
  sentence.id = record.at("id").get<std::string>();
  const json &tokens = record.at("tokens");
  if (!tokens.is_array()) throw Error("tokens must be an array");
  const int n = static_cast<int>(tokens.size());
  sentence.tokens.reserve(n);
  for (int i = 0; i < n; ++i) {
    const json &t = tokens[i];
    Token token;
    token.text = t.at("text").get<std::string>();
    token.lemma = internal::Lowercase(t.at("lemma").get<std::string>());
    if (token.lemma.empty()) {
      throw Error("empty lemma at token " + std::to_string(i));
    }
    token.pos = t.at("pos").get<std::string>();
    token.head = t.at("head").get<int>();
    if (token.head < -1 || token.head >= n || token.head == i) {
      throw Error("invalid head index " + std::to_string(token.head) +
                  " at token " + std::to_string(i));
    }
    token.deprel = t.value("deprel", std::string());
    const json &emb = t.at("emb");
    if (!emb.is_array() || static_cast<int>(emb.size()) != dim) {
      throw Error("dimension mismatch at token " + std::to_string(i) +
                  ": expected " + std::to_string(dim) + ", got " +
                  std::to_string(emb.is_array() ? emb.size() : 0));
    }
    token.embedding.resize(dim);
    for (int d = 0; d < dim; ++d) token.embedding[d] = emb[d].get<double>();
    sentence.tokens.push_back(std::move(token));
  }

  if (record.contains("noun_chunks")) {
    for (const json &chunk : record["noun_chunks"]) {
      Range r = ParseRange(chunk);
      if (r.start < 0 || r.start >= r.end || r.end > n) {
        throw Error("noun chunk [" + std::to_string(r.start) + "," +
                    std::to_string(r.end) + ") out of range");
      }
      sentence.noun_chunks.push_back(r);
    }
    std::sort(sentence.noun_chunks.begin(), sentence.noun_chunks.end());
    for (size_t i = 1; i < sentence.noun_chunks.size(); ++i) {
      if (sentence.noun_chunks[i - 1].Overlaps(sentence.noun_chunks[i])) {
        throw Error("overlapping noun chunks");
      }
    }
  }

  // Gold ranges are kept verbatim; bounds are a validator concern.
  if (record.contains("entities") && !record["entities"].is_null()) {
    std::vector<LabeledRange> gold;
    for (const json &e : record["entities"]) {
      LabeledRange g;
      if (e.is_array()) {
        g.start = e.at(0).get<int>();
        g.end = e.at(1).get<int>();
        g.label = e.at(2).get<std::string>();
      } else {
        g.start = e.at("start").get<int>();
        g.end = e.at("end").get<int>();
        g.label = e.at("label").get<std::string>();
      }
      gold.push_back(std::move(g));
    }
    sentence.gold = std::move(gold);
  }
  return sentence;
}

}  // namespace

Corpus ReadCorpus(std::istream &in, const std::string &source) {
  Corpus corpus;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception &e) {
      throw ParseError(source, line_no, std::string("malformed line: ") + e.what());
    }
    try {
      if (!have_header) {
        if (record.value("format", std::string()) != kCorpusFormat) {
          throw Error("header must declare format \"" + std::string(kCorpusFormat) + "\"");
        }
        if (record.value("version", 0) != kCorpusVersion) {
          throw Error("unsupported corpus version");
        }
        corpus.dim = record.at("dim").get<int>();
        if (corpus.dim < 1) throw Error("dim must be >= 1");
        have_header = true;
        continue;
      }
      corpus.sentences.push_back(ParseSentence(record, corpus.dim));
    } catch (const json::exception &e) {
      throw ParseError(source, line_no, std::string("malformed line: ") + e.what());
    } catch (const Error &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(source, line_no, "missing header");
  return corpus;
}

Corpus LoadCorpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path);
  return ReadCorpus(in, path);
}

void WriteCorpus(const Corpus &corpus, std::ostream &out) {
  json header = {{"format", kCorpusFormat}, {"version", kCorpusVersion}, {"dim", corpus.dim}};
  out << header.dump() << '\n';
  for (const Sentence &s : corpus.sentences) {
    json record;
    record["id"] = s.id;
    json tokens = json::array();
    for (const Token &t : s.tokens) {
      json emb = json::array();
      for (int d = 0; d < t.embedding.size(); ++d) emb.push_back(t.embedding[d]);
      tokens.push_back({{"text", t.text}, {"lemma", t.lemma}, {"pos", t.pos},
                        {"head", t.head}, {"deprel", t.deprel}, {"emb", std::move(emb)}});
    }
    record["tokens"] = std::move(tokens);
    json chunks = json::array();
    for (const Range &r : s.noun_chunks) chunks.push_back({r.start, r.end});
    record["noun_chunks"] = std::move(chunks);
    if (s.gold) {
      json entities = json::array();
      for (const LabeledRange &g : *s.gold) {
        entities.push_back({{"start", g.start}, {"end", g.end}, {"label", g.label}});
      }
      record["entities"] = std::move(entities);
    }
    out << record.dump() << '\n';
  }
}

void SaveCorpus(const Corpus &corpus, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write corpus " + path);
  WriteCorpus(corpus, out);
}

bool PhraseLexicon::Add(std::string_view phrase) {
  auto parts = internal::SplitWhitespace(internal::Lowercase(phrase));
  if (parts.size() < 2) return false;
  max_tokens_ = std::max(max_tokens_, static_cast<int>(parts.size()));
  phrases_.insert(internal::Join(parts, " "));
  return true;
}

bool PhraseLexicon::Contains(std::string_view phrase) const {
  return phrases_.find(phrase) != phrases_.end();
}

PhraseLexicon ReadPhraseLexicon(std::istream &in, const std::string &source,
                                std::vector<std::string> *warnings) {
  PhraseLexicon lexicon;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string phrase = internal::Trim(line);
    if (phrase.empty()) continue;
    if (!lexicon.Add(phrase) && warnings != nullptr) {
      warnings->push_back(source + ":" + std::to_string(line_no) +
                          ": skipping single-token phrase \"" + phrase + "\"");
    }
  }
  return lexicon;
}

PhraseLexicon LoadPhraseLexicon(const std::string &path,
                                std::vector<std::string> *warnings) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read phrase lexicon " + path);
  return ReadPhraseLexicon(in, path, warnings);
}

RuleSet ReadSeedRules(std::istream &in, const std::string &source) {
  json records;
  try {
    records = json::parse(in);
  } catch (const json::exception &e) {
    throw ParseError(source, 1, std::string("malformed seed file: ") + e.what());
  }
  if (!records.is_array()) throw ParseError(source, 1, "seed file must be a JSON array");
  RuleSet rules;
  for (size_t i = 0; i < records.size(); ++i) {
    const json &r = records[i];
    std::string where = source + " record " + std::to_string(i);
    std::string type, pattern, label;
    try {
      type = r.at("type").get<std::string>();
      pattern = r.at("pattern").get<std::string>();
      label = r.at("label").get<std::string>();
    } catch (const json::exception &e) {
      throw Error(where + ": " + e.what());
    }
    auto predicate = ParsePredicate(type);
    if (!predicate) throw Error(where + ": unknown predicate type \"" + type + "\"");
    if (label.empty()) throw Error(where + ": unknown label \"\"");
    Rule rule;
    // POS tags keep their case; every other pattern is lemma-normalized.
    std::string normalized = *predicate == Predicate::kPosTag
                                 ? internal::Join(internal::SplitWhitespace(pattern), " ")
                                 : internal::Join(internal::SplitWhitespace(internal::Lowercase(pattern)), " ");
    if (normalized.empty()) throw Error(where + ": empty pattern");
    rule.conjuncts.push_back({*predicate, std::move(normalized)});
    rule.label = std::move(label);
    rule.seed = true;
    rule.iteration = 0;
    rules.push_back(std::move(rule));
  }
  return rules;
}

RuleSet LoadSeedRules(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open seed rules " + path);
  return ReadSeedRules(in, path);
}

std::string ValidationReport::Summary() const {
  std::ostringstream out;
  out << (pass ? "PASS" : "FAIL") << ": " << sentences << " sentences, " << tokens
      << " tokens, embedding dims " << (dims_consistent ? "consistent" : "INCONSISTENT")
      << ", gold: ";
  if (!gold_present) {
    out << "absent";
  } else {
    bool first = true;
    for (const auto &[label, count] : gold_per_label) {
      out << (first ? "" : ", ") << label << "=" << count;
      first = false;
    }
    if (gold_per_label.empty()) out << "present (0 entities)";
  }
  out << '\n';
  for (const std::string &v : violations) out << "  " << v << '\n';
  return out.str();
}

ValidationReport ValidateCorpus(const Corpus &corpus) {
  ValidationReport report;
  report.sentences = corpus.sentences.size();
  for (const Sentence &s : corpus.sentences) {
    const int n = s.size();
    report.tokens += n;
    for (int i = 0; i < n; ++i) {
      const Token &t = s.tokens[i];
      if (t.embedding.size() != corpus.dim) {
        report.dims_consistent = false;
        report.violations.push_back(s.id + ": token " + std::to_string(i) +
                                    " has embedding dimension " +
                                    std::to_string(t.embedding.size()));
      } else if (!t.embedding.allFinite()) {
        report.violations.push_back(s.id + ": token " + std::to_string(i) +
                                    " has a non-finite embedding");
      }
      if (t.head < -1 || t.head >= n || t.head == i) {
        report.violations.push_back(s.id + ": token " + std::to_string(i) +
                                    " has invalid head index " + std::to_string(t.head));
      }
      if (t.lemma.empty()) {
        report.violations.push_back(s.id + ": token " + std::to_string(i) + " has empty lemma");
      }
    }
    for (size_t c = 0; c < s.noun_chunks.size(); ++c) {
      const Range &r = s.noun_chunks[c];
      if (r.start < 0 || r.start >= r.end || r.end > n) {
        report.violations.push_back(s.id + ": noun chunk out of range");
      }
      if (c > 0 && s.noun_chunks[c - 1].end > r.start) {
        report.violations.push_back(s.id + ": noun chunks overlap or are unsorted");
      }
    }
    if (s.gold) {
      report.gold_present = true;
      for (const LabeledRange &g : *s.gold) {
        if (g.start < 0 || g.start >= g.end || g.end > n) {
          report.violations.push_back(s.id + ": gold range [" + std::to_string(g.start) +
                                      "," + std::to_string(g.end) + ") outside " +
                                      std::to_string(n) + " tokens");
        } else {
          ++report.gold_per_label[g.label];
        }
      }
    }
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace ruleboot
