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

#include "ruleboot/rule.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "ruleboot/error.h"

namespace ruleboot {

using json = nlohmann::json;

namespace {

constexpr std::string_view kPredicateNames[] = {
    "TokenString", "PreNgram", "PostNgram", "POSTag", "DependencyRel"};

// Position of a predicate inside a canonical conjunction.
int ConjunctRank(Predicate p) {
  switch (p) {
    case Predicate::kTokenString: return 0;
    case Predicate::kPreNgram: return 1;
    case Predicate::kDependencyRel: return 1;
    case Predicate::kPosTag: return 2;
    case Predicate::kPostNgram: return 3;
  }
  return 4;
}

}  // namespace

std::string_view PredicateName(Predicate predicate) {
  return kPredicateNames[static_cast<int>(predicate)];
}

std::optional<Predicate> ParsePredicate(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kPredicateNames[i] == name) return static_cast<Predicate>(i);
  }
  return std::nullopt;
}

std::string SimplePattern::Render() const {
  std::string out(PredicateName(predicate));
  out += '=';
  out += pattern;
  return out;
}

std::string_view RuleTypeName(RuleType type) {
  switch (type) {
    case RuleType::kTokenString: return "TokenString";
    case RuleType::kPreNgramPostNgram: return "PreNgram&PostNgram";
    case RuleType::kPreNgramPosTag: return "PreNgram&POSTag";
    case RuleType::kPosTagPostNgram: return "POSTag&PostNgram";
    case RuleType::kDependencyRelPosTag: return "DependencyRel&POSTag";
    case RuleType::kOtherSimple: return "Simple";
  }
  return "?";
}

std::optional<RuleType> ClassifyConjuncts(
    const std::vector<SimplePattern> &conjuncts) {
  if (conjuncts.size() == 1) {
    return conjuncts[0].predicate == Predicate::kTokenString
               ? RuleType::kTokenString
               : RuleType::kOtherSimple;
  }
  if (conjuncts.size() != 2) return std::nullopt;
  const Predicate a = conjuncts[0].predicate;
  const Predicate b = conjuncts[1].predicate;
  using P = Predicate;
  if (a == P::kPreNgram && b == P::kPostNgram) return RuleType::kPreNgramPostNgram;
  if (a == P::kPreNgram && b == P::kPosTag) return RuleType::kPreNgramPosTag;
  if (a == P::kPosTag && b == P::kPostNgram) return RuleType::kPosTagPostNgram;
  if (a == P::kDependencyRel && b == P::kPosTag) return RuleType::kDependencyRelPosTag;
  return std::nullopt;
}

std::vector<SimplePattern> CanonicalConjuncts(
    std::vector<SimplePattern> conjuncts) {
  std::stable_sort(conjuncts.begin(), conjuncts.end(),
                   [](const SimplePattern &x, const SimplePattern &y) {
                     return ConjunctRank(x.predicate) < ConjunctRank(y.predicate);
                   });
  if (!ClassifyConjuncts(conjuncts)) {
    std::string what = "unsupported conjunction:";
    for (const auto &c : conjuncts) what += " " + std::string(PredicateName(c.predicate));
    throw Error(what);
  }
  return conjuncts;
}

RuleType Rule::type() const {
  auto type = ClassifyConjuncts(conjuncts);
  if (!type) throw Error("rule has an unsupported conjunction: " + ConditionKey());
  return *type;
}

std::string Rule::ConditionKey() const {
  std::string key;
  for (size_t i = 0; i < conjuncts.size(); ++i) {
    if (i > 0) key += " & ";
    key += conjuncts[i].Render();
  }
  return key;
}

std::string Rule::Render() const {
  std::string out;
  for (size_t i = 0; i < conjuncts.size(); ++i) {
    if (i > 0) out += " ∧ ";
    out += conjuncts[i].Render();
  }
  out += " → ";
  out += label;
  if (seed) out += " (seed)";
  return out;
}

std::vector<std::string> LabelsOf(const RuleSet &rules) {
  std::vector<std::string> labels;
  for (const Rule &rule : rules) {
    if (std::find(labels.begin(), labels.end(), rule.label) == labels.end()) {
      labels.push_back(rule.label);
    }
  }
  return labels;
}

void WriteRuleJsonl(const Rule &rule, std::ostream &out) {
  json record;
  record["iteration"] = rule.iteration;
  record["label"] = rule.label;
  json conjuncts = json::array();
  for (const SimplePattern &c : rule.conjuncts) {
    conjuncts.push_back({{"type", PredicateName(c.predicate)}, {"pattern", c.pattern}});
  }
  record["conjuncts"] = std::move(conjuncts);
  if (rule.stats) {
    record["score"] = rule.stats->score;
    record["precision"] = rule.stats->precision;
    record["matches"] = rule.stats->members;
  } else {
    record["score"] = nullptr;
    record["precision"] = nullptr;
    record["matches"] = nullptr;
  }
  if (rule.seed) record["seed"] = true;
  out << record.dump() << '\n';
}

RuleSet ReadRulesJsonl(std::istream &in, const std::string &source) {
  RuleSet rules;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json record = json::parse(line);
      Rule rule;
      rule.iteration = record.at("iteration").get<int>();
      rule.label = record.at("label").get<std::string>();
      rule.seed = record.value("seed", false);
      for (const json &c : record.at("conjuncts")) {
        auto predicate = ParsePredicate(c.at("type").get<std::string>());
        if (!predicate) throw Error("unknown predicate type");
        rule.conjuncts.push_back({*predicate, c.at("pattern").get<std::string>()});
      }
      if (rule.conjuncts.empty()) throw Error("rule without conjuncts");
      rule.conjuncts = CanonicalConjuncts(std::move(rule.conjuncts));
      if (record.contains("score") && !record["score"].is_null()) {
        RuleStats stats;
        stats.score = record["score"].get<double>();
        stats.precision = record.value("precision", 0.0);
        stats.members = record.value("matches", int64_t{0});
        rule.stats = stats;
      }
      rules.push_back(std::move(rule));
    } catch (const json::exception &e) {
      throw ParseError(source, line_no, e.what());
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return rules;
}

RuleSet LoadRulesJsonl(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open rules file " + path);
  return ReadRulesJsonl(in, path);
}

}  // namespace ruleboot
