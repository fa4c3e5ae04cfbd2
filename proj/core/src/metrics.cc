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

#include "ruleboot/metrics.h"

#include <set>
#include <tuple>

#include "json.hpp"

namespace ruleboot {

namespace {

using Key = std::tuple<std::string, int, int, std::string>;

double SafeRatio(size_t num, size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double F1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

template <typename MakeKey>
Metrics Score(std::span<const EntitySpan> predicted, std::span<const EntitySpan> gold,
              MakeKey make_key, bool per_label) {
  std::set<Key> pred_set, gold_set;
  for (const EntitySpan &e : predicted) {
    if (e.label != kNegLabel) pred_set.insert(make_key(e));
  }
  for (const EntitySpan &e : gold) gold_set.insert(make_key(e));

  Metrics m;
  m.predicted = pred_set.size();
  m.gold = gold_set.size();
  for (const Key &k : pred_set) m.true_positives += gold_set.count(k);
  m.precision = SafeRatio(m.true_positives, m.predicted);
  m.recall = SafeRatio(m.true_positives, m.gold);
  m.f1 = F1(m.precision, m.recall);

  if (per_label) {
    for (const Key &k : pred_set) {
      LabelMetrics &lm = m.per_label[std::get<3>(k)];
      ++lm.predicted;
      lm.true_positives += gold_set.count(k);
    }
    for (const Key &k : gold_set) ++m.per_label[std::get<3>(k)].gold;
    for (auto &[label, lm] : m.per_label) {
      lm.precision = SafeRatio(lm.true_positives, lm.predicted);
      lm.recall = SafeRatio(lm.true_positives, lm.gold);
      lm.f1 = F1(lm.precision, lm.recall);
    }
  }
  return m;
}

}  // namespace

Metrics MicroPrf(std::span<const EntitySpan> predicted, std::span<const EntitySpan> gold) {
  return Score(predicted, gold,
               [](const EntitySpan &e) { return Key{e.sentence, e.start, e.end, e.label}; },
               true);
}

Metrics BoundaryPrf(std::span<const EntitySpan> predicted, std::span<const EntitySpan> gold) {
  return Score(predicted, gold,
               [](const EntitySpan &e) { return Key{e.sentence, e.start, e.end, ""}; }, false);
}

std::string Metrics::ToJson() const {
  nlohmann::json out = {{"precision", precision}, {"recall", recall},   {"f1", f1},
                        {"true_positives", true_positives},
                        {"predicted", predicted}, {"gold", gold}};
  if (!per_label.empty()) {
    nlohmann::json labels = nlohmann::json::object();
    for (const auto &[label, lm] : per_label) {
      labels[label] = {{"precision", lm.precision}, {"recall", lm.recall}, {"f1", lm.f1},
                       {"true_positives", lm.true_positives}, {"predicted", lm.predicted},
                       {"gold", lm.gold}};
    }
    out["per_label"] = std::move(labels);
  }
  return out.dump();
}

}  // namespace ruleboot
