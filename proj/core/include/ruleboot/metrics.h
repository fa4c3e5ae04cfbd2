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

#ifndef RULEBOOT_METRICS_H_
#define RULEBOOT_METRICS_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "ruleboot/entities.h"

namespace ruleboot {

struct LabelMetrics {
  size_t true_positives = 0;
  size_t predicted = 0;
  size_t gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t true_positives = 0;
  size_t predicted = 0;
  size_t gold = 0;
  std::map<std::string, LabelMetrics> per_label;  // empty for boundary metrics

  std::string ToJson() const;
};

// Exact match on (sentence, start, end, label), micro-averaged. NEG
// predictions are ignored; duplicates count once.
Metrics MicroPrf(std::span<const EntitySpan> predicted, std::span<const EntitySpan> gold);

// Exact match on (sentence, start, end), ignoring labels.
Metrics BoundaryPrf(std::span<const EntitySpan> predicted, std::span<const EntitySpan> gold);

}  // namespace ruleboot

#endif  // RULEBOOT_METRICS_H_
