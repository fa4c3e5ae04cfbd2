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

#ifndef RULEBOOT_SPAN_H_
#define RULEBOOT_SPAN_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace ruleboot {

// Half-open token range [start, end).
struct Range {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool Contains(const Range &other) const {
    return start <= other.start && other.end <= end;
  }
  bool Overlaps(const Range &other) const {
    return start < other.end && other.start < end;
  }

  auto operator<=>(const Range &) const = default;
};

// Identifies a span in a corpus by sentence position and token range.
struct SpanKey {
  int sentence = 0;
  int start = 0;
  int end = 0;

  Range range() const { return {start, end}; }

  auto operator<=>(const SpanKey &) const = default;
};

struct SpanKeyHash {
  size_t operator()(const SpanKey &key) const {
    uint64_t h = static_cast<uint64_t>(key.sentence) * 0x9E3779B97F4A7C15ull;
    h ^= (static_cast<uint64_t>(key.start) << 32) | static_cast<uint32_t>(key.end);
    h *= 0xBF58476D1CE4E5B9ull;
    return static_cast<size_t>(h ^ (h >> 31));
  }
};

}  // namespace ruleboot

#endif  // RULEBOOT_SPAN_H_
