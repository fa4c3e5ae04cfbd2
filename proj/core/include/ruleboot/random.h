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

#ifndef RULEBOOT_RANDOM_H_
#define RULEBOOT_RANDOM_H_

#include <cstdint>
#include <random>

namespace ruleboot {

// Every stochastic step takes an explicit generator so that a run is fully
// determined by its seed.
using Rng = std::mt19937_64;

// Derives an independent stream for a (seed, purpose, index) triple.
inline Rng DeriveRng(uint64_t seed, uint64_t purpose, uint64_t index = 0) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(purpose), static_cast<uint32_t>(index),
                    static_cast<uint32_t>(index >> 32)};
  return Rng(seq);
}

}  // namespace ruleboot

#endif  // RULEBOOT_RANDOM_H_
