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

#ifndef RULEBOOT_SRC_CONFIG_JSON_H_
#define RULEBOOT_SRC_CONFIG_JSON_H_

#include "json.hpp"
#include "ruleboot/tagger.h"

namespace ruleboot::internal {

nlohmann::json HyperToJson(const TaggerHyperParams &hyper);

// Missing keys keep their defaults; unknown keys throw Error.
TaggerHyperParams HyperFromJson(const nlohmann::json &value,
                                TaggerHyperParams defaults = TaggerHyperParams());

// Throws Error naming the first key of |object| not in |allowed|.
void RejectUnknownKeys(const nlohmann::json &object, std::initializer_list<const char *> allowed,
                       const char *where);

}  // namespace ruleboot::internal

#endif  // RULEBOOT_SRC_CONFIG_JSON_H_
