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

#include "config_json.h"

#include <string>

#include "ruleboot/error.h"

namespace ruleboot::internal {

using json = nlohmann::json;

void RejectUnknownKeys(const json &object, std::initializer_list<const char *> allowed,
                       const char *where) {
  if (!object.is_object()) throw Error(std::string(where) + " must be a JSON object");
  for (const auto &item : object.items()) {
    bool known = false;
    for (const char *key : allowed) known = known || item.key() == key;
    if (!known) throw Error(std::string("unknown ") + where + " key \"" + item.key() + "\"");
  }
}

json HyperToJson(const TaggerHyperParams &hyper) {
  return {
      {"learning_rate", hyper.learning_rate},
      {"momentum", hyper.momentum},
      {"epochs", hyper.epochs},
      {"batch_size", hyper.batch_size},
      {"hidden", hyper.hidden},
      {"init_range", hyper.init_range},
      {"clip_norm", hyper.clip_norm},
      {"negative_ratio", hyper.negative_ratio},
      {"contextualizer",
       hyper.contextualizer == Contextualizer::kBiLstm ? "bilstm" : "identity"},
      {"lstm_hidden", hyper.lstm_hidden},
  };
}

TaggerHyperParams HyperFromJson(const json &value, TaggerHyperParams h) {
  RejectUnknownKeys(value,
                    {"learning_rate", "momentum", "epochs", "batch_size", "hidden", "init_range",
                     "clip_norm", "negative_ratio", "contextualizer", "lstm_hidden"},
                    "tagger");
  try {
    h.learning_rate = value.value("learning_rate", h.learning_rate);
    h.momentum = value.value("momentum", h.momentum);
    h.epochs = value.value("epochs", h.epochs);
    h.batch_size = value.value("batch_size", h.batch_size);
    h.hidden = value.value("hidden", h.hidden);
    h.init_range = value.value("init_range", h.init_range);
    h.clip_norm = value.value("clip_norm", h.clip_norm);
    h.negative_ratio = value.value("negative_ratio", h.negative_ratio);
    h.lstm_hidden = value.value("lstm_hidden", h.lstm_hidden);
    if (value.contains("contextualizer")) {
      const std::string name = value["contextualizer"].get<std::string>();
      if (name == "identity") {
        h.contextualizer = Contextualizer::kIdentity;
      } else if (name == "bilstm") {
        h.contextualizer = Contextualizer::kBiLstm;
      } else {
        throw Error("unknown contextualizer \"" + name + "\"");
      }
    }
  } catch (const json::exception &e) {
    throw Error(std::string("bad tagger config: ") + e.what());
  }
  if (h.learning_rate < 0 || h.momentum < 0 || h.momentum >= 1 || h.epochs < 0 ||
      h.batch_size < 1 || h.hidden < 1 || h.init_range < 0 || h.negative_ratio <= 0 ||
      h.lstm_hidden < 1) {
    throw Error("tagger hyperparameter out of range");
  }
  return h;
}

}  // namespace ruleboot::internal
