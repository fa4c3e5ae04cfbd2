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

#include "ruleboot/bootstrap.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "config_json.h"
#include "json.hpp"
#include "ruleboot/error.h"
#include "ruleboot/random.h"

namespace ruleboot {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr uint64_t kSelectStream = 0x73656c65;  // "sele"
constexpr uint64_t kTaggerStream = 0x74616767;  // "tagg"

std::string_view TieName(TiePolicy policy) {
  return policy == TiePolicy::kAbstain ? "abstain" : "first_by_rule_id";
}

json MetricsJson(const std::optional<Metrics> &metrics) {
  if (!metrics) return nullptr;
  return json::parse(metrics->ToJson());
}

// Owns the files of a run directory. Every file exists from the start so
// that an aborted run still leaves the full layout behind.
class RunWriter {
 public:
  RunWriter(const RunOutput &output, const BootstrapConfig &config) {
    if (output.directory.empty()) return;
    dir_ = output.directory;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error("cannot create run directory " + dir_.string() + ": " + ec.message());
    fs::remove(dir_ / kAbortFile, ec);
    WriteWhole(kConfigFile, ConfigToJson(config) + "\n");
    json run = {{"train", output.train_path},
                {"dev", output.dev_path},
                {"seeds", output.seeds_path},
                {"phrases", output.phrases_path}};
    WriteWhole(kRunFile, run.dump(2) + "\n");
    WriteWhole(kCheckpointFile, "");
    rules_ = Open(kRulesFile);
    reports_ = Open(kReportsFile);
    predictions_ = Open(kPredictionsFile);
    explanations_ = Open(kExplanationsFile);
  }

  bool enabled() const { return !dir_.empty(); }

  void AppendRules(const RuleSet &rules, size_t from) {
    if (!enabled()) return;
    for (size_t i = from; i < rules.size(); ++i) WriteRuleJsonl(rules[i], rules_);
    rules_.flush();
  }

  void AppendReport(const IterationReport &report) {
    if (!enabled()) return;
    reports_ << report.ToJson() << '\n';
    reports_.flush();
  }

  void SaveCheckpoint(const TaggerParams &params) {
    if (!enabled()) return;
    const fs::path tmp = dir_ / (std::string(kCheckpointFile) + ".tmp");
    params.SaveFile(tmp.string());
    fs::rename(tmp, dir_ / kCheckpointFile);
  }

  void WritePredictions(const std::vector<EntitySpan> &predictions) {
    if (!enabled()) return;
    for (const EntitySpan &e : predictions) WriteEntityJsonl(e, predictions_);
    predictions_.flush();
  }

  void WriteExplanations(const std::vector<Explanation> &explanations) {
    if (!enabled()) return;
    for (const Explanation &e : explanations) WriteExplanationJsonl(e, explanations_);
    explanations_.flush();
  }

  void MarkAborted(int iteration, const std::string &phase, const std::string &message) {
    if (!enabled()) return;
    json marker = {{"iteration", iteration}, {"phase", phase}, {"error", message}};
    std::ofstream out(dir_ / kAbortFile);
    out << marker.dump() << '\n';
  }

 private:
  std::ofstream Open(const char *name) {
    std::ofstream out(dir_ / name, std::ios::trunc);
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    return out;
  }

  void WriteWhole(const char *name, const std::string &text) {
    std::ofstream out = Open(name);
    out << text;
  }

  fs::path dir_;
  std::ofstream rules_;
  std::ofstream reports_;
  std::ofstream predictions_;
  std::ofstream explanations_;
};

std::vector<EntitySpan> RulePredictions(const RuleSet &rules, const IndexedCorpus &indexed,
                                        const std::vector<std::string> &labels,
                                        TiePolicy tie_policy) {
  RuleMatchTable table = MatchRules(rules, indexed.patterns(), indexed.candidates());
  std::vector<WeakLabel> weak =
      ApplyRules(rules, table, indexed.candidates(), labels, tie_policy);
  return DecodeWeakLabels(weak, indexed.corpus(), labels);
}

}  // namespace

uint64_t TaggerSeed(uint64_t seed, int iteration) {
  Rng rng = DeriveRng(seed, kTaggerStream, static_cast<uint64_t>(iteration));
  return rng();
}

void BootstrapConfig::Validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw Error(std::string("config: ") + what);
  };
  require(max_span_len >= 1, "max_span_len must be >= 1");
  require(ngram_max >= 1, "ngram_max must be >= 1");
  require(k0 >= 1, "k0 must be >= 1");
  require(eta >= 0, "eta must be >= 0");
  require(theta >= 0.0 && theta <= 1.0, "theta must be in [0, 1]");
  require(confident_fraction > 0.0 && confident_fraction <= 1.0,
          "confident_fraction must be in (0, 1]");
  require(selection.temperature >= 0.0 && selection.temperature <= 1.0,
          "tau must be in [0, 1]");
  require(selection.global_samples >= 1, "global_samples must be >= 1");
  require(selection.global_sample_size >= 1, "global_sample_size must be >= 1");
  require(selection.max_holdouts >= 1, "max_holdouts must be >= 1");
  require(iterations >= 1, "iterations must be >= 1");
  require(negative_confidence >= 0.0 && negative_confidence <= 1.0,
          "negative_confidence must be in [0, 1]");
}

BootstrapConfig ParseConfig(const std::string &json_text) {
  BootstrapConfig c;
  json value;
  try {
    value = json::parse(json_text);
  } catch (const json::exception &e) {
    throw Error(std::string("config: ") + e.what());
  }
  internal::RejectUnknownKeys(
      value,
      {"max_span_len", "ngram_max", "k0", "eta", "theta", "confident_fraction", "tau",
       "global_samples", "global_sample_size", "max_holdouts", "iterations", "tie_policy",
       "strategy", "tagger", "negative_confidence", "warm_start", "rules_only", "seed"},
      "config");
  try {
    c.max_span_len = value.value("max_span_len", c.max_span_len);
    c.ngram_max = value.value("ngram_max", c.ngram_max);
    c.k0 = value.value("k0", c.k0);
    c.eta = value.value("eta", c.eta);
    c.theta = value.value("theta", c.theta);
    c.confident_fraction = value.value("confident_fraction", c.confident_fraction);
    c.selection.temperature = value.value("tau", c.selection.temperature);
    c.selection.global_samples = value.value("global_samples", c.selection.global_samples);
    c.selection.global_sample_size =
        value.value("global_sample_size", c.selection.global_sample_size);
    c.selection.max_holdouts = value.value("max_holdouts", c.selection.max_holdouts);
    c.iterations = value.value("iterations", c.iterations);
    c.negative_confidence = value.value("negative_confidence", c.negative_confidence);
    c.warm_start = value.value("warm_start", c.warm_start);
    c.rules_only = value.value("rules_only", c.rules_only);
    c.seed = value.value("seed", c.seed);
    if (value.contains("tie_policy")) {
      const std::string name = value["tie_policy"].get<std::string>();
      if (name == "abstain") {
        c.tie_policy = TiePolicy::kAbstain;
      } else if (name == "first_by_rule_id") {
        c.tie_policy = TiePolicy::kFirstByRuleId;
      } else {
        throw Error("config: unknown tie_policy \"" + name + "\"");
      }
    }
    if (value.contains("strategy")) {
      const std::string name = value["strategy"].get<std::string>();
      auto strategy = ParseStrategy(name);
      if (!strategy) throw Error("config: unknown strategy \"" + name + "\"");
      c.strategy = *strategy;
    }
    if (value.contains("tagger")) c.tagger = internal::HyperFromJson(value["tagger"], c.tagger);
  } catch (const json::exception &e) {
    throw Error(std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

BootstrapConfig LoadConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

std::string ConfigToJson(const BootstrapConfig &c) {
  json value = {
      {"max_span_len", c.max_span_len},
      {"ngram_max", c.ngram_max},
      {"k0", c.k0},
      {"eta", c.eta},
      {"theta", c.theta},
      {"confident_fraction", c.confident_fraction},
      {"tau", c.selection.temperature},
      {"global_samples", c.selection.global_samples},
      {"global_sample_size", c.selection.global_sample_size},
      {"max_holdouts", c.selection.max_holdouts},
      {"iterations", c.iterations},
      {"tie_policy", TieName(c.tie_policy)},
      {"strategy", StrategyName(c.strategy)},
      {"tagger", internal::HyperToJson(c.tagger)},
      {"negative_confidence", c.negative_confidence},
      {"warm_start", c.warm_start},
      {"rules_only", c.rules_only},
      {"seed", c.seed},
  };
  return value.dump(2);
}

IndexedCorpus::IndexedCorpus(const Corpus &corpus, const PhraseLexicon &lexicon,
                             int max_span_len, int ngram_max)
    : corpus_(&corpus),
      candidates_(CandidateIndex::Build(corpus, lexicon, max_span_len)),
      patterns_(PatternIndex::Build(corpus, candidates_, ngram_max)) {}

std::string IterationReport::ToJson() const {
  json thresholds_json = json::array();
  for (double t : thresholds) {
    if (std::isnan(t)) {
      thresholds_json.push_back(nullptr);
    } else {
      thresholds_json.push_back(t);
    }
  }
  json value = {
      {"iteration", iteration},
      {"rules_selected", rules_selected},
      {"rules_total", rules_total},
      {"weak_labels", weak_labels},
      {"accepted", accepted},
      {"high_precision", high_precision_sizes},
      {"thresholds", thresholds_json},
      {"members", members},
      {"dev", MetricsJson(dev)},
      {"dev_rules", MetricsJson(dev_rules)},
      {"wall_seconds", wall_seconds},
  };
  return value.dump();
}

RunArtifacts Bootstrap(const BootstrapConfig &config, const Corpus &train, const Corpus *dev,
                       const RuleSet &seeds, const PhraseLexicon &lexicon,
                       const RunOutput &output) {
  config.Validate();
  if (seeds.empty()) throw Error("setup: no seed rules");

  RunWriter writer(output, config);
  RunArtifacts artifacts;
  artifacts.labels = LabelsOf(seeds);
  const std::vector<std::string> &labels = artifacts.labels;
  const int label_count = static_cast<int>(labels.size());

  int iteration = 0;
  std::string phase = "setup";
  try {
    artifacts.rules = seeds;
    for (Rule &rule : artifacts.rules) {
      rule.seed = true;
      rule.iteration = 0;
    }
    writer.AppendRules(artifacts.rules, 0);

    phase = "index";
    IndexedCorpus indexed(train, lexicon, config.max_span_len, config.ngram_max);
    const CandidateIndex &candidates = indexed.candidates();
    std::unique_ptr<IndexedCorpus> dev_indexed;
    const bool dev_gold = dev != nullptr && dev->has_gold();
    if (dev_gold) {
      dev_indexed = std::make_unique<IndexedCorpus>(*dev, lexicon, config.max_span_len,
                                                    config.ngram_max);
    }
    const std::vector<EntitySpan> dev_gold_spans =
        dev_gold ? GoldEntities(*dev) : std::vector<EntitySpan>();
    RuleCandidateSet rule_candidates = RuleCandidateSet::Build(indexed.patterns(), candidates);

    std::unordered_set<std::string> known_conditions;
    for (const Rule &rule : artifacts.rules) known_conditions.insert(rule.ConditionKey());

    HighPrecisionSet high_precision(labels);
    std::vector<uint8_t> predicted_negative(candidates.size(), 0);
    TaggerParams params;
    double best_f1 = -1.0;

    for (iteration = 1; iteration <= config.iterations; ++iteration) {
      const auto started = std::chrono::steady_clock::now();
      IterationReport report;
      report.iteration = iteration;

      phase = "apply";
      RuleMatchTable table = MatchRules(artifacts.rules, indexed.patterns(), candidates);
      std::vector<WeakLabel> weak =
          ApplyRules(artifacts.rules, table, candidates, labels, config.tie_policy);
      report.weak_labels = weak.size();

      phase = "select";
      SelectionOutcome outcome;
      if (iteration == 1) {
        outcome = SeedHighPrecisionSet(weak, train, high_precision, 0);
      } else {
        Rng rng = DeriveRng(config.seed, kSelectStream, static_cast<uint64_t>(iteration));
        outcome = SelectLabels(weak, train, high_precision, config.selection, iteration, rng);
      }
      report.accepted = outcome.accepted.size();
      report.thresholds = outcome.thresholds;
      report.thresholds.resize(label_count, std::nan(""));
      for (int c = 0; c < label_count; ++c) {
        report.high_precision_sizes.push_back(high_precision.size(c));
      }

      phase = "train";
      TrainingSet training;
      for (int c = 0; c < label_count; ++c) {
        for (const SpanKey &key : high_precision.keys(c)) training.positives.push_back({key, c});
      }
      for (CandidateId id = 0; id < candidates.size(); ++id) {
        if (!candidates.is_initial_negative(id) && predicted_negative[id] == 0) continue;
        const SpanKey &key = candidates.key(id);
        if (!high_precision.Contains(key)) training.negative_pool.push_back(key);
      }
      if (config.warm_start && iteration > 1) {
        params = TrainTagger(train, training, std::move(params));
      } else {
        params = TrainTagger(train, training, labels, config.tagger,
                             TaggerSeed(config.seed, iteration));
      }

      phase = "predict";
      std::vector<SpanPrediction> predictions = PredictCorpus(params, train, candidates);
      const int neg = params.neg_class();
      for (const SpanPrediction &p : predictions) {
        predicted_negative[p.candidate] =
            p.label == neg && p.confidence > config.negative_confidence ? 1 : 0;
      }

      phase = "rules";
      std::vector<std::vector<CandidateId>> confident =
          TopConfident(predictions, config.confident_fraction, label_count);
      for (const auto &members : confident) report.members.push_back(members.size());
      CategoryMembers members(candidates.size(), confident);
      std::vector<ScoredRule> scored =
          ScoreRuleCandidates(rule_candidates, members, config.theta);
      const int k = KSchedule(config.k0, config.eta, iteration);
      RuleSet learned = SelectNewRules(std::move(scored), config.strategy, k, config.theta,
                                       known_conditions, labels, iteration);
      const size_t first_new = artifacts.rules.size();
      for (Rule &rule : learned) {
        known_conditions.insert(rule.ConditionKey());
        artifacts.rules.push_back(std::move(rule));
      }
      writer.AppendRules(artifacts.rules, first_new);
      report.rules_selected = artifacts.rules.size() - first_new;
      report.rules_total = artifacts.rules.size();

      phase = "evaluate";
      bool improved = !dev_gold;
      if (dev_gold) {
        std::vector<SpanPrediction> dev_predictions =
            PredictCorpus(params, *dev, dev_indexed->candidates());
        report.dev = MicroPrf(DecodePredictions(dev_predictions, *dev, labels), dev_gold_spans);
        report.dev_rules = MicroPrf(
            RulePredictions(artifacts.rules, *dev_indexed, labels, config.tie_policy),
            dev_gold_spans);
        improved = report.dev->f1 > best_f1;
        if (improved) best_f1 = report.dev->f1;
      }
      if (improved) {
        artifacts.best_iteration = iteration;
        artifacts.best_params = params;
        artifacts.predictions = DecodePredictions(predictions, train, labels);
        writer.SaveCheckpoint(params);
      }

      report.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      writer.AppendReport(report);
      artifacts.reports.push_back(std::move(report));
    }
    iteration = config.iterations;

    phase = "export";
    if (config.rules_only) {
      artifacts.predictions =
          RulePredictions(artifacts.rules, indexed, labels, config.tie_policy);
    }
    writer.WritePredictions(artifacts.predictions);
    RuleMatchTable table = MatchRules(artifacts.rules, indexed.patterns(), candidates);
    artifacts.explanations =
        Explain(artifacts.predictions, train, candidates, artifacts.rules, table);
    writer.WriteExplanations(artifacts.explanations);
  } catch (const std::exception &e) {
    const std::string message = e.what();
    writer.MarkAborted(iteration, phase, message);
    throw Error("iteration " + std::to_string(iteration) + ", phase " + phase + ": " + message);
  }
  return artifacts;
}

std::vector<Explanation> ExplainRun(const std::string &run_directory) {
  const fs::path dir(run_directory);
  json run;
  {
    std::ifstream in(dir / kRunFile);
    if (!in) throw Error("cannot open " + (dir / kRunFile).string());
    try {
      run = json::parse(in);
    } catch (const json::exception &e) {
      throw Error((dir / kRunFile).string() + ": " + e.what());
    }
  }
  const BootstrapConfig config = LoadConfig((dir / kConfigFile).string());
  const std::string train_path = run.value("train", std::string());
  if (train_path.empty()) throw Error("run.json does not name a training corpus");
  const std::string phrases_path = run.value("phrases", std::string());

  Corpus train = LoadCorpus(train_path);
  PhraseLexicon lexicon;
  if (!phrases_path.empty()) lexicon = LoadPhraseLexicon(phrases_path);
  RuleSet rules = LoadRulesJsonl((dir / kRulesFile).string());
  std::vector<EntitySpan> predictions = LoadEntitiesJsonl((dir / kPredictionsFile).string());

  IndexedCorpus indexed(train, lexicon, config.max_span_len, config.ngram_max);
  RuleMatchTable table = MatchRules(rules, indexed.patterns(), indexed.candidates());
  return Explain(predictions, train, indexed.candidates(), rules, table);
}

}  // namespace ruleboot
