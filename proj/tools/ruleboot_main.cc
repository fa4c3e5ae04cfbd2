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

// Command-line front end: run, apply-rules, eval, explain, validate.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ruleboot/bootstrap.h"
#include "ruleboot/corpus.h"
#include "ruleboot/entities.h"
#include "ruleboot/error.h"
#include "ruleboot/metrics.h"
#include "ruleboot/rules.h"

namespace {

using namespace ruleboot;

// Errors from a named phase, reported as "<phase>: <message>".
class PhaseError : public std::runtime_error {
 public:
  PhaseError(const std::string &phase, const std::string &what)
      : std::runtime_error(phase + ": " + what) {}
};

template <typename F>
auto InPhase(const std::string &phase, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const PhaseError &) {
    throw;
  } catch (const std::exception &e) {
    throw PhaseError(phase, e.what());
  }
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw PhaseError("write", "cannot open " + path);
  return out;
}

struct RunOptions {
  std::string train, dev, seeds, phrases, config, out;
  bool rules_only = false;
  std::optional<uint64_t> seed;
  std::optional<int> iterations;
};

int Run(const RunOptions &opt) {
  BootstrapConfig config = InPhase("config", [&] {
    return opt.config.empty() ? BootstrapConfig() : LoadConfig(opt.config);
  });
  if (opt.rules_only) config.rules_only = true;
  if (opt.seed) config.seed = *opt.seed;
  if (opt.iterations) config.iterations = *opt.iterations;
  InPhase("config", [&] { config.Validate(); });

  Corpus train = InPhase("load", [&] { return LoadCorpus(opt.train); });
  InPhase("validate", [&] {
    ValidationReport report = ValidateCorpus(train);
    if (!report.pass) throw ruleboot::Error(opt.train + " failed validation: " + report.Summary());
  });
  std::unique_ptr<Corpus> dev;
  if (!opt.dev.empty()) {
    dev = std::make_unique<Corpus>(InPhase("load", [&] { return LoadCorpus(opt.dev); }));
    if (dev->dim != train.dim) throw PhaseError("load", "dev embedding dimension differs");
  }
  RuleSet seeds = InPhase("load", [&] { return LoadSeedRules(opt.seeds); });
  PhraseLexicon lexicon;
  if (!opt.phrases.empty()) {
    std::vector<std::string> warnings;
    lexicon = InPhase("load", [&] { return LoadPhraseLexicon(opt.phrases, &warnings); });
    for (const std::string &w : warnings) std::cerr << "warning: " << w << '\n';
  }

  RunOutput output{opt.out, opt.train, opt.dev, opt.seeds, opt.phrases};
  RunArtifacts artifacts = InPhase("bootstrap", [&] {
    return Bootstrap(config, train, dev.get(), seeds, lexicon, output);
  });

  for (const IterationReport &r : artifacts.reports) {
    std::cout << "iteration " << r.iteration << ": +" << r.rules_selected << " rules ("
              << r.rules_total << " total), " << r.accepted << " accepted";
    if (r.dev) {
      std::cout << ", dev P=" << r.dev->precision << " R=" << r.dev->recall
                << " F1=" << r.dev->f1;
    }
    std::cout << '\n';
  }
  std::cout << "best iteration " << artifacts.best_iteration << ", "
            << artifacts.predictions.size() << " predictions written to " << opt.out << '\n';
  return 0;
}

int ApplyRulesCommand(const std::string &rules_path, const std::string &corpus_path,
                      const std::string &out_path, const std::string &phrases_path,
                      int max_span_len, const std::string &tie) {
  TiePolicy policy = TiePolicy::kAbstain;
  if (tie == "first_by_rule_id") {
    policy = TiePolicy::kFirstByRuleId;
  } else if (tie != "abstain") {
    throw PhaseError("config", "unknown tie policy \"" + tie + "\"");
  }
  RuleSet rules = InPhase("load", [&] { return LoadRulesJsonl(rules_path); });
  Corpus corpus = InPhase("load", [&] { return LoadCorpus(corpus_path); });
  PhraseLexicon lexicon;
  if (!phrases_path.empty()) {
    lexicon = InPhase("load", [&] { return LoadPhraseLexicon(phrases_path); });
  }
  std::vector<EntitySpan> predictions = InPhase("apply", [&] {
    IndexedCorpus indexed(corpus, lexicon, max_span_len, kDefaultNgramMax);
    std::vector<std::string> labels = LabelsOf(rules);
    RuleMatchTable table = MatchRules(rules, indexed.patterns(), indexed.candidates());
    return DecodeWeakLabels(ApplyRules(rules, table, indexed.candidates(), labels, policy),
                            corpus, labels);
  });
  std::ofstream out = OpenOutput(out_path);
  for (const EntitySpan &e : predictions) WriteEntityJsonl(e, out);
  std::cout << predictions.size() << " entities written to " << out_path << '\n';
  return 0;
}

int EvalCommand(const std::string &pred_path, const std::string &gold_path, bool boundary_only) {
  std::vector<EntitySpan> predicted =
      InPhase("load", [&] { return LoadEntitiesJsonl(pred_path); });
  Corpus gold_corpus = InPhase("load", [&] { return LoadCorpus(gold_path); });
  if (!gold_corpus.has_gold()) throw PhaseError("eval", gold_path + " has no gold entities");
  std::vector<EntitySpan> gold = GoldEntities(gold_corpus);
  Metrics metrics = boundary_only ? BoundaryPrf(predicted, gold) : MicroPrf(predicted, gold);
  std::cout << metrics.ToJson() << '\n';
  return 0;
}

int ExplainCommand(const std::string &run_dir, const std::string &out_path) {
  std::vector<Explanation> explanations =
      InPhase("explain", [&] { return ExplainRun(run_dir); });
  std::ofstream out = OpenOutput(out_path);
  for (const Explanation &e : explanations) WriteExplanationJsonl(e, out);
  std::cout << explanations.size() << " explanations written to " << out_path << '\n';
  return 0;
}

int ValidateCommand(const std::string &corpus_path) {
  Corpus corpus = InPhase("load", [&] { return LoadCorpus(corpus_path); });
  ValidationReport report = ValidateCorpus(corpus);
  std::cout << report.Summary() << '\n';
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bootstrapped compound-rule span tagger"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App *run_cmd = app.add_subcommand("run", "Bootstrap rules and a tagger from seeds");
  run_cmd->add_option("--train", run.train, "Training corpus (JSONL)")->required();
  run_cmd->add_option("--dev", run.dev, "Development corpus with gold entities");
  run_cmd->add_option("--seeds", run.seeds, "Seed rules (JSON)")->required();
  run_cmd->add_option("--phrases", run.phrases, "Phrase lexicon, one phrase per line");
  run_cmd->add_option("--config", run.config, "Config file (JSON)");
  run_cmd->add_option("--out", run.out, "Run directory")->required();
  run_cmd->add_flag("--rules-only", run.rules_only,
                    "Final predictions from the learned rules instead of the tagger");
  run_cmd->add_option("--seed", run.seed, "Override the config seed");
  run_cmd->add_option("--iterations", run.iterations, "Override the iteration count");

  std::string rules_path, corpus_path, out_path, phrases_path, tie = "abstain";
  int max_span_len = 5;
  CLI::App *apply_cmd = app.add_subcommand("apply-rules", "Label a corpus with a rule set");
  apply_cmd->add_option("--rules", rules_path, "Rules (JSONL)")->required();
  apply_cmd->add_option("--corpus", corpus_path, "Corpus (JSONL)")->required();
  apply_cmd->add_option("--out", out_path, "Output predictions (JSONL)")->required();
  apply_cmd->add_option("--phrases", phrases_path, "Phrase lexicon");
  apply_cmd->add_option("--max-span-len", max_span_len, "Maximum candidate length")
      ->check(CLI::PositiveNumber);
  apply_cmd->add_option("--tie-policy", tie, "abstain or first_by_rule_id");

  std::string pred_path, gold_path;
  bool boundary_only = false;
  CLI::App *eval_cmd = app.add_subcommand("eval", "Score predictions against gold");
  eval_cmd->add_option("--pred", pred_path, "Predictions (JSONL)")->required();
  eval_cmd->add_option("--gold", gold_path, "Corpus with gold entities")->required();
  eval_cmd->add_flag("--boundary-only", boundary_only, "Ignore labels");

  std::string run_dir, explain_out;
  CLI::App *explain_cmd = app.add_subcommand("explain", "Explain a run's predictions");
  explain_cmd->add_option("--run", run_dir, "Run directory")->required();
  explain_cmd->add_option("--out", explain_out, "Output explanations (JSONL)")->required();

  std::string validate_path;
  CLI::App *validate_cmd = app.add_subcommand("validate", "Check a corpus file");
  validate_cmd->add_option("--corpus", validate_path, "Corpus (JSONL)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return Run(run);
    if (*apply_cmd) {
      return ApplyRulesCommand(rules_path, corpus_path, out_path, phrases_path, max_span_len,
                               tie);
    }
    if (*eval_cmd) return EvalCommand(pred_path, gold_path, boundary_only);
    if (*explain_cmd) return ExplainCommand(run_dir, explain_out);
    if (*validate_cmd) return ValidateCommand(validate_path);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
