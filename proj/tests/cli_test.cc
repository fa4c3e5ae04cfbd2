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

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kFixtures = RULEBOOT_FIXTURE_DIR;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path &path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("ruleboot_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome Cli(const std::string &args) {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string command = std::string("\"") + RULEBOOT_CLI + "\" " + args + " >\"" +
                                out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(command.c_str());
    Outcome o;
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.out = Slurp(out);
    o.err = Slurp(err);
    return o;
  }

  std::string Fixture(const std::string &name) { return "\"" + kFixtures + "/" + name + "\""; }
  std::string Path(const std::string &name) { return "\"" + (dir_ / name).string() + "\""; }

  fs::path dir_;
};

TEST_F(CliTest, RunExplainApplyEval) {
  Outcome run = Cli("run --train " + Fixture("mini.jsonl") + " --dev " + Fixture("mini.jsonl") +
                    " --seeds " + Fixture("seeds.json") + " --phrases " +
                    Fixture("phrases.txt") + " --config " + Fixture("config.json") +
                    " --out " + Path("run"));
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_NE(run.out.find("iteration 1:"), std::string::npos) << run.out;
  EXPECT_NE(run.out.find("iteration 2:"), std::string::npos) << run.out;
  EXPECT_NE(run.out.find("best iteration"), std::string::npos);
  for (const char *name : {"config.json", "rules.jsonl", "reports.jsonl", "checkpoint.json",
                           "predictions.jsonl", "explanations.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir_ / "run" / name)) << name;
  }

  Outcome explain = Cli("explain --run " + Path("run") + " --out " + Path("explained.jsonl"));
  ASSERT_EQ(explain.code, 0) << explain.err;
  EXPECT_EQ(Slurp(dir_ / "explained.jsonl"), Slurp(dir_ / "run" / "explanations.jsonl"));

  // The seed lines alone; learned rules on a two-sentence corpus are erratic.
  {
    std::istringstream rules(Slurp(dir_ / "run" / "rules.jsonl"));
    std::ofstream seeds(dir_ / "seeds.jsonl");
    std::string line;
    for (int i = 0; i < 2 && std::getline(rules, line); ++i) seeds << line << '\n';
  }
  Outcome apply = Cli("apply-rules --rules " + Path("seeds.jsonl") + " --corpus " +
                      Fixture("mini.jsonl") + " --phrases " + Fixture("phrases.txt") +
                      " --out " + Path("applied.jsonl"));
  ASSERT_EQ(apply.code, 0) << apply.err;
  // nicotine twice, seizures once
  std::istringstream lines(Slurp(dir_ / "applied.jsonl"));
  std::string line;
  int chemical = 0, disease = 0;
  while (std::getline(lines, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    chemical += j["label"] == "Chemical";
    disease += j["label"] == "Disease";
  }
  EXPECT_EQ(chemical, 2);
  EXPECT_EQ(disease, 1);

  Outcome eval = Cli("eval --pred " + Path("applied.jsonl") + " --gold " + Fixture("mini.jsonl"));
  ASSERT_EQ(eval.code, 0) << eval.err;
  nlohmann::json metrics = nlohmann::json::parse(eval.out);
  EXPECT_EQ(metrics["f1"].get<double>(), 1.0);
  Outcome boundary = Cli("eval --boundary-only --pred " + Path("applied.jsonl") + " --gold " +
                         Fixture("mini.jsonl"));
  ASSERT_EQ(boundary.code, 0);
  EXPECT_FALSE(nlohmann::json::parse(boundary.out).contains("per_label"));
}

TEST_F(CliTest, RulesOnlyRun) {
  Outcome run = Cli("run --train " + Fixture("mini.jsonl") + " --seeds " + Fixture("seeds.json") +
                    " --config " + Fixture("config.json") + " --rules-only --iterations 1" +
                    " --out " + Path("run"));
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(nlohmann::json::parse(Slurp(dir_ / "run" / "config.json"))["rules_only"], true);
}

TEST_F(CliTest, Validate) {
  EXPECT_EQ(Cli("validate --corpus " + Fixture("s1.jsonl")).code, 0);
  Outcome bad = Cli("validate --corpus " + Fixture("bad_head.jsonl"));
  EXPECT_NE(bad.code, 0);
  EXPECT_NE((bad.out + bad.err).find(":2:"), std::string::npos) << bad.out << bad.err;
}

TEST_F(CliTest, PhaseTaggedErrors) {
  Outcome bad_corpus = Cli("run --train " + Fixture("bad_head.jsonl") + " --seeds " +
                           Fixture("seeds.json") + " --out " + Path("run"));
  EXPECT_EQ(bad_corpus.code, 2);
  EXPECT_EQ(bad_corpus.err.rfind("error: load: ", 0), 0u) << bad_corpus.err;

  Outcome bad_seeds = Cli("run --train " + Fixture("mini.jsonl") + " --seeds " +
                          Fixture("seeds_bad_type.json") + " --out " + Path("run"));
  EXPECT_EQ(bad_seeds.code, 2);
  EXPECT_EQ(bad_seeds.err.rfind("error: load: ", 0), 0u) << bad_seeds.err;

  Outcome missing = Cli("eval --pred " + Path("nothing.jsonl") + " --gold " + Fixture("mini.jsonl"));
  EXPECT_EQ(missing.code, 2);
  EXPECT_EQ(missing.err.rfind("error: ", 0), 0u);

  EXPECT_NE(Cli("run --seeds " + Fixture("seeds.json")).code, 0);
}

}  // namespace
