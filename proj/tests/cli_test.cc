// Copyright 2026 The chainattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct Output {
  int status = -1;
  std::string text;
};

Output RunCli(const std::string& args) {
  const std::string command = std::string(CHAINATTACK_CLI) + " " + args + " 2>&1";
  Output out;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return out;
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) out.text.append(buffer, n);
  const int raw = pclose(pipe);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("chainattack_cli_" + std::to_string(getpid()));
    fs::create_directories(dir_);
    // A short slice of the toy test split keeps the attack runs quick.
    std::ifstream in(Data() / "toy" / "test.tsv");
    std::ofstream small(dir_ / "small.tsv");
    std::string line;
    for (int i = 0; i < 12 && std::getline(in, line); ++i) small << line << '\n';
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static fs::path Data() { return CHAINATTACK_DATA_DIR; }
  static std::string P(const std::string& name) { return (dir_ / name).string(); }
  static std::string Toy(const std::string& name) { return (Data() / "toy" / name).string(); }
  static std::string Resources() { return (Data() / "bundle").string(); }

  static void Train() {
    if (fs::exists(dir_ / "model.json")) return;
    const Output o = RunCli("train-victim --train " + Toy("train.tsv") + " --test " +
                         Toy("test.tsv") + " --classes " + Toy("classes.txt") + " --out " +
                         P("model.json"));
    ASSERT_EQ(o.status, 0) << o.text;
  }

  static void Attack() {
    Train();
    if (fs::exists(dir_ / "attack.jsonl")) return;
    const Output o = RunCli("attack --resources " + Resources() + " --dataset " + P("small.tsv") +
                         " --classes " + Toy("classes.txt") + " --model " + P("model.json") +
                         " --out " + P("attack.jsonl") + " --attacked-label -1 --jobs 2");
    ASSERT_EQ(o.status, 0) << o.text;
  }

  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, TrainVictim) {
  Train();
  const std::string model = Slurp(dir_ / "model.json");
  EXPECT_NE(model.find("\"chainattack-ngram\""), std::string::npos);
  EXPECT_NE(model.find("\"metadata\""), std::string::npos);
}

TEST_F(CliTest, BuildGraph) {
  std::ofstream(dir_ / "words.txt") << "幼稚\n衣服\n";
  const Output o = RunCli("build-graph --resources " + Resources() + " --words " + P("words.txt") +
                       " --out " + P("graph.jsonl"));
  ASSERT_EQ(o.status, 0) << o.text;
  EXPECT_NE(o.text.find("\"roots\":2"), std::string::npos) << o.text;
  EXPECT_NE(Slurp(dir_ / "graph.jsonl").find("幺力稚"), std::string::npos);
}

TEST_F(CliTest, AttackWritesConfigRecordsAndSummary) {
  Attack();
  std::ifstream in(dir_ / "attack.jsonl");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 14u);
  EXPECT_NE(lines.front().find("\"type\":\"config\""), std::string::npos);
  EXPECT_NE(lines.front().find("\"seed\""), std::string::npos);
  for (size_t i = 1; i + 1 < lines.size(); ++i) {
    EXPECT_NE(lines[i].find("\"type\":\"attack\""), std::string::npos);
  }
  EXPECT_NE(lines.back().find("\"success_rate\""), std::string::npos);
}

TEST_F(CliTest, AttackIsReproducible) {
  Attack();
  const Output o = RunCli("attack --resources " + Resources() + " --dataset " + P("small.tsv") +
                       " --classes " + Toy("classes.txt") + " --model " + P("model.json") +
                       " --out " + P("attack2.jsonl") + " --attacked-label -1 --jobs 3");
  ASSERT_EQ(o.status, 0) << o.text;
  std::string a = Slurp(dir_ / "attack.jsonl");
  std::string b = Slurp(dir_ / "attack2.jsonl");
  // Only the output path and job count in the config line may differ.
  a = a.substr(a.find('\n'));
  b = b.substr(b.find('\n'));
  EXPECT_EQ(a, b);
}

TEST_F(CliTest, DefendAgbr) {
  Attack();
  const Output o = RunCli("defend --mode agbr --resources " + Resources() + " --report " +
                       P("attack.jsonl") + " --model " + P("model.json") + " --clean " +
                       P("small.tsv") + " --classes " + Toy("classes.txt") + " --out " +
                       P("recovered.jsonl"));
  ASSERT_EQ(o.status, 0) << o.text;
  EXPECT_NE(o.text.find("\"delta_adv\""), std::string::npos) << o.text;
  EXPECT_NE(o.text.find("\"delta_all\""), std::string::npos) << o.text;
  EXPECT_NE(Slurp(dir_ / "recovered.jsonl").find("\"type\":\"recovery\""), std::string::npos);
}

TEST_F(CliTest, DefendAdversarialTraining) {
  Attack();
  const Output o = RunCli("defend --mode at --resources " + Resources() + " --model " +
                       P("model.json") + " --train " + P("small.tsv") + " --classes " +
                       Toy("classes.txt") + " --report " + P("attack.jsonl") + " --fraction 0.5" +
                       " --out-dataset " + P("aug.tsv") + " --out-model " + P("at.json"));
  ASSERT_EQ(o.status, 0) << o.text;
  EXPECT_TRUE(fs::exists(dir_ / "aug.tsv"));
  EXPECT_TRUE(fs::exists(dir_ / "aug.tsv.config.json"));
  EXPECT_TRUE(fs::exists(dir_ / "at.json"));
  EXPECT_NE(o.text.find("\"adv_after\""), std::string::npos);
}

TEST_F(CliTest, TransferAndEval) {
  Attack();
  Output o = RunCli("transfer --adv base=" + P("attack.jsonl") + " --model base=" +
                 P("model.json") + " --out " + P("transfer.tsv"));
  ASSERT_EQ(o.status, 0) << o.text;
  EXPECT_EQ(Slurp(dir_ / "transfer.tsv"), "source\tbase\nbase\tN/A\n");
  o = RunCli("eval --resources " + Resources() + " --report base=" + P("attack.jsonl") + " --out " +
          P("rows.tsv"));
  ASSERT_EQ(o.status, 0) << o.text;
  const std::string rows = Slurp(dir_ / "rows.tsv");
  EXPECT_EQ(rows.rfind("model\t", 0), 0u) << rows;
  EXPECT_NE(rows.find("\nbase\t12\t"), std::string::npos) << rows;
}

TEST_F(CliTest, Errors) {
  EXPECT_NE(RunCli("").status, 0);
  EXPECT_NE(RunCli("no-such-command").status, 0);
  Output o = RunCli("train-victim --train " + P("missing.tsv") + " --out " + P("x.json"));
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.text.find("error:"), std::string::npos) << o.text;
  std::ofstream(dir_ / "broken.json") << "{\"format\":\"other\"}";
  o = RunCli("attack --resources " + Resources() + " --dataset " + P("small.tsv") + " --model " +
          P("broken.json") + " --out " + P("never.jsonl"));
  EXPECT_EQ(o.status, 1) << o.text;
  o = RunCli("attack --resources " + Resources() + " --dataset " + P("small.tsv") + " --classes " +
          Toy("classes.txt") + " --endpoint http://127.0.0.1:1/predict --out " + P("down.jsonl"));
  EXPECT_EQ(o.status, 1) << o.text;
  o = RunCli("defend --mode at --resources " + Resources() + " --train " + P("small.tsv"));
  EXPECT_EQ(o.status, 1) << o.text;
}

}  // namespace
