// Copyright 2026 The Dilemma Lab Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.h"
#include "config.h"
#include "run_dir.h"

namespace dilemma_lab::cli {
namespace {

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() /
            (std::string("dilemma_lab_cli_") + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path WriteConfig(const std::string& name, const std::string& text) {
    const fs::path p = root_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int Run(const std::string& command, CommandOptions opt) {
    if (!opt.out) opt.out = (root_ / "runs").string();
    out_.str("");
    err_.str("");
    return RunCommand(command, opt, out_, err_);
  }

  fs::path root_;
  std::ostringstream out_, err_;
};

constexpr const char* kCommons = R"(name: commons
environment:
  id: mini_commons
  num_players: 2
  params: {horizon: 20}
schedule:
  pretrain_episodes: 30
  ratios: ["2:1", "1:1"]
  episodes_per_stage: 30
seeds: 3
evaluation_episodes: 2
dunnett_draws: 20000
)";

constexpr const char* kPd = R"(name: pd
environment:
  id: matrix
  params: {game: pd, payoffs: [5, 3, 1, 0], repeats: 1}
schedule:
  pretrain_episodes: 200
  s_values: [1, 0.7, 0.5]
  episodes_per_stage: 200
seeds: 2
evaluation_episodes: 1
dunnett_draws: 20000
)";

TEST_F(CliTest, ParsesRatiosAndRejectsUnknownKeys) {
  const auto c = LoadExperimentConfig(WriteConfig("c.yaml", kCommons));
  EXPECT_EQ(c.name, "commons");
  ASSERT_EQ(c.estimator.s_values.size(), 3u);
  EXPECT_NEAR(c.estimator.s_values[1], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.estimator.s_values[2], 0.5, 1e-15);
  EXPECT_EQ(c.estimator.seeds, (std::vector<std::uint64_t>{0, 1, 2}));
  try {
    LoadExperimentConfig(
        WriteConfig("bad.yaml", std::string(kCommons) + "colour: red\n"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST_F(CliTest, JsonIsAnAlternateEncoding) {
  const auto yaml = LoadExperimentConfig(WriteConfig("c.yaml", kPd));
  const auto json_path = WriteConfig("pd.json", ExperimentConfigToJson(yaml).dump());
  const auto from_json = LoadExperimentConfig(json_path);
  EXPECT_EQ(ExperimentConfigToJson(from_json), ExperimentConfigToJson(yaml));
}

TEST_F(CliTest, MissingEnvironmentIdIsUsageError) {
  const auto path = WriteConfig("noid.yaml", "name: noid\nenvironment: {}\n");
  CommandOptions opt;
  opt.config = path.string();
  EXPECT_EQ(Run("estimate", opt), kExitUsage);
  EXPECT_NE(err_.str().find("environment.id"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(root_ / "runs" / "noid"));
}

TEST_F(CliTest, MalformedConfigIsUsageError) {
  const auto path = WriteConfig("broken.yaml", "name: [unterminated\n");
  CommandOptions opt;
  opt.config = path.string();
  EXPECT_EQ(Run("pretrain", opt), kExitUsage);
  EXPECT_FALSE(fs::exists(root_ / "runs" / "broken"));
  opt.config = (root_ / "missing.yaml").string();
  EXPECT_EQ(Run("pretrain", opt), kExitUsage);
}

TEST_F(CliTest, PretrainWritesCheckpointsAndReproduces) {
  CommandOptions opt;
  opt.config = WriteConfig("c.yaml", kCommons).string();
  ASSERT_EQ(Run("pretrain", opt), kExitOk) << err_.str();
  const fs::path dir = root_ / "runs" / "commons";
  for (int seed = 0; seed < 3; ++seed) {
    for (int k = 0; k < 2; ++k) {
      EXPECT_TRUE(fs::exists(dir / "checkpoints" / ("seed_" + std::to_string(seed)) /
                             ("stage_" + std::to_string(k) + ".cbor")));
    }
  }
  const std::string csv = ReadFile(dir / "welfare.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "seed,stage,s,episode,collective_reward");
  const auto manifest = ReadJsonFile(dir / "manifest.json");
  EXPECT_EQ(manifest["algorithm"], "sha256");
  EXPECT_TRUE(manifest["files"].contains("welfare.csv"));
  EXPECT_FALSE(manifest["files"].contains("timing.json"));

  ASSERT_EQ(Run("pretrain", opt), kExitOk);
  EXPECT_EQ(ReadJsonFile(dir / "manifest.json"), manifest);
}

TEST_F(CliTest, ResumeAfterInterruptionMatches) {
  CommandOptions opt;
  opt.config = WriteConfig("c.yaml", kCommons).string();
  ASSERT_EQ(Run("estimate", opt), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("s* = "), std::string::npos);
  const fs::path dir = root_ / "runs" / "commons";
  const std::string report = ReadFile(dir / "report.json");
  const std::string welfare = ReadFile(dir / "welfare.csv");
  const auto manifest = ReadJsonFile(dir / "manifest.json");

  // Resuming a complete run trains nothing.
  const auto stamp = fs::last_write_time(dir / "checkpoints/seed_0/stage_3.cbor");
  opt.resume = true;
  ASSERT_EQ(Run("estimate", opt), kExitOk) << err_.str();
  EXPECT_EQ(fs::last_write_time(dir / "checkpoints/seed_0/stage_3.cbor"), stamp);
  EXPECT_EQ(ReadFile(dir / "report.json"), report);

  // Drop the tail of two seeds, as if the process had been killed.
  fs::remove(dir / "checkpoints/seed_1/stage_3.cbor");
  fs::remove(dir / "checkpoints/seed_2/stage_2.cbor");
  fs::remove(dir / "checkpoints/seed_2/stage_3.cbor");
  fs::remove(dir / "report.json");
  ASSERT_EQ(Run("estimate", opt), kExitOk) << err_.str();
  EXPECT_EQ(ReadFile(dir / "report.json"), report);
  EXPECT_EQ(ReadFile(dir / "welfare.csv"), welfare);
  EXPECT_EQ(ReadJsonFile(dir / "manifest.json"), manifest);
}

TEST_F(CliTest, ResumeNeedsMatchingRun) {
  CommandOptions opt;
  opt.config = WriteConfig("c.yaml", kCommons).string();
  opt.resume = true;
  EXPECT_EQ(Run("estimate", opt), kExitUsage);
  opt.resume = false;
  ASSERT_EQ(Run("pretrain", opt), kExitOk);
  opt.resume = true;
  opt.seed_offset = 10;
  EXPECT_EQ(Run("pretrain", opt), kExitUsage);
}

TEST_F(CliTest, OutputRootFromEnvironment) {
  CommandOptions opt;
  opt.config = WriteConfig("c.yaml", kPd).string();
  const fs::path env_root = root_ / "from_env";
  ::setenv("DILEMMA_LAB_OUT", env_root.c_str(), 1);
  std::ostringstream out, err;
  const int code = RunCommand("pretrain", opt, out, err);
  ::unsetenv("DILEMMA_LAB_OUT");
  ASSERT_EQ(code, kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(env_root / "pd" / "manifest.json"));
  EXPECT_EQ(ResolveOutputRoot(std::string("x"), "y"), fs::path("x"));
  EXPECT_EQ(ResolveOutputRoot(std::nullopt, "y"), fs::path("y"));
}

TEST_F(CliTest, SchellingPdBuiltinIsExact) {
  CommandOptions opt;
  opt.config = WriteConfig("c.yaml", kPd).string();
  ASSERT_EQ(Run("schelling", opt), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("a social dilemma"), std::string::npos);
  const fs::path dir = root_ / "runs" / "pd" / "schelling";
  const std::string csv = ReadFile(dir / "schelling.csv");
  EXPECT_NE(csv.find("# episodes_per_cell=225"), std::string::npos);
  EXPECT_NE(csv.find("0,0,0,1,0,2,0\n1,3,0,5,0,5,0\n2,,,,,6,0\n"),
            std::string::npos)
      << csv;
  EXPECT_TRUE(ReadJsonFile(dir / "dilemma_report.json")["is_dilemma"].get<bool>());
}

TEST_F(CliTest, SchellingRejectsForeignPolicies) {
  CommandOptions train;
  train.config = WriteConfig("c.yaml", kCommons).string();
  ASSERT_EQ(Run("estimate", train), kExitOk) << err_.str();
  CommandOptions opt;
  opt.config = WriteConfig("pd.yaml", kPd).string();
  opt.coop_from = (root_ / "runs" / "commons").string();
  EXPECT_EQ(Run("schelling", opt), kExitUsage);
  EXPECT_NE(err_.str().find("different environment"), std::string::npos);

  // Learned pools from the run itself are accepted.
  CommandOptions own = train;
  own.coop_from = own.defect_from = (root_ / "runs" / "commons").string();
  EXPECT_EQ(Run("schelling", own), kExitOk) << err_.str();
  own.defect_from += "#no_such_stage";
  EXPECT_EQ(Run("schelling", own), kExitUsage);
}

TEST_F(CliTest, ValidateNeedsPriorReport) {
  CommandOptions opt;
  opt.config = WriteConfig("c.yaml", kCommons).string();
  EXPECT_EQ(Run("validate", opt), kExitUsage);
  ASSERT_EQ(Run("estimate", opt), kExitOk);
  EXPECT_EQ(Run("validate", opt), kExitOk) << err_.str();
  const auto v = ReadJsonFile(root_ / "runs" / "commons" / "validation" / "report.json");
  EXPECT_EQ(v["arms"].size(), 4u);
}

TEST_F(CliTest, AnalyticInlineGames) {
  CommandOptions opt;
  opt.game = "pgg n=10 k1=5 k2=2 cx=0.5";
  opt.resolution = 1e-2;
  ASSERT_EQ(Run("analytic", opt), kExitOk) << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["boundaries"], nlohmann::json::array({0.2, 0.5}));

  opt.game = "pd 5 3 1 0";
  ASSERT_EQ(Run("analytic", opt), kExitOk);
  EXPECT_EQ(nlohmann::json::parse(out_.str())["s_star"]["exact"], "3/5");

  opt.game = "pgg n=10 k1=2 k2=5 cx=0.5";
  EXPECT_EQ(Run("analytic", opt), kExitUsage);
  opt.game = "pgg n=4 k1=5 k2=2 cx=0.5";
  EXPECT_EQ(Run("analytic", opt), kExitUsage);
}

TEST_F(CliTest, UnknownCommand) {
  EXPECT_EQ(Run("frobnicate", {}), kExitUsage);
}

TEST(RunDirTest, Sha256KnownAnswer) {
  EXPECT_EQ(Sha256Bytes("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_TRUE(IsVolatileArtifact("timing.json"));
  EXPECT_TRUE(IsVolatileArtifact("manifest.json"));
  EXPECT_FALSE(IsVolatileArtifact("report.json"));
}

TEST(RunDirTest, FormatNumberRoundTrips) {
  for (double v : {0.1, 1.0 / 3, 2.5 / 8.5, 1e-300, 123456789.0}) {
    EXPECT_EQ(std::stod(FormatNumber(v)), v);
  }
  EXPECT_EQ(FormatNumber(6.0), "6");
}

}  // namespace
}  // namespace dilemma_lab::cli
