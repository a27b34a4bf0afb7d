// Copyright 2026 The fblpg Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fblpg/cli/artifact.hpp"
#include "fblpg/cli/commands.hpp"
#include "fblpg/cli/config.hpp"
#include "fblpg/cli/scenario.hpp"

namespace fblpg::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Config, ScenarioRequired) {
  EXPECT_THROW(parse_config("seed: 3\n"), ConfigError);
}

TEST(Config, ReportsEveryProblem) {
  try {
    parse_config("scenario: double_pendulum\ncontrol:\n  dt: -1\n  sigma2: -2\nbogus: 1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string all = e.what();
    EXPECT_GE(e.problems().size(), 3u);
    EXPECT_NE(all.find("control.dt"), std::string::npos);
    EXPECT_NE(all.find("control.sigma2"), std::string::npos);
    EXPECT_NE(all.find("bogus"), std::string::npos);
  }
}

TEST(Config, OverridesApply) {
  const ExperimentConfig c =
      parse_config("scenario: inspan_synthetic\n", {"control.dt=0.01", "seed=9", "mc.dt_list=[0.1, 0.2]"});
  EXPECT_EQ(c.scenario, ScenarioKind::kInSpanSynthetic);
  EXPECT_DOUBLE_EQ(c.control.dt, 0.01);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.mc.dt_list, (std::vector<double>{0.1, 0.2}));
  EXPECT_THROW(parse_config("scenario: inspan_synthetic\n", {"nope"}), ConfigError);
}

TEST(Config, YamlRoundTrip) {
  for (ScenarioKind k : {ScenarioKind::kDoublePendulum, ScenarioKind::kInSpanSynthetic,
                         ScenarioKind::kLinearTest}) {
    const std::string once = to_yaml(default_config(k));
    EXPECT_EQ(to_yaml(parse_config(once)), once);
  }
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"double_pendulum", "double_pendulum_250", "inspan_synthetic", "linear_test"}) {
    const ExperimentConfig c =
        load_config(std::string(FBLPG_SOURCE_DIR "/configs/") + name + ".yaml");
    EXPECT_NO_THROW(build_scenario(c)) << name;
  }
}

TEST(Scenario, LinearTestHasProjectedTheta) {
  const Scenario s = build_scenario(default_config(ScenarioKind::kLinearTest));
  ASSERT_TRUE(s.theta_star.has_value());
  EXPECT_EQ(s.theta_star->theta.size(), s.bases->size());
}

TEST(Scenario, PendulumHasNoTheta) {
  EXPECT_FALSE(build_scenario(default_config(ScenarioKind::kDoublePendulum)).theta_star);
}

TEST(Artifact, FormatRoundTrips) {
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Artifact, CsvShape) {
  const ExperimentConfig c = default_config(ScenarioKind::kInSpanSynthetic);
  const Scenario s = build_scenario(c);
  EpisodeOptions o = episode_options(c);
  o.horizon_steps = 5;
  std::ostringstream out;
  write_run_csv(out, run_episode(s, o));
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("k,t,e_norm", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

class CommandTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fblpg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CommandOptions options(const std::string& config, std::vector<std::string> overrides = {}) {
    CommandOptions o;
    o.config_path = std::string(FBLPG_SOURCE_DIR "/configs/") + config + ".yaml";
    o.out_dir = dir_;
    o.overrides = std::move(overrides);
    return o;
  }

  fs::path dir_;
  std::ostringstream log_;
};

TEST_F(CommandTest, RunWritesArtifacts) {
  CommandOptions o = options("double_pendulum", {"control.horizon_s=2"});
  ASSERT_EQ(cmd_run(o, log_), 0) << log_.str();
  const fs::path run = dir_ / "double_pendulum_seed1";
  for (const char* f : {"run.csv", "summary.json", "config.yaml", "timing_run.json"}) {
    EXPECT_TRUE(fs::exists(run / f)) << f;
  }
  EXPECT_EQ(to_yaml(load_config((run / "config.yaml").string())), slurp(run / "config.yaml"));
  o.seed = 5;
  ASSERT_EQ(cmd_run(o, log_), 0);
  EXPECT_TRUE(fs::exists(dir_ / "double_pendulum_seed5" / "run.csv"));
}

TEST_F(CommandTest, BadConfigExitCode) {
  EXPECT_EQ(cmd_run(options("double_pendulum", {"control.dt=0"}), log_), 2);
  CommandOptions missing = options("double_pendulum");
  missing.config_path = (dir_ / "missing.yaml").string();
  EXPECT_EQ(cmd_run(missing, log_), 2);
}

TEST_F(CommandTest, McNeedsTrueParameters) {
  EXPECT_EQ(cmd_mc(options("double_pendulum"), log_), 4);
}

TEST_F(CommandTest, DivergenceExitCode) {
  EXPECT_EQ(cmd_run(options("double_pendulum", {"control.sigma2=1e6", "control.horizon_s=5"}), log_), 3);
}

TEST_F(CommandTest, CompareWritesRatio) {
  ASSERT_EQ(cmd_compare(options("inspan_synthetic"), log_), 0) << log_.str();
  const std::string json = slurp(dir_ / "inspan_synthetic_seed1" / "compare.json");
  EXPECT_NE(json.find("final_quarter_ratio"), std::string::npos);
}

TEST_F(CommandTest, InSpanParameterErrorShrinks) {
  ASSERT_EQ(cmd_run(options("inspan_synthetic", {"control.horizon_s=200"}), log_), 0) << log_.str();
  const auto summary = nlohmann::json::parse(slurp(dir_ / "inspan_synthetic_seed1" / "summary.json"));
  const double start = summary["phi_norm_initial"], end = summary["phi_norm_final"];
  EXPECT_LT(end, 0.2 * start);
  EXPECT_FALSE(summary["diverged"].get<bool>());
}

TEST_F(CommandTest, DiagWritesFit) {
  ASSERT_EQ(cmd_diag(options("inspan_synthetic"), log_), 0) << log_.str();
  const std::string json = slurp(dir_ / "inspan_synthetic_seed1" / "diag.json");
  EXPECT_NE(json.find("zeta"), std::string::npos);
  EXPECT_NE(json.find("\"pe\""), std::string::npos);
}

}  // namespace
}  // namespace fblpg::cli
