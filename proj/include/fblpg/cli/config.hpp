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

// Experiment configuration: a nested YAML document with per-scenario
// defaults. Unknown keys are rejected.

#ifndef FBLPG_CLI_CONFIG_HPP_
#define FBLPG_CLI_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fblpg/adapt.hpp"
#include "fblpg/plant.hpp"
#include "fblpg/refgen.hpp"

namespace fblpg::cli {

enum class ScenarioKind { kDoublePendulum, kInSpanSynthetic, kLinearTest };

enum class InitialMode { kRest, kOnReference, kExplicit };

struct BasisConfig {
  BasisKind kind = BasisKind::kGaussianRbf;
  std::vector<int> counts;
  std::vector<double> lower;
  std::vector<double> upper;
  double width_rule = 1.0;
  double amplitude = 1.0;
  int degree = 1;  // polynomial only
};

struct ControlConfig {
  double dt = 0.05;
  double sigma2 = 0.1;
  double noise_clip = 5.0;
  double pole = -1.5;
  int substeps = 10;
  double horizon_s = 60.0;
  BaselineKind baseline = BaselineKind::kMeanOfPast;
  MeasurementMode measurement = MeasurementMode::kExact;
};

struct InitialConfig {
  InitialMode mode = InitialMode::kRest;
  std::vector<double> x;  // explicit mode
};

// Linear plants in chain coordinates (y^(gamma) = L xi + D u).
struct LinearConfig {
  std::vector<std::vector<double>> L_true;
  std::vector<std::vector<double>> D_true;
  std::vector<std::vector<double>> L_nominal;
  std::vector<std::vector<double>> D_nominal;
};

struct InSpanConfig {
  std::uint64_t theta_seed = 7;
  double theta1_scale = 4.0;
  double theta2_scale = 0.9;
};

struct McConfig {
  long trials = 200;
  std::vector<double> dt_list;
  std::vector<double> sigma2_list;
  std::vector<double> lambda_list = {0.3, 0.1, 0.03};
  double confidence_lambda = 0.05;
  double eval_time = 2.0;
  std::vector<double> bias_dt_list;
  double bias_horizon_s = 20.0;
  double bias_tail_fraction = 0.25;
  int workers = 0;
};

struct DiagConfig {
  double horizon_s = 60.0;
  double window = 20.0;
  double tau_max = 30.0;
  double tau_step = 1.0;
  double start_spacing = 10.0;
  double step = 0.01;
};

struct ExperimentConfig {
  ScenarioKind scenario = ScenarioKind::kDoublePendulum;
  std::uint64_t seed = 1;
  DoublePendulumParams plant;
  double nominal_scale = 1.3;
  BasisConfig basis;
  SinusoidSum reference;
  ControlConfig control;
  InitialConfig initial;
  LinearConfig linear;
  InSpanConfig inspan;
  McConfig mc;
  DiagConfig diag;
};

// Every problem found while reading or validating a config.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

std::string scenario_name(ScenarioKind kind);

ExperimentConfig default_config(ScenarioKind kind);

// `overrides` are KEY=VALUE strings with dotted keys (control.sigma2=0.2);
// VALUE is parsed as YAML.
ExperimentConfig parse_config(const std::string& yaml_text,
                              const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// Full resolved config; parse_config(to_yaml(c)) == c.
std::string to_yaml(const ExperimentConfig& config);

}  // namespace fblpg::cli

#endif  // FBLPG_CLI_CONFIG_HPP_
