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

#ifndef FBLPG_CLI_SCENARIO_HPP_
#define FBLPG_CLI_SCENARIO_HPP_

#include "fblpg/adapt.hpp"
#include "fblpg/cli/config.hpp"

namespace fblpg::cli {

// double_pendulum: true pendulum, nominal with masses and lengths scaled.
// inspan_synthetic: linear nominal plus a random theta* correction; the
//   plant is built so that theta* is exact.
// linear_test: linear true and nominal plants; theta* is the least-squares
//   projection, kept only when it reproduces the exact controller.
Scenario build_scenario(const ExperimentConfig& config);

EpisodeOptions episode_options(const ExperimentConfig& config);

}  // namespace fblpg::cli

#endif  // FBLPG_CLI_SCENARIO_HPP_
