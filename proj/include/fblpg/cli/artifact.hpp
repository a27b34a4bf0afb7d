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

// Run artifacts: per-step CSV and JSON summaries.
//
// CSV columns, in order: k, t, e_norm, e_0..e_{n-1}, R, theta_norm,
// phi_norm (empty when theta* is unknown), u_0..u_{q-1}, w_0..w_{q-1}.
// Numbers are written with 17 significant digits.

#ifndef FBLPG_CLI_ARTIFACT_HPP_
#define FBLPG_CLI_ARTIFACT_HPP_

#include <filesystem>
#include <ostream>
#include <string>

#include "json.hpp"

#include "fblpg/adapt.hpp"

namespace fblpg::cli {

std::string format_double(double value);

void write_run_csv(std::ostream& out, const AdaptRunRecord& record);

struct ErrorStats {
  long steps = 0;
  double mean = 0.0;
  double max = 0.0;
};

// |e_k| statistics over steps [begin, end) of the planned horizon, clipped
// to the steps actually recorded.
ErrorStats error_stats(const AdaptRunRecord& record, long begin, long end);

nlohmann::json run_summary(const Scenario& scenario, const EpisodeOptions& options,
                           const AdaptRunRecord& record);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fblpg::cli

#endif  // FBLPG_CLI_ARTIFACT_HPP_
