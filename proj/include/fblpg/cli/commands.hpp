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

#ifndef FBLPG_CLI_COMMANDS_HPP_
#define FBLPG_CLI_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fblpg::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitDivergence = 3,
  kExitUnsupported = 4,
};

struct CommandOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = "runs";
  std::optional<long> trials;
  bool no_learning = false;
  std::vector<std::string> overrides;
};

// Each command writes into out_dir/<scenario>_seed<seed>[_nolearn]/ and
// reports progress on `log`.
int cmd_run(const CommandOptions& options, std::ostream& log);
int cmd_compare(const CommandOptions& options, std::ostream& log);
int cmd_mc(const CommandOptions& options, std::ostream& log);
int cmd_diag(const CommandOptions& options, std::ostream& log);

}  // namespace fblpg::cli

#endif  // FBLPG_CLI_COMMANDS_HPP_
