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

#include <iostream>

#include "CLI11.hpp"

#include "fblpg/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace fblpg::cli;
  CLI::App app{"Policy-gradient adaptation of feedback-linearizing controllers"};
  app.require_subcommand(1);

  CommandOptions opt;
  std::string out_dir = opt.out_dir.string();
  std::uint64_t seed = 0;
  long trials = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "experiment config (YAML)")->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out-dir", out_dir, "artifact root directory");
    sub->add_option("--override", opt.overrides, "KEY=VALUE config override (repeatable)")
        ->take_all();
  };
  CLI::App* run = app.add_subcommand("run", "single run");
  add_common(run);
  run->add_flag("--no-learning", opt.no_learning, "freeze parameters and disable probing");
  CLI::App* compare = app.add_subcommand("compare", "paired learning / no-learning runs");
  add_common(compare);
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo concentration and bias studies");
  add_common(mc);
  mc->add_option("--trials", trials, "trials per cell (overrides the config)");
  CLI::App* diag = app.add_subcommand("diag", "persistence of excitation and stability report");
  add_common(diag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }
  opt.out_dir = out_dir;
  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->get_name() == "mc" && sub->count("--trials")) opt.trials = trials;
  }
  if (run->parsed()) return cmd_run(opt, std::cout);
  if (compare->parsed()) return cmd_compare(opt, std::cout);
  if (mc->parsed()) return cmd_mc(opt, std::cout);
  return cmd_diag(opt, std::cout);
}
