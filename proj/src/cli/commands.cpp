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

#include "fblpg/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "fblpg/cli/artifact.hpp"
#include "fblpg/cli/config.hpp"
#include "fblpg/cli/scenario.hpp"
#include "fblpg/diag.hpp"

namespace fblpg::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

struct Prepared {
  ExperimentConfig config;
  Scenario scenario;
  std::filesystem::path dir;
};

Prepared prepare(const CommandOptions& opt, const std::string& suffix) {
  std::vector<std::string> overrides = opt.overrides;
  if (opt.seed) overrides.push_back("seed=" + std::to_string(*opt.seed));
  if (opt.trials) overrides.push_back("mc.trials=" + std::to_string(*opt.trials));
  ExperimentConfig config = load_config(opt.config_path, overrides);
  Scenario scenario = build_scenario(config);
  const std::filesystem::path dir =
      opt.out_dir / (scenario_name(config.scenario) + "_seed" + std::to_string(config.seed) + suffix);
  Prepared p{std::move(config), std::move(scenario), dir};
  std::filesystem::create_directories(p.dir);
  write_text(p.dir / "config.yaml", to_yaml(p.config));
  return p;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_timing(const std::filesystem::path& path, Clock::time_point start) {
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  write_text(path, dump(json{{"wall_seconds", seconds}}));
}

void write_record(const std::filesystem::path& path, const AdaptRunRecord& rec) {
  std::ostringstream csv;
  write_run_csv(csv, rec);
  write_text(path, csv.str());
}

// Maps library exceptions onto exit codes.
int guarded(const std::function<int()>& body, std::ostream& log) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << e.what() << "\n";
    return kExitConfigError;
  } catch (const DivergenceError& e) {
    log << "diverged: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const SingularityError& e) {
    log << "diverged: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::invalid_argument& e) {
    log << "invalid configuration: " << e.what() << "\n";
    return kExitConfigError;
  }
}

json quarter_table(const AdaptRunRecord& rec, long horizon) {
  json rows = json::array();
  for (int q = 0; q < 4; ++q) {
    const ErrorStats st = error_stats(rec, horizon * q / 4, horizon * (q + 1) / 4);
    rows.push_back({{"quarter", q + 1}, {"steps", st.steps}, {"mean", st.mean}, {"max", st.max}});
  }
  return rows;
}

}  // namespace

int cmd_run(const CommandOptions& opt, std::ostream& log) {
  return guarded([&] {
    const auto start = Clock::now();
    const Prepared p = prepare(opt, opt.no_learning ? "_nolearn" : "");
    EpisodeOptions ep = episode_options(p.config);
    ep.learning = !opt.no_learning;
    const AdaptRunRecord rec = run_episode(p.scenario, ep);
    write_record(p.dir / "run.csv", rec);
    write_text(p.dir / "summary.json", dump(run_summary(p.scenario, ep, rec)));
    write_timing(p.dir / "timing_run.json", start);
    log << "wrote " << p.dir.string() << "\n";
    if (rec.diverged) {
      log << "diverged at step " << rec.divergence_step << ": " << rec.divergence_reason << "\n";
      return static_cast<int>(kExitDivergence);
    }
    return static_cast<int>(kExitOk);
  }, log);
}

int cmd_compare(const CommandOptions& opt, std::ostream& log) {
  return guarded([&] {
    const auto start = Clock::now();
    const Prepared p = prepare(opt, "");
    EpisodeOptions on = episode_options(p.config);
    EpisodeOptions off = on;
    off.learning = false;
    const AdaptRunRecord learn = run_episode(p.scenario, on);
    const AdaptRunRecord base = run_episode(p.scenario, off);
    write_record(p.dir / "compare_learning.csv", learn);
    write_record(p.dir / "compare_no_learning.csv", base);

    const long n = on.horizon_steps;
    const ErrorStats fl = error_stats(learn, n - n / 4, n);
    const ErrorStats fb = error_stats(base, n - n / 4, n);
    json j;
    j["learning"] = run_summary(p.scenario, on, learn);
    j["no_learning"] = run_summary(p.scenario, off, base);
    j["learning_quarters"] = quarter_table(learn, n);
    j["no_learning_quarters"] = quarter_table(base, n);
    j["final_quarter_ratio"] = fb.mean > 0.0 ? fl.mean / fb.mean : 0.0;
    write_text(p.dir / "compare.json", dump(j));
    write_timing(p.dir / "timing_compare.json", start);
    log << "final-quarter mean |e|: learning " << fl.mean << ", no learning " << fb.mean
        << ", ratio " << j["final_quarter_ratio"].get<double>() << "\n";
    return static_cast<int>(learn.diverged || base.diverged ? kExitDivergence : kExitOk);
  }, log);
}

int cmd_mc(const CommandOptions& opt, std::ostream& log) {
  return guarded([&] {
    const auto start = Clock::now();
    const Prepared p = prepare(opt, "");
    if (!p.scenario.theta_star) {
      log << "mc needs true parameters; scenario '" << p.scenario.name
          << "' has none (use inspan_synthetic or linear_test)\n";
      return static_cast<int>(kExitUnsupported);
    }
    const McConfig& mc = p.config.mc;
    ConcentrationOptions co;
    co.episode = episode_options(p.config);
    co.trials = mc.trials;
    co.dt_list = mc.dt_list;
    co.sigma2_list = mc.sigma2_list;
    co.lambda_list = mc.lambda_list;
    co.confidence_lambda = mc.confidence_lambda;
    co.eval_time = mc.eval_time;
    co.seed = p.config.seed;
    co.workers = mc.workers;
    const ConcentrationReport conc = concentration_study(p.scenario, co);

    BiasOptions bo;
    bo.episode = episode_options(p.config);
    bo.trials = mc.trials;
    bo.dt_list = mc.bias_dt_list;
    bo.horizon_s = mc.bias_horizon_s;
    bo.tail_fraction = mc.bias_tail_fraction;
    bo.seed = p.config.seed;
    bo.workers = mc.workers;
    const BiasReport bias = bias_study(p.scenario, bo);

    // quantile ~= C * sqrt(dt ln(2/lambda) / sigma2), C by least squares
    double num = 0.0, den = 0.0;
    for (const ConcentrationCell& c : conc.cells) {
      for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
        const double shape = std::sqrt(c.dt * std::log(2.0 / c.lambdas[i]) / c.sigma2);
        num += shape * c.quantiles[i];
        den += shape * shape;
      }
    }
    const double scale = den > 0.0 ? num / den : 0.0;

    std::ostringstream cc;
    cc << "dt,sigma2,trials,diverged,eval_step,lambda,quantile,shape\n";
    for (const ConcentrationCell& c : conc.cells) {
      for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
        cc << format_double(c.dt) << ',' << format_double(c.sigma2) << ',' << c.trials << ','
           << c.diverged << ',' << c.eval_step << ',' << format_double(c.lambdas[i]) << ','
           << format_double(c.quantiles[i]) << ','
           << format_double(scale * std::sqrt(c.dt * std::log(2.0 / c.lambdas[i]) / c.sigma2))
           << "\n";
      }
    }
    write_text(p.dir / "mc_concentration.csv", cc.str());

    std::ostringstream bc;
    bc << "dt,trials,diverged,offset,offset_stderr,transient_rate\n";
    for (const BiasRow& r : bias.rows) {
      bc << format_double(r.dt) << ',' << r.trials << ',' << r.diverged << ','
         << format_double(r.offset) << ',' << format_double(r.offset_stderr) << ','
         << format_double(r.transient_rate) << "\n";
    }
    write_text(p.dir / "mc_bias.csv", bc.str());

    long diverged = 0;
    for (const ConcentrationCell& c : conc.cells) diverged += c.diverged;
    for (const BiasRow& r : bias.rows) diverged += r.diverged;
    json j;
    j["scenario"] = p.scenario.name;
    j["seed"] = p.config.seed;
    j["trials"] = mc.trials;
    j["parameters"] = p.scenario.bases->size();
    j["concentration"] = {{"slope_vs_scale", conc.slope_vs_scale},
                          {"slope_vs_dt", conc.slope_vs_dt},
                          {"slope_vs_lambda", conc.slope_vs_lambda},
                          {"sigma_doubling_ratio", conc.sigma_doubling_ratio},
                          {"confidence_lambda", conc.confidence_lambda},
                          {"shape_constant", scale}};
    j["bias"] = {{"slope", bias.slope}, {"coefficient", bias.coefficient}};
    j["diverged_trials"] = diverged;
    write_text(p.dir / "mc.json", dump(j));
    write_timing(p.dir / "timing_mc.json", start);
    log << "concentration slopes: dt " << conc.slope_vs_dt << ", lambda " << conc.slope_vs_lambda
        << ", sigma doubling ratio " << conc.sigma_doubling_ratio << "; bias slope "
        << bias.slope << "\n";
    return static_cast<int>(kExitOk);
  }, log);
}

int cmd_diag(const CommandOptions& opt, std::ostream& log) {
  return guarded([&] {
    const auto start = Clock::now();
    const Prepared p = prepare(opt, "");
    const DiagConfig& dc = p.config.diag;
    EpisodeOptions ep = episode_options(p.config);
    ep.learning = false;
    ep.horizon_steps = std::lround(dc.horizon_s / ep.policy.dt);
    const AdaptRunRecord rec = run_episode(p.scenario, ep);
    if (rec.diverged) {
      log << "diverged at step " << rec.divergence_step << ": " << rec.divergence_reason << "\n";
      return static_cast<int>(kExitDivergence);
    }
    const std::vector<Matrix> W = regressor_samples(p.scenario, rec);
    const PEReport pe = pe_check(W, ep.policy.dt, dc.window);

    const RegressorPath path = sampled_regressor_path(W, ep.policy.dt);
    const double span = static_cast<double>(W.size() - 1) * ep.policy.dt;
    std::vector<double> starts;
    for (double t0 = 0.0; t0 + dc.tau_max <= span + 1e-9; t0 += dc.start_spacing) {
      starts.push_back(t0);
    }
    json j;
    j["scenario"] = p.scenario.name;
    j["seed"] = p.config.seed;
    j["parameters"] = p.scenario.bases->size();
    j["pe"] = {{"window", pe.window}, {"c1", pe.c1}, {"c2", pe.c2}, {"satisfied", pe.satisfied}};
    if (starts.empty()) {
      log << "diag: tau_max exceeds the sampled run; skipping the stability fit\n";
      j["stability"] = nullptr;
    } else {
      const auto samples = sample_transition_norms(path, p.scenario.ref_model, p.scenario.gain,
                                                   starts, dc.tau_max, dc.tau_step, dc.step);
      const StabilityFit fit = fit_exponential_bound(samples);
      j["stability"] = {{"M", fit.M},
                        {"zeta", fit.zeta},
                        {"zeta_stderr", fit.zeta_stderr},
                        {"residual", fit.residual},
                        {"exponential", fit.exponential},
                        {"rho", std::exp(-fit.zeta * ep.policy.dt)},
                        {"samples", samples.size()}};
      log << "zeta " << fit.zeta << " (exponential: " << (fit.exponential ? "yes" : "no") << ")\n";
    }
    write_text(p.dir / "diag.json", dump(j));
    write_timing(p.dir / "timing_diag.json", start);
    log << "PE c1 " << pe.c1 << ", c2 " << pe.c2 << "\n";
    return static_cast<int>(kExitOk);
  }, log);
}

}  // namespace fblpg::cli
