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

#include "fblpg/cli/artifact.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fblpg::cli {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_run_csv(std::ostream& out, const AdaptRunRecord& record) {
  const Eigen::Index n = record.steps.empty() ? 0 : record.steps.front().e.size();
  const Eigen::Index q = record.steps.empty() ? 0 : record.steps.front().u.size();
  out << "k,t,e_norm";
  for (Eigen::Index i = 0; i < n; ++i) out << ",e_" << i;
  out << ",R,theta_norm,phi_norm";
  for (Eigen::Index i = 0; i < q; ++i) out << ",u_" << i;
  for (Eigen::Index i = 0; i < q; ++i) out << ",w_" << i;
  out << "\n";
  for (const StepRecord& s : record.steps) {
    out << s.k << ',' << format_double(s.t) << ',' << format_double(s.e.norm());
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(s.e(i));
    out << ',' << format_double(s.reward) << ',' << format_double(s.theta.norm()) << ',';
    if (s.phi.size()) out << format_double(s.phi.norm());
    for (Eigen::Index i = 0; i < q; ++i) out << ',' << format_double(s.u(i));
    for (Eigen::Index i = 0; i < q; ++i) out << ',' << format_double(s.w(i));
    out << "\n";
  }
}

ErrorStats error_stats(const AdaptRunRecord& record, long begin, long end) {
  ErrorStats st;
  end = std::min<long>(end, static_cast<long>(record.steps.size()));
  for (long k = std::max(0L, begin); k < end; ++k) {
    const double e = record.steps[static_cast<std::size_t>(k)].e.norm();
    st.mean += e;
    st.max = std::max(st.max, e);
    ++st.steps;
  }
  if (st.steps > 0) st.mean /= static_cast<double>(st.steps);
  return st;
}

nlohmann::json run_summary(const Scenario& scenario, const EpisodeOptions& options,
                           const AdaptRunRecord& record) {
  nlohmann::json j;
  j["scenario"] = scenario.name;
  j["seed"] = record.seed;
  j["learning"] = options.learning;
  j["dt"] = options.policy.dt;
  j["sigma2"] = options.learning ? options.policy.sigma2 : 0.0;
  j["parameters"] = scenario.bases->size();
  j["features"] = scenario.bases->feature_count();
  j["planned_steps"] = options.horizon_steps;
  j["recorded_steps"] = record.steps.size();
  j["diverged"] = record.diverged;
  j["divergence_step"] = record.divergence_step;
  j["divergence_reason"] = record.divergence_reason;

  const long n = options.horizon_steps;
  const ErrorStats all = error_stats(record, 0, n);
  const ErrorStats last = error_stats(record, n - n / 4, n);
  j["e_norm"] = {{"mean", all.mean},
                 {"max", all.max},
                 {"final_quarter_mean", last.mean},
                 {"final", record.e_final.norm()}};
  j["theta_norm_final"] = record.theta_final.norm();
  if (scenario.theta_star) {
    j["phi_norm_initial"] = (scenario.theta0.theta - scenario.theta_star->theta).norm();
    j["phi_norm_final"] = (record.theta_final - scenario.theta_star->theta).norm();
  }
  j["version"] = FBLPG_VERSION;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace fblpg::cli
