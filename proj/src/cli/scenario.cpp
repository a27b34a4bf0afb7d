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

#include "fblpg/cli/scenario.hpp"

#include <cmath>
#include <random>

#include "fblpg/inspan.hpp"

namespace fblpg::cli {

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

BasisSet make_bases(const ExperimentConfig& c, int state_dim, int io_dim) {
  if (c.basis.kind == BasisKind::kPolynomial) {
    return BasisSet::polynomial(state_dim, c.basis.degree, io_dim);
  }
  return build_rbf_grid({to_vector(c.basis.lower), to_vector(c.basis.upper)},
                        c.basis.counts, c.basis.width_rule, io_dim, c.basis.amplitude);
}

LearnedParams random_theta(const BasisSet& bases, const InSpanConfig& cfg) {
  std::mt19937_64 rng(cfg.theta_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  LearnedParams p = LearnedParams::zeros(bases);
  for (int i = 0; i < bases.size(); ++i) {
    p.theta(i) = (i < bases.k1() ? cfg.theta1_scale : cfg.theta2_scale) * normal(rng);
  }
  return p;
}

// Probe states and inputs spread over the basis box.
void span_probes(const ExperimentConfig& c, Matrix& states, Matrix& inputs) {
  const int probes = 64;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  states.resize(probes, 4);
  inputs.resize(probes, 2);
  for (int i = 0; i < probes; ++i) {
    for (int d = 0; d < 4; ++d) {
      const double mid = 0.5 * (c.basis.lower[d] + c.basis.upper[d]);
      const double half = 0.5 * (c.basis.upper[d] - c.basis.lower[d]);
      states(i, d) = mid + half * unit(rng);
    }
    for (int j = 0; j < 2; ++j) inputs(i, j) = 2.0 * unit(rng);
  }
}

}  // namespace

Scenario build_scenario(const ExperimentConfig& c) {
  const RelativeDegree gamma = {2, 2};
  Scenario s{scenario_name(c.scenario),
             make_double_pendulum(c.plant),
             make_double_pendulum(c.plant.scaled(c.nominal_scale)),
             nullptr,
             build_reference_model(gamma),
             design_gain(build_reference_model(gamma), c.control.pole),
             c.reference,
             Vector::Zero(4),
             {},
             std::nullopt};

  switch (c.scenario) {
    case ScenarioKind::kDoublePendulum:
      s.bases = std::make_shared<const BasisSet>(make_bases(c, 4, 2));
      break;
    case ScenarioKind::kInSpanSynthetic: {
      s.nominal = make_linear_plant(gamma, to_matrix(c.linear.L_nominal),
                                    to_matrix(c.linear.D_nominal));
      s.bases = std::make_shared<const BasisSet>(make_bases(c, 4, 2));
      s.theta_star = random_theta(*s.bases, c.inspan);
      s.plant = make_inspan_plant({s.nominal, s.bases, *s.theta_star});
      break;
    }
    case ScenarioKind::kLinearTest: {
      s.plant = make_linear_plant(gamma, to_matrix(c.linear.L_true), to_matrix(c.linear.D_true));
      s.nominal = make_linear_plant(gamma, to_matrix(c.linear.L_nominal),
                                    to_matrix(c.linear.D_nominal));
      s.bases = std::make_shared<const BasisSet>(make_bases(c, 4, 2));
      Matrix states, inputs;
      span_probes(c, states, inputs);
      const SpanProjection proj = project_onto_span(*s.bases, s.plant, s.nominal, states, inputs);
      if (proj.residual <= 1e-9) s.theta_star = proj.theta;
      break;
    }
  }

  s.theta0 = LearnedParams::zeros(*s.bases);
  switch (c.initial.mode) {
    case InitialMode::kRest:
      s.x0 = Vector::Zero(s.plant.state_dim());
      break;
    case InitialMode::kOnReference:
      s.x0 = s.plant.state_from_chain(sample_reference(s.reference, gamma, 0.0).xi_d);
      break;
    case InitialMode::kExplicit:
      s.x0 = to_vector(c.initial.x);
      break;
  }
  return s;
}

EpisodeOptions episode_options(const ExperimentConfig& c) {
  EpisodeOptions o;
  o.policy.dt = c.control.dt;
  o.policy.sigma2 = c.control.sigma2;
  o.policy.noise_clip = c.control.noise_clip;
  o.baseline = c.control.baseline;
  o.horizon_steps = std::lround(c.control.horizon_s / c.control.dt);
  o.substeps = c.control.substeps;
  o.measurement = c.control.measurement;
  o.seed = c.seed;
  return o;
}

}  // namespace fblpg::cli
