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

#include <cmath>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "fblpg/cli/scenario.hpp"
#include "fblpg/diag.hpp"

namespace fblpg {
namespace {

struct Linear1 {
  ReferenceModel ref = build_reference_model({2});
  GainMatrix gain = design_gain(ref, -1.5);
};

TEST(Reward, Continuous) {
  const Matrix W = Matrix::Identity(2, 2);
  Vector phi(2);
  phi << 3.0, 4.0;
  EXPECT_DOUBLE_EQ(continuous_reward(W, phi), 12.5);
}

TEST(Regressor, ProductOfDecouplingAndJacobian) {
  const Scenario s = cli::build_scenario(cli::default_config(cli::ScenarioKind::kInSpanSynthetic));
  Vector x = s.x0, yd(2), e(4);
  yd << 0.2, -0.1;
  e << 0.1, 0.0, -0.2, 0.05;
  const Matrix W = assemble_W(s.plant, *s.bases, x, yd, e, s.gain);
  const Vector v = yd + s.gain.K * e;
  EXPECT_TRUE(W.isApprox(eval_io(s.plant, x).A * controller_jacobian(*s.bases, x, v), 1e-14));
  // W phi is the output error caused by theta - theta*
  const Vector phi = -s.theta_star->theta;
  const IoData io = eval_io(s.plant, x);
  const Vector u = eval_learned_controller(*s.bases, s.theta0, s.nominal, x, v);
  EXPECT_LT((io.b + io.A * u - v - W * phi).norm(), 1e-10);
}

TEST(Transition, ConstantRegressorMatchesExpm) {
  Linear1 l;
  Matrix W(1, 2);
  W << 0.6, -0.3;
  const RegressorPath path = [&](double) { return W; };
  const Matrix A = ideal_system_matrix(l.ref, l.gain, W);
  ASSERT_EQ(A.rows(), 4);
  const Matrix phi = transition_matrix(path, l.ref, l.gain, 0.0, 2.5, 1e-3);
  EXPECT_LT((phi - (A * 2.5).exp()).norm(), 1e-10);
}

TEST(Transition, Semigroup) {
  Linear1 l;
  const RegressorPath path = [](double t) {
    Matrix W(1, 2);
    W << std::sin(t), std::cos(0.7 * t);
    return W;
  };
  const Matrix a = transition_matrix(path, l.ref, l.gain, 0.0, 1.0, 1e-3);
  const Matrix b = transition_matrix(path, l.ref, l.gain, 1.0, 3.0, 1e-3);
  const Matrix c = transition_matrix(path, l.ref, l.gain, 0.0, 3.0, 1e-3);
  EXPECT_LT((b * a - c).norm(), 1e-10);
}

TEST(Transition, SimulateMatchesTransition) {
  Linear1 l;
  const RegressorPath path = [](double t) {
    Matrix W(1, 2);
    W << 1.0 + 0.5 * std::sin(t), 0.3;
    return W;
  };
  Vector X0(4);
  X0 << 1.0, -0.5, 0.2, 0.7;
  const IdealTrajectory tr = simulate_ideal(path, l.ref, l.gain, X0, 2.0, 1e-3);
  const Matrix phi = transition_matrix(path, l.ref, l.gain, 0.0, 2.0, 1e-3);
  EXPECT_NEAR(tr.t.back(), 2.0, 1e-12);
  EXPECT_LT((tr.X.back() - phi * X0).norm(), 1e-10);
}

TEST(SampledPath, InterpolatesAndClamps) {
  std::vector<Matrix> s = {Matrix::Constant(1, 1, 0.0), Matrix::Constant(1, 1, 2.0)};
  const RegressorPath p = sampled_regressor_path(s, 0.5);
  EXPECT_DOUBLE_EQ(p(0.25)(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p(-1.0)(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(p(9.0)(0, 0), 2.0);
}

TEST(Pe, RankDeficientFails) {
  std::vector<Matrix> w;
  for (int i = 0; i < 400; ++i) {
    Matrix r(1, 2);
    r << std::sin(0.05 * i), 2.0 * std::sin(0.05 * i);
    w.push_back(r);
  }
  const PEReport rep = pe_check(w, 0.05, 10.0);
  EXPECT_FALSE(rep.satisfied);
  EXPECT_GT(rep.c1, 1.0);
}

TEST(Pe, WindowMustFitSpacing) {
  std::vector<Matrix> w(10, Matrix::Identity(1, 1));
  EXPECT_THROW(pe_check(w, 0.1, 0.25), std::invalid_argument);
}

TEST(Fit, HurwitzDecays) {
  Linear1 l;
  std::vector<TransitionSample> samples;
  const Matrix acl = closed_loop_matrix(l.ref, l.gain);
  for (double tau = 0.0; tau <= 10.0; tau += 0.5) {
    samples.push_back({0.0, tau, spectral_norm((acl * tau).exp())});
  }
  const StabilityFit fit = fit_exponential_bound(samples);
  EXPECT_TRUE(fit.exponential);
  EXPECT_GT(fit.zeta, 1.0);
  EXPECT_LT(fit.zeta, 1.5);
  EXPECT_LE(fit.residual, 1e-12);
  for (const TransitionSample& s : samples) {
    EXPECT_LE(s.norm, fit.M * std::exp(-fit.zeta * s.t_to) * (1 + 1e-12));
  }
}

TEST(Fit, FlatIsNotExponential) {
  std::vector<TransitionSample> samples;
  for (double tau = 0.0; tau <= 10.0; tau += 1.0) samples.push_back({0.0, tau, 1.0});
  EXPECT_FALSE(fit_exponential_bound(samples).exponential);
}

TEST(Disturbance, VanishesAtRestWithExactParameters) {
  Scenario s = cli::build_scenario(cli::default_config(cli::ScenarioKind::kInSpanSynthetic));
  for (auto& channel : s.reference.channels) {
    for (auto& term : channel) term.amplitude = 0.0;
  }
  s.x0 = Vector::Zero(4);
  s.theta0 = *s.theta_star;
  EpisodeOptions o;
  o.policy.dt = 0.02;
  o.policy.sigma2 = 0.0;
  o.horizon_steps = 20;
  const AdaptRunRecord r = run_episode(s, o);
  for (const DisturbanceSample& d : measure_disturbances(s, r, o.substeps)) {
    EXPECT_LT(d.delta_e.norm() + d.delta_phi.norm(), 1e-12);
  }
}

TEST(Disturbance, ZeroOrderHoldIsSecondOrder) {
  Scenario s = cli::build_scenario(cli::default_config(cli::ScenarioKind::kInSpanSynthetic));
  s.theta0 = *s.theta_star;
  std::vector<double> dts = {0.04, 0.02}, first;
  for (double dt : dts) {
    EpisodeOptions o;
    o.policy.dt = dt;
    o.policy.sigma2 = 0.0;
    o.horizon_steps = 1;
    const AdaptRunRecord r = run_episode(s, o);
    first.push_back(measure_disturbances(s, r, o.substeps)[0].delta_e.norm());
  }
  EXPECT_NEAR(std::log2(first[0] / first[1]), 2.0, 0.3);
}

TEST(Slope, PowerLaw) {
  EXPECT_NEAR(loglog_slope({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0}), 2.0, 1e-12);
}

TEST(Studies, ScoreHasZeroMean) {
  const Scenario s = cli::build_scenario(cli::default_config(cli::ScenarioKind::kInSpanSynthetic));
  IntervalStudyOptions o;
  o.policy.sigma2 = 0.04;
  o.draws = 20000;
  const IntervalMoments m = score_study(s, s.x0, 0.0, s.theta0, o);
  for (int i = 0; i < m.mean.size(); ++i) EXPECT_LT(std::abs(m.mean(i)), 4.0 * m.stderr_mean(i));
}

TEST(Studies, ConcentrationWorkerInvariant) {
  const cli::ExperimentConfig c = cli::default_config(cli::ScenarioKind::kInSpanSynthetic);
  const Scenario s = cli::build_scenario(c);
  ConcentrationOptions o;
  o.episode = cli::episode_options(c);
  o.trials = 16;
  o.dt_list = {0.04, 0.02};
  o.sigma2_list = {0.01};
  o.eval_time = 0.4;
  o.workers = 1;
  const ConcentrationReport a = concentration_study(s, o);
  o.workers = 3;
  const ConcentrationReport b = concentration_study(s, o);
  ASSERT_EQ(a.cells.size(), 2u);
  EXPECT_EQ(a.cells[1].quantiles, b.cells[1].quantiles);
  EXPECT_EQ(a.slope_vs_dt, b.slope_vs_dt);
}

}  // namespace
}  // namespace fblpg
