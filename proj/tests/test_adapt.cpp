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

#include "fblpg/adapt.hpp"
#include "fblpg/cli/scenario.hpp"

namespace fblpg {
namespace {

Scenario pendulum() {
  return cli::build_scenario(cli::default_config(cli::ScenarioKind::kDoublePendulum));
}

TEST(Noise, TruncatedAtClip) {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    worst = std::max(worst, draw_truncated_noise(rng, 2, 0.3, 2.0).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 0.6);
  EXPECT_GT(worst, 0.55);
}

TEST(Noise, StreamsDifferPerStep) {
  auto a = step_stream(4, 0), b = step_stream(4, 1), c = step_stream(4, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_EQ(x, c());
}

TEST(Baseline, Kinds) {
  Baseline none(BaselineKind::kNone), sum(BaselineKind::kSumOfPast), mean(BaselineKind::kMeanOfPast);
  for (double r : {1.0, 2.0, 6.0}) {
    none.record(r);
    sum.record(r);
    mean.record(r);
  }
  EXPECT_EQ(none.value(), 0.0);
  EXPECT_EQ(sum.value(), 9.0);
  EXPECT_EQ(mean.value(), 3.0);
  EXPECT_EQ(Baseline(BaselineKind::kMeanOfPast).value(), 0.0);
}

TEST(Reward, ZeroOnIdealStep) {
  const ReferenceModel ref = build_reference_model({2});
  const GainMatrix gain = design_gain(ref, -1.0);
  Vector e(2);
  e << 0.4, -0.1;
  const double dt = 0.05;
  const Vector next = e + dt * closed_loop_matrix(ref, gain) * e;
  EXPECT_NEAR(discrete_reward(e, next, ref, gain, dt), 0.0, 1e-28);
  Vector off = next;
  off(1) += 0.01;
  EXPECT_NEAR(discrete_reward(e, off, ref, gain, dt), 0.5 * (0.01 / dt) * (0.01 / dt), 1e-12);
}

TEST(Policy, ValidationAndScore) {
  PolicyConfig c;
  c.sigma2 = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.sigma2 = 0.0;
  EXPECT_NO_THROW(c.validate());
  Matrix jac(1, 2);
  jac << 2.0, -1.0;
  Vector u(1), uh(1);
  u << 0.3;
  uh << 0.1;
  const Vector s = grad_log_policy(u, uh, 0.04, jac);
  EXPECT_NEAR(s(0), 10.0, 1e-12);
  EXPECT_NEAR(s(1), -5.0, 1e-12);
  EXPECT_THROW(grad_log_policy(u, uh, 0.0, jac), std::invalid_argument);
}

TEST(Update, NonFiniteGradientDiverges) {
  LearnedParams p{Vector::Zero(2)};
  Vector g(2);
  g << 1.0, std::nan("");
  EXPECT_THROW(update_params(p, g, 0.1), DivergenceError);
}

TEST(Episode, DeterministicPerSeed) {
  const Scenario s = pendulum();
  EpisodeOptions o;
  o.horizon_steps = 100;
  o.seed = 3;
  const AdaptRunRecord a = run_episode(s, o), b = run_episode(s, o);
  ASSERT_EQ(a.steps.size(), 100u);
  EXPECT_EQ(a.theta_final, b.theta_final);
  o.seed = 4;
  EXPECT_NE(run_episode(s, o).theta_final, a.theta_final);
}

TEST(Episode, NoLearningFreezesParameters) {
  const Scenario s = pendulum();
  EpisodeOptions o;
  o.horizon_steps = 50;
  o.learning = false;
  const AdaptRunRecord r = run_episode(s, o);
  EXPECT_EQ(r.theta_final, s.theta0.theta);
  for (const StepRecord& st : r.steps) EXPECT_EQ(st.w.norm(), 0.0);
}

TEST(Episode, RecordedStepMatchesInterval) {
  const Scenario s = pendulum();
  EpisodeOptions o;
  o.horizon_steps = 6;
  const AdaptRunRecord r = run_episode(s, o);
  const StepRecord& st = r.steps[4];
  const IntervalResult ir = step_interval(s, st.x, st.t, {st.theta}, st.w, o.policy.dt, o.substeps);
  EXPECT_TRUE(ir.x_next.isApprox(r.steps[5].x, 1e-12));
  EXPECT_NEAR(ir.reward, st.reward, 1e-9 * (1.0 + st.reward));
  const GradientSample g = gradient_sample(s, ir, st.x, o.policy.sigma2, st.baseline);
  const Vector expected = st.theta - o.policy.dt * g.estimate;
  EXPECT_TRUE(expected.isApprox(r.steps[5].theta, 1e-9));
}

TEST(Episode, DivergenceIsReported) {
  const Scenario s = pendulum();
  EpisodeOptions o;
  o.horizon_steps = 100;
  o.max_state_norm = 1e-3;
  const AdaptRunRecord r = run_episode(s, o);
  EXPECT_TRUE(r.diverged);
  EXPECT_EQ(r.divergence_step, 0);
}

TEST(Episode, NumericalMeasurementTracksExact) {
  const Scenario s = pendulum();
  EpisodeOptions o;
  o.horizon_steps = 200;
  o.learning = false;
  const AdaptRunRecord exact = run_episode(s, o);
  o.measurement = MeasurementMode::kNumericalDifferentiation;
  const AdaptRunRecord num = run_episode(s, o);
  ASSERT_FALSE(num.diverged);
  EXPECT_LT((num.e_final - exact.e_final).norm(), 0.05 * (1.0 + exact.e_final.norm()));
}

}  // namespace
}  // namespace fblpg
