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

// Sampled-data policy-gradient adaptation of the learned linearizing
// controller.
//
// Per interval [t_k, t_k + dt):
//   u_k      = u_hat(theta_k, x_k, yd_gamma_k + K e_k) + w_k,  w_k ~ N(0, s2 I)
//   R_k      = 0.5 * |(e_{k+1} - Abar e_k) / dt|^2,  Abar = I + dt (A + B K)
//   J_k      = (R_k - S_k) * jac^T (u_k - u_hat) / s2
//   theta_k+1 = theta_k - dt * J_k

#ifndef FBLPG_ADAPT_HPP_
#define FBLPG_ADAPT_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fblpg/approx.hpp"
#include "fblpg/core.hpp"
#include "fblpg/fbl.hpp"
#include "fblpg/plant.hpp"
#include "fblpg/refgen.hpp"

namespace fblpg {

struct PolicyConfig {
  double sigma2 = 0.1;      // probing-noise variance per channel
  double dt = 0.05;         // sampling interval (s)
  double noise_clip = 5.0;  // noise truncated at noise_clip * sigma

  // sigma2 == 0 is accepted and means a deterministic policy.
  void validate() const;
};

enum class BaselineKind { kNone, kSumOfPast, kMeanOfPast };

// S_k built only from rewards R_0 .. R_{k-1}.
class Baseline {
 public:
  explicit Baseline(BaselineKind kind = BaselineKind::kNone) : kind_(kind) {}
  BaselineKind kind() const { return kind_; }
  double value() const;
  void record(double reward);

 private:
  BaselineKind kind_;
  double sum_ = 0.0;
  long count_ = 0;
};

struct GradientSample {
  double reward = 0.0;
  double baseline_value = 0.0;
  Vector score;
  Vector estimate;
};

struct PolicySample {
  Vector v;      // yd_gamma + K e
  Vector u_hat;  // mean of the policy
  Vector w;      // applied noise
  Vector u;      // u_hat + w
};

// Independent N(0, sigma^2) draws, each redrawn until |w_i| <= clip * sigma.
Vector draw_truncated_noise(std::mt19937_64& rng, int dim, double sigma,
                            double clip);

// Noise substream for step k of a run with master seed `seed`.
std::mt19937_64 step_stream(std::uint64_t seed, long k);

PolicySample sample_policy(const BasisSet& bases, const LearnedParams& params,
                           const PlantModel& nominal, const Vector& x,
                           const ReferenceSample& ref_k, const Vector& e,
                           const GainMatrix& gain, const PolicyConfig& cfg,
                           std::mt19937_64& rng);

double discrete_reward(const Vector& e_k, const Vector& e_next,
                       const ReferenceModel& ref, const GainMatrix& gain,
                       double dt);

// jac^T (u - u_hat) / sigma2.
Vector grad_log_policy(const Vector& u, const Vector& u_hat, double sigma2,
                       const Matrix& jac);

Vector estimate_gradient(double reward, double baseline, const Vector& score);

// theta - dt * grad; throws DivergenceError when grad is not finite.
LearnedParams update_params(const LearnedParams& params, const Vector& grad,
                            double dt);

// Everything a learning run needs besides the run options.
struct Scenario {
  std::string name;
  PlantModel plant;
  PlantModel nominal;
  std::shared_ptr<const BasisSet> bases;
  ReferenceModel ref_model;
  GainMatrix gain;
  SinusoidSum reference;
  Vector x0;
  LearnedParams theta0;
  std::optional<LearnedParams> theta_star;
};

// Exact tracking error xi(x) - xi_d(t) for the scenario's reference.
Vector exact_error(const Scenario& s, const Vector& x, double t);

// One sampled-data interval from (x, t) with parameters theta and a given
// noise realization w.
struct IntervalResult {
  ReferenceSample ref_k;
  Vector e_k;
  Vector v;
  Vector u_hat;
  Vector u;
  Vector x_next;
  Vector e_next;
  double reward = 0.0;
};
IntervalResult step_interval(const Scenario& s, const Vector& x, double t,
                             const LearnedParams& params, const Vector& w,
                             double dt, int substeps);

// Score and estimate for an interval already simulated with noise w.
GradientSample gradient_sample(const Scenario& s, const IntervalResult& r,
                               const Vector& x, double sigma2,
                               double baseline_value);

enum class MeasurementMode { kExact, kNumericalDifferentiation };

struct EpisodeOptions {
  PolicyConfig policy;
  BaselineKind baseline = BaselineKind::kMeanOfPast;
  long horizon_steps = 1200;
  int substeps = 10;
  // false: parameters frozen and no probing noise applied.
  bool learning = true;
  MeasurementMode measurement = MeasurementMode::kExact;
  std::uint64_t seed = 0;
  double max_state_norm = 1e6;
};

struct StepRecord {
  long k = 0;
  double t = 0.0;
  Vector x;
  Vector xi;
  Vector e;
  Vector u;
  Vector w;
  double reward = 0.0;
  double baseline = 0.0;
  Vector theta;  // theta_k, before the update
  Vector phi;    // theta_k - theta*, empty when theta* is unknown
};

struct AdaptRunRecord {
  std::vector<StepRecord> steps;
  // State after the last completed step.
  Vector x_final;
  Vector e_final;
  Vector theta_final;
  bool diverged = false;
  long divergence_step = -1;
  std::string divergence_reason;
  std::uint64_t seed = 0;
  double dt = 0.0;
};

AdaptRunRecord run_episode(const Scenario& scenario,
                           const EpisodeOptions& options);

}  // namespace fblpg

#endif  // FBLPG_ADAPT_HPP_
