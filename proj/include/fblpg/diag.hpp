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

// Analysis tools for the adaptation scheme: the regressor W, the idealized
// continuous-time error/parameter system
//
//   d/dt [e; phi] = [[A + B K, B W(t)], [0, -W(t)^T W(t)]] [e; phi],
//
// persistence-of-excitation checks, exponential-envelope fits of its
// transition matrix, per-interval disturbances of the sampled-data loop
// and Monte Carlo studies of the estimator and of the closed loop.

#ifndef FBLPG_DIAG_HPP_
#define FBLPG_DIAG_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "fblpg/adapt.hpp"
#include "fblpg/core.hpp"

namespace fblpg {

// W(x, yd_gamma, e) = A_p(x) * d u_hat / d theta evaluated at
// v = yd_gamma + K e. Columns: A_p beta_k(x) and A_p alpha_k(x) v.
Matrix assemble_W(const PlantModel& plant, const BasisSet& bases,
                  const Vector& x, const Vector& yd_gamma, const Vector& e,
                  const GainMatrix& gain);

// W at every recorded step, using the exact tracking error.
std::vector<Matrix> regressor_samples(const Scenario& s,
                                      const AdaptRunRecord& record);

// 0.5 * |W phi|^2
double continuous_reward(const Matrix& W, const Vector& phi);

using RegressorPath = std::function<Matrix(double t)>;

// Piecewise-linear interpolation of W samples taken every `spacing`
// seconds starting at t = 0. Clamped outside the sampled range.
RegressorPath sampled_regressor_path(std::vector<Matrix> samples, double spacing);

// The block matrix A(t) for a given W.
Matrix ideal_system_matrix(const ReferenceModel& ref, const GainMatrix& gain,
                           const Matrix& W);

struct IdealTrajectory {
  std::vector<double> t;
  std::vector<Vector> X;  // (e, phi) stacked
};

IdealTrajectory simulate_ideal(const RegressorPath& path,
                               const ReferenceModel& ref,
                               const GainMatrix& gain, const Vector& X0,
                               double horizon, double step);

// Phi(t_to, t_from): solution of dPhi/dt = A(t) Phi with Phi(t_from) = I.
Matrix transition_matrix(const RegressorPath& path, const ReferenceModel& ref,
                         const GainMatrix& gain, double t_from, double t_to,
                         double step);

struct PEReport {
  double window = 0.0;
  double c1 = 0.0;  // largest eigenvalue over all windows
  double c2 = 0.0;  // smallest eigenvalue over all windows
  bool satisfied = false;
};

// Trapezoidal integrals of W^T W over every window of length `window`
// sliding by one sample. Samples are `spacing` seconds apart.
PEReport pe_check(const std::vector<Matrix>& W_samples, double spacing,
                  double window);

struct TransitionSample {
  double t_from = 0.0;
  double t_to = 0.0;
  double norm = 0.0;  // spectral norm of Phi(t_to, t_from)
};

struct StabilityFit {
  double M = 1.0;
  double zeta = 0.0;
  double zeta_stderr = 0.0;
  double residual = 0.0;  // max over samples of log|Phi| - log(M e^{-zeta tau}) (<= 0)
  bool exponential = false;
};

// Least-squares slope of log|Phi| against t_to - t_from, then the smallest
// M >= 1 for which no sample exceeds M exp(-zeta tau). Decay is declared only
// when the slope's 95% interval excludes zero.
StabilityFit fit_exponential_bound(const std::vector<TransitionSample>& samples);

// Samples |Phi(t0 + tau, t0)| for every t0 in `starts` and tau on the grid
// 0, tau_step, ..., tau_max.
std::vector<TransitionSample> sample_transition_norms(
    const RegressorPath& path, const ReferenceModel& ref, const GainMatrix& gain,
    const std::vector<double>& starts, double tau_max, double tau_step,
    double step);

struct DisturbanceSample {
  long k = 0;
  Vector delta_e;
  Vector delta_phi;
};

// delta_k = X_{k+1} - Phi(t_{k+1}, t_k) X_k for one interval. The ideal flow
// is integrated jointly with the plant under the held input u_k so that
// W(t) is evaluated along the actual intra-interval trajectory.
DisturbanceSample interval_disturbance(const Scenario& s, long k, double t_k,
                                       const Vector& x_k, const Vector& u_k,
                                       const Vector& theta_k,
                                       const Vector& theta_next,
                                       const Vector& e_next, double dt,
                                       int substeps);

// Requires scenario.theta_star. Uses the record's own dt.
std::vector<DisturbanceSample> measure_disturbances(const Scenario& s,
                                                    const AdaptRunRecord& record,
                                                    int substeps);

// Monte Carlo over the probing noise at a fixed (x_k, t_k, theta_k).
struct IntervalMoments {
  long draws = 0;
  Vector mean;
  Vector stddev;
  Vector stderr_mean;
};

struct GradientStudy {
  IntervalMoments estimate;  // J_k
  Vector target;             // W_k^T W_k phi_k
  double mean_reward = 0.0;
};

struct IntervalStudyOptions {
  PolicyConfig policy;
  int substeps = 10;
  long draws = 100000;
  std::uint64_t seed = 1;
  // Averages each draw w with its mirror -w; the mean is unchanged.
  bool antithetic = false;
  double baseline = 0.0;  // constant S_k (independent of u_k)
};

GradientStudy gradient_study(const Scenario& s, const Vector& x, double t,
                             const LearnedParams& params,
                             const IntervalStudyOptions& opt);

// Score function jac^T w / sigma2 only (no simulation needed).
IntervalMoments score_study(const Scenario& s, const Vector& x, double t,
                            const LearnedParams& params,
                            const IntervalStudyOptions& opt);

// Moments of (delta_e, delta_phi) stacked, with theta_{k+1} produced by the
// estimator from each draw.
IntervalMoments disturbance_study(const Scenario& s, const Vector& x, double t,
                                  const LearnedParams& params,
                                  const IntervalStudyOptions& opt);

struct ConcentrationCell {
  double dt = 0.0;
  double sigma2 = 0.0;
  long trials = 0;
  long diverged = 0;
  long eval_step = 0;
  std::vector<double> lambdas;
  std::vector<double> quantiles;  // (1 - lambda) quantile of |X_k - mean X_k|
};

struct ConcentrationReport {
  std::vector<ConcentrationCell> cells;
  double confidence_lambda = 0.05;  // lambda used for the scaling fits
  // log-log slopes of the (1 - confidence_lambda) quantile
  double slope_vs_scale = 0.0;   // against sqrt(dt / sigma2), all cells
  double slope_vs_dt = 0.0;      // against dt at the first sigma2
  double slope_vs_lambda = 0.0;  // against ln(2 / lambda), first cell
  // quantile(sigma2) / quantile(2 sigma2) at the first dt, when swept
  double sigma_doubling_ratio = 0.0;
};

struct ConcentrationOptions {
  EpisodeOptions episode;  // policy.dt / sigma2 are overridden per cell
  long trials = 200;
  std::vector<double> dt_list;
  std::vector<double> sigma2_list;
  std::vector<double> lambda_list = {0.3, 0.1, 0.03};
  double confidence_lambda = 0.05;
  double eval_time = 1.0;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency
};

ConcentrationReport concentration_study(const Scenario& s,
                                        const ConcentrationOptions& opt);

struct BiasRow {
  double dt = 0.0;
  long trials = 0;
  long diverged = 0;
  double offset = 0.0;  // |mean over trials and tail window of X_k|
  double offset_stderr = 0.0;
  double transient_rate = 0.0;  // fitted decay rate of |E X_k| (1/s)
};

struct BiasReport {
  std::vector<BiasRow> rows;
  double slope = 0.0;        // log-log slope of offset against dt
  double coefficient = 0.0;  // least-squares c in offset ~= c * dt
};

struct BiasOptions {
  EpisodeOptions episode;
  long trials = 200;
  std::vector<double> dt_list;
  double horizon_s = 20.0;
  double tail_fraction = 0.25;
  std::uint64_t seed = 1;
  int workers = 0;
};

BiasReport bias_study(const Scenario& s, const BiasOptions& opt);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fblpg

#endif  // FBLPG_DIAG_HPP_
