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

#include "fblpg/diag.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "fblpg/ode.hpp"

namespace fblpg {

namespace {

void parallel_for(long n, int workers, const std::function<void(long)>& body) {
  int count = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  count = std::clamp<long>(count, 1, std::max<long>(n, 1));
  if (count == 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (long i = next++; i < n; i = next++) body(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::uint64_t trial_seed(std::uint64_t seed, long i) {
  return step_stream(seed, i)();
}

Vector stacked_state(const Vector& e, const Vector& phi) {
  Vector X(e.size() + phi.size());
  X << e, phi;
  return X;
}

IntervalMoments moments_of(const std::vector<Vector>& draws) {
  IntervalMoments m;
  m.draws = static_cast<long>(draws.size());
  if (draws.empty()) return m;
  const Eigen::Index d = draws.front().size();
  m.mean = Vector::Zero(d);
  for (const Vector& v : draws) m.mean += v;
  m.mean /= static_cast<double>(m.draws);
  Vector var = Vector::Zero(d);
  for (const Vector& v : draws) var += (v - m.mean).cwiseAbs2();
  var /= std::max<double>(1.0, static_cast<double>(m.draws - 1));
  m.stddev = var.cwiseSqrt();
  m.stderr_mean = m.stddev / std::sqrt(static_cast<double>(m.draws));
  return m;
}

}  // namespace

Matrix assemble_W(const PlantModel& plant, const BasisSet& bases,
                  const Vector& x, const Vector& yd_gamma, const Vector& e,
                  const GainMatrix& gain) {
  require_size(yd_gamma, plant.io_dim(), "assemble_W yd_gamma");
  require_size(e, gain.K.cols(), "assemble_W e");
  const Vector v = yd_gamma + gain.K * e;
  return eval_io(plant, x).A * controller_jacobian(bases, x, v);
}

std::vector<Matrix> regressor_samples(const Scenario& s,
                                      const AdaptRunRecord& record) {
  std::vector<Matrix> out;
  out.reserve(record.steps.size());
  for (const StepRecord& st : record.steps) {
    const ReferenceSample r = sample_reference(s.reference, s.ref_model.gamma, st.t);
    out.push_back(assemble_W(s.plant, *s.bases, st.x, r.yd_gamma,
                             exact_error(s, st.x, st.t), s.gain));
  }
  return out;
}

double continuous_reward(const Matrix& W, const Vector& phi) {
  require_size(phi, W.cols(), "continuous_reward");
  return 0.5 * (W * phi).squaredNorm();
}

RegressorPath sampled_regressor_path(std::vector<Matrix> samples, double spacing) {
  if (samples.empty()) throw std::invalid_argument("sampled_regressor_path: no samples");
  if (!(spacing > 0.0)) throw std::invalid_argument("sampled_regressor_path: spacing must be > 0");
  auto data = std::make_shared<const std::vector<Matrix>>(std::move(samples));
  return [data, spacing](double t) -> Matrix {
    const auto& w = *data;
    const double s = std::clamp(t / spacing, 0.0, static_cast<double>(w.size() - 1));
    const auto i = static_cast<std::size_t>(std::floor(s));
    if (i + 1 >= w.size()) return w.back();
    const double a = s - static_cast<double>(i);
    return (1.0 - a) * w[i] + a * w[i + 1];
  };
}

Matrix ideal_system_matrix(const ReferenceModel& ref, const GainMatrix& gain,
                           const Matrix& W) {
  if (W.rows() != ref.io_dim()) throw DimensionError("ideal_system_matrix: W rows");
  const Eigen::Index ne = ref.chain_dim();
  const Eigen::Index np = W.cols();
  Matrix a = Matrix::Zero(ne + np, ne + np);
  a.topLeftCorner(ne, ne) = closed_loop_matrix(ref, gain);
  a.topRightCorner(ne, np) = ref.B * W;
  a.bottomRightCorner(np, np) = -W.transpose() * W;
  return a;
}

IdealTrajectory simulate_ideal(const RegressorPath& path,
                               const ReferenceModel& ref,
                               const GainMatrix& gain, const Vector& X0,
                               double horizon, double step) {
  if (!(step > 0.0) || !(horizon >= 0.0)) {
    throw std::invalid_argument("simulate_ideal: step must be > 0 and horizon >= 0");
  }
  auto rhs = [&](double t, const Vector& X) -> Vector {
    const Matrix W = path(t);
    require_size(X, ref.chain_dim() + W.cols(), "simulate_ideal X");
    const Eigen::Index ne = ref.chain_dim();
    Vector d(X.size());
    const Vector wphi = W * X.tail(W.cols());
    d.head(ne) = closed_loop_matrix(ref, gain) * X.head(ne) + ref.B * wphi;
    d.tail(W.cols()) = -W.transpose() * wphi;
    return d;
  };
  const long steps = std::lround(horizon / step);
  IdealTrajectory out;
  out.t.reserve(static_cast<std::size_t>(steps + 1));
  out.X.reserve(static_cast<std::size_t>(steps + 1));
  Vector X = X0;
  out.t.push_back(0.0);
  out.X.push_back(X);
  for (long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * step;
    X = rk4_step(rhs, t, X, step);
    if (!X.allFinite()) throw DivergenceError("simulate_ideal: non-finite state", i);
    out.t.push_back(t + step);
    out.X.push_back(X);
  }
  return out;
}

Matrix transition_matrix(const RegressorPath& path, const ReferenceModel& ref,
                         const GainMatrix& gain, double t_from, double t_to,
                         double step) {
  if (t_to < t_from) throw std::invalid_argument("transition_matrix: t_to < t_from");
  if (!(step > 0.0)) throw std::invalid_argument("transition_matrix: step must be > 0");
  const Eigen::Index dim = ref.chain_dim() + path(t_from).cols();
  Matrix phi = Matrix::Identity(dim, dim);
  if (t_to == t_from) return phi;
  const long steps = std::max(1L, std::lround(std::ceil((t_to - t_from) / step - 1e-9)));
  const double h = (t_to - t_from) / static_cast<double>(steps);
  auto rhs = [&](double t, const Matrix& y) -> Matrix {
    return ideal_system_matrix(ref, gain, path(t)) * y;
  };
  for (long i = 0; i < steps; ++i) {
    phi = rk4_step(rhs, t_from + static_cast<double>(i) * h, phi, h);
    if (!phi.allFinite()) throw DivergenceError("transition_matrix: non-finite entries", i);
  }
  return phi;
}

PEReport pe_check(const std::vector<Matrix>& W_samples, double spacing,
                  double window) {
  if (!(spacing > 0.0) || !(window > 0.0)) {
    throw std::invalid_argument("pe_check: spacing and window must be > 0");
  }
  const long per_window = std::lround(window / spacing);
  if (per_window < 1 || std::abs(per_window * spacing - window) > 1e-9 * window + 1e-12) {
    throw std::invalid_argument("pe_check: window must be a multiple of the sample spacing");
  }
  if (static_cast<long>(W_samples.size()) < per_window + 1) {
    throw std::invalid_argument("pe_check: series is shorter than the window");
  }
  std::vector<Matrix> gram;
  gram.reserve(W_samples.size());
  for (const Matrix& w : W_samples) gram.push_back(w.transpose() * w);

  PEReport report;
  report.window = window;
  report.c1 = 0.0;
  report.c2 = std::numeric_limits<double>::infinity();
  Matrix integral = Matrix::Zero(gram[0].rows(), gram[0].cols());
  for (long i = 0; i < per_window; ++i) integral += 0.5 * spacing * (gram[i] + gram[i + 1]);
  const long windows = static_cast<long>(gram.size()) - per_window;
  for (long s = 0; s < windows; ++s) {
    if (s > 0) {
      integral -= 0.5 * spacing * (gram[s - 1] + gram[s]);
      integral += 0.5 * spacing * (gram[s + per_window - 1] + gram[s + per_window]);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (integral + integral.transpose()),
                                              Eigen::EigenvaluesOnly);
    report.c1 = std::max(report.c1, eig.eigenvalues().maxCoeff());
    report.c2 = std::min(report.c2, eig.eigenvalues().minCoeff());
  }
  report.c2 = std::max(report.c2, 0.0);
  const double tol = 1e-10 * std::max(1.0, report.c1);
  report.satisfied = report.c2 > tol;
  return report;
}

StabilityFit fit_exponential_bound(const std::vector<TransitionSample>& samples) {
  const std::size_t n = samples.size();
  if (n < 3) throw std::invalid_argument("fit_exponential_bound: need at least 3 samples");
  std::vector<double> tau(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    tau[i] = samples[i].t_to - samples[i].t_from;
    if (tau[i] < 0.0) throw std::invalid_argument("fit_exponential_bound: t_to < t_from");
    if (!(samples[i].norm > 0.0)) throw std::invalid_argument("fit_exponential_bound: norm must be > 0");
    y[i] = std::log(samples[i].norm);
  }
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tm += tau[i];
    ym += y[i];
  }
  tm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (tau[i] - tm) * (tau[i] - tm);
    sxy += (tau[i] - tm) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponential_bound: degenerate grid");
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (ym + slope * (tau[i] - tm));
    ssr += r * r;
  }
  StabilityFit fit;
  fit.zeta = -slope;
  fit.zeta_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  double log_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) log_m = std::max(log_m, y[i] + fit.zeta * tau[i]);
  fit.M = std::exp(log_m);
  fit.residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    fit.residual = std::max(fit.residual, y[i] - (log_m - fit.zeta * tau[i]));
  }
  double tau_max = 0.0;
  for (double t : tau) tau_max = std::max(tau_max, t);
  // a decay too small to register over the sampled horizon is not decay
  fit.exponential = fit.zeta - 1.96 * fit.zeta_stderr > 0.0 && fit.zeta * tau_max > 1e-6;
  return fit;
}

std::vector<TransitionSample> sample_transition_norms(
    const RegressorPath& path, const ReferenceModel& ref, const GainMatrix& gain,
    const std::vector<double>& starts, double tau_max, double tau_step,
    double step) {
  if (!(tau_step > 0.0) || !(tau_max >= 0.0)) {
    throw std::invalid_argument("sample_transition_norms: bad tau grid");
  }
  const long count = std::lround(tau_max / tau_step);
  std::vector<TransitionSample> out;
  for (double t0 : starts) {
    Matrix phi = Matrix::Identity(0, 0);
    double t = t0;
    for (long i = 0; i <= count; ++i) {
      const double t1 = t0 + static_cast<double>(i) * tau_step;
      const Matrix inc = transition_matrix(path, ref, gain, t, t1, step);
      phi = phi.size() == 0 ? inc : Matrix(inc * phi);
      t = t1;
      out.push_back({t0, t1, spectral_norm(phi)});
    }
  }
  return out;
}

DisturbanceSample interval_disturbance(const Scenario& s, long k, double t_k,
                                       const Vector& x_k, const Vector& u_k,
                                       const Vector& theta_k,
                                       const Vector& theta_next,
                                       const Vector& e_next, double dt,
                                       int substeps) {
  if (!s.theta_star) throw std::invalid_argument("interval_disturbance: theta* is unknown");
  if (substeps < 1) throw std::invalid_argument("interval_disturbance: substeps < 1");
  const int n = s.plant.state_dim();
  const Eigen::Index ne = s.ref_model.chain_dim();
  const Vector& star = s.theta_star->theta;
  const Vector X_k = stacked_state(exact_error(s, x_k, t_k), theta_k - star);

  const Matrix acl = closed_loop_matrix(s.ref_model, s.gain);
  auto rhs = [&](double t, const Vector& z) -> Vector {
    const Vector x = z.head(n);
    const ReferenceSample r = sample_reference(s.reference, s.ref_model.gamma, t);
    const Vector e = tracking_error(s.plant.output_chain(x), r.xi_d);
    const Matrix W = assemble_W(s.plant, *s.bases, x, r.yd_gamma, e, s.gain);
    const Vector X = z.tail(z.size() - n);
    const Vector wphi = W * X.tail(W.cols());
    Vector d(z.size());
    d.head(n) = eval_dynamics(s.plant, x, u_k);
    d.segment(n, ne) = acl * X.head(ne) + s.ref_model.B * wphi;
    d.tail(W.cols()) = -W.transpose() * wphi;
    return d;
  };
  Vector z(n + X_k.size());
  z << x_k, X_k;
  z = rk4_integrate(rhs, t_k, z, dt / substeps, substeps);

  const Vector X_next = stacked_state(e_next, theta_next - star);
  const Vector delta = X_next - z.tail(X_k.size());
  DisturbanceSample out;
  out.k = k;
  out.delta_e = delta.head(ne);
  out.delta_phi = delta.tail(delta.size() - ne);
  return out;
}

std::vector<DisturbanceSample> measure_disturbances(const Scenario& s,
                                                    const AdaptRunRecord& record,
                                                    int substeps) {
  if (!s.theta_star) throw std::invalid_argument("measure_disturbances: theta* is unknown");
  std::vector<DisturbanceSample> out;
  const std::size_t n = record.steps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const StepRecord& st = record.steps[i];
    const bool last = i + 1 == n;
    const Vector& theta_next = last ? record.theta_final : record.steps[i + 1].theta;
    const Vector e_next = last ? exact_error(s, record.x_final, st.t + record.dt)
                               : exact_error(s, record.steps[i + 1].x, st.t + record.dt);
    out.push_back(interval_disturbance(s, st.k, st.t, st.x, st.u, st.theta, theta_next,
                                       e_next, record.dt, substeps));
  }
  return out;
}

namespace {

// Noise draws for an interval study; antithetic pairs share a magnitude.
std::vector<Vector> study_noise(const IntervalStudyOptions& opt, int dim) {
  const double sigma = std::sqrt(opt.policy.sigma2);
  std::vector<Vector> w;
  w.reserve(static_cast<std::size_t>(opt.draws) * (opt.antithetic ? 2 : 1));
  std::mt19937_64 rng(opt.seed);
  for (long i = 0; i < opt.draws; ++i) {
    w.push_back(draw_truncated_noise(rng, dim, sigma, opt.policy.noise_clip));
    if (opt.antithetic) w.push_back(-w.back());
  }
  return w;
}

void check_study(const IntervalStudyOptions& opt) {
  opt.policy.validate();
  if (!(opt.policy.sigma2 > 0.0)) throw std::invalid_argument("interval study: sigma2 must be > 0");
  if (opt.draws < 2) throw std::invalid_argument("interval study: need at least 2 draws");
}

}  // namespace

GradientStudy gradient_study(const Scenario& s, const Vector& x, double t,
                             const LearnedParams& params,
                             const IntervalStudyOptions& opt) {
  check_study(opt);
  const std::vector<Vector> noise = study_noise(opt, s.plant.io_dim());
  std::vector<Vector> est;
  est.reserve(opt.draws);
  double reward_sum = 0.0;
  for (std::size_t i = 0; i < noise.size(); ++i) {
    const IntervalResult r = step_interval(s, x, t, params, noise[i], opt.policy.dt, opt.substeps);
    const GradientSample g = gradient_sample(s, r, x, opt.policy.sigma2, opt.baseline);
    reward_sum += r.reward;
    if (opt.antithetic && (i % 2 == 1)) {
      est.back() = 0.5 * (est.back() + g.estimate);
    } else {
      est.push_back(g.estimate);
    }
  }
  GradientStudy out;
  out.estimate = moments_of(est);
  out.mean_reward = reward_sum / static_cast<double>(noise.size());
  if (s.theta_star) {
    const ReferenceSample ref = sample_reference(s.reference, s.ref_model.gamma, t);
    const Matrix W = assemble_W(s.plant, *s.bases, x, ref.yd_gamma,
                                exact_error(s, x, t), s.gain);
    out.target = W.transpose() * W * (params.theta - s.theta_star->theta);
  }
  return out;
}

IntervalMoments score_study(const Scenario& s, const Vector& x, double t,
                            const LearnedParams& params,
                            const IntervalStudyOptions& opt) {
  check_study(opt);
  const ReferenceSample ref = sample_reference(s.reference, s.ref_model.gamma, t);
  const Vector v = ref.yd_gamma + s.gain.K * exact_error(s, x, t);
  const Vector u_hat = eval_learned_controller(*s.bases, params, s.nominal, x, v);
  const Matrix jac = controller_jacobian(*s.bases, x, v);
  IntervalStudyOptions plain = opt;
  plain.antithetic = false;
  std::vector<Vector> scores;
  for (const Vector& w : study_noise(plain, s.plant.io_dim())) {
    scores.push_back(grad_log_policy(u_hat + w, u_hat, opt.policy.sigma2, jac));
  }
  return moments_of(scores);
}

IntervalMoments disturbance_study(const Scenario& s, const Vector& x, double t,
                                  const LearnedParams& params,
                                  const IntervalStudyOptions& opt) {
  check_study(opt);
  IntervalStudyOptions plain = opt;
  plain.antithetic = false;
  std::vector<Vector> deltas;
  for (const Vector& w : study_noise(plain, s.plant.io_dim())) {
    const IntervalResult r = step_interval(s, x, t, params, w, opt.policy.dt, opt.substeps);
    const GradientSample g = gradient_sample(s, r, x, opt.policy.sigma2, opt.baseline);
    const LearnedParams next = update_params(params, g.estimate, opt.policy.dt);
    const DisturbanceSample d = interval_disturbance(
        s, 0, t, x, r.u, params.theta, next.theta, r.e_next, opt.policy.dt, opt.substeps);
    deltas.push_back(stacked_state(d.delta_e, d.delta_phi));
  }
  return moments_of(deltas);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("loglog_slope: values must be positive");
    }
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("loglog_slope: x values are identical");
  return sxy / sxx;
}

ConcentrationReport concentration_study(const Scenario& s,
                                        const ConcentrationOptions& opt) {
  if (opt.trials < 2) throw std::invalid_argument("concentration_study: need at least 2 trials");
  if (!(opt.eval_time >= 0.0)) throw std::invalid_argument("concentration_study: eval_time < 0");
  std::vector<double> dts = opt.dt_list;
  std::vector<double> sigmas = opt.sigma2_list;
  if (dts.empty()) dts.push_back(opt.episode.policy.dt);
  if (sigmas.empty()) sigmas.push_back(opt.episode.policy.sigma2);
  std::vector<double> lambdas = opt.lambda_list;
  for (double l : lambdas) {
    if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("concentration_study: lambda outside (0, 1)");
  }

  ConcentrationReport report;
  report.confidence_lambda = opt.confidence_lambda;
  std::vector<double> conf_q;
  for (double dt : dts) {
    for (double sigma2 : sigmas) {
      ConcentrationCell cell;
      cell.dt = dt;
      cell.sigma2 = sigma2;
      cell.trials = opt.trials;
      cell.lambdas = lambdas;
      cell.eval_step = std::lround(opt.eval_time / dt);

      EpisodeOptions ep = opt.episode;
      ep.policy.dt = dt;
      ep.policy.sigma2 = sigma2;
      ep.horizon_steps = cell.eval_step + 1;
      std::vector<Vector> states(static_cast<std::size_t>(opt.trials));
      std::vector<char> ok(static_cast<std::size_t>(opt.trials), 0);
      parallel_for(opt.trials, opt.workers, [&](long i) {
        EpisodeOptions mine = ep;
        mine.seed = trial_seed(opt.seed, i);
        const AdaptRunRecord rec = run_episode(s, mine);
        if (rec.diverged) return;
        const StepRecord& st = rec.steps.at(static_cast<std::size_t>(cell.eval_step));
        states[i] = st.phi.size() ? stacked_state(st.e, st.phi) : st.e;
        ok[i] = 1;
      });
      std::vector<Vector> kept;
      for (long i = 0; i < opt.trials; ++i) {
        if (ok[i]) kept.push_back(states[i]);
        else ++cell.diverged;
      }
      if (kept.size() < 2) throw DivergenceError("concentration_study: too few finite trials", -1);
      Vector mean = Vector::Zero(kept.front().size());
      for (const Vector& X : kept) mean += X;
      mean /= static_cast<double>(kept.size());
      std::vector<double> dev;
      for (const Vector& X : kept) dev.push_back((X - mean).norm());
      for (double l : lambdas) cell.quantiles.push_back(quantile(dev, 1.0 - l));
      conf_q.push_back(quantile(dev, 1.0 - opt.confidence_lambda));
      report.cells.push_back(std::move(cell));
    }
  }

  if (report.cells.size() >= 2) {
    std::vector<double> scale;
    for (const ConcentrationCell& c : report.cells) scale.push_back(std::sqrt(c.dt / c.sigma2));
    bool varied = false;
    for (double v : scale) varied = varied || v != scale.front();
    if (varied) report.slope_vs_scale = loglog_slope(scale, conf_q);
  }
  if (dts.size() >= 2) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < dts.size(); ++i) {
      x.push_back(dts[i]);
      y.push_back(conf_q[i * sigmas.size()]);
    }
    report.slope_vs_dt = loglog_slope(x, y);
  }
  if (lambdas.size() >= 2) {
    std::vector<double> x;
    for (double l : lambdas) x.push_back(std::log(2.0 / l));
    report.slope_vs_lambda = loglog_slope(x, report.cells.front().quantiles);
  }
  for (std::size_t j = 0; j < sigmas.size(); ++j) {
    if (std::abs(sigmas[j] - 2.0 * sigmas[0]) <= 1e-12 * sigmas[0]) {
      report.sigma_doubling_ratio = conf_q[0] / conf_q[j];
      break;
    }
  }
  return report;
}

BiasReport bias_study(const Scenario& s, const BiasOptions& opt) {
  if (!s.theta_star) throw std::invalid_argument("bias_study: theta* is unknown");
  if (opt.trials < 2) throw std::invalid_argument("bias_study: need at least 2 trials");
  if (!(opt.tail_fraction > 0.0 && opt.tail_fraction <= 1.0)) {
    throw std::invalid_argument("bias_study: tail_fraction outside (0, 1]");
  }
  std::vector<double> dts = opt.dt_list;
  if (dts.empty()) dts.push_back(opt.episode.policy.dt);

  BiasReport report;
  for (double dt : dts) {
    BiasRow row;
    row.dt = dt;
    row.trials = opt.trials;
    EpisodeOptions ep = opt.episode;
    ep.policy.dt = dt;
    ep.horizon_steps = std::lround(opt.horizon_s / dt);
    const long tail_start =
        ep.horizon_steps - std::max(1L, std::lround(opt.tail_fraction * ep.horizon_steps));

    std::vector<Vector> tail_means(static_cast<std::size_t>(opt.trials));
    std::vector<std::vector<Vector>> paths(static_cast<std::size_t>(opt.trials));
    std::vector<char> ok(static_cast<std::size_t>(opt.trials), 0);
    parallel_for(opt.trials, opt.workers, [&](long i) {
      EpisodeOptions mine = ep;
      mine.seed = trial_seed(opt.seed, i);
      const AdaptRunRecord rec = run_episode(s, mine);
      if (rec.diverged) return;
      Vector acc;
      std::vector<Vector>& path = paths[i];
      for (const StepRecord& st : rec.steps) {
        const Vector X = stacked_state(st.e, st.phi);
        path.push_back(X);
        if (st.k >= tail_start) acc = acc.size() ? Vector(acc + X) : X;
      }
      tail_means[i] = acc / static_cast<double>(ep.horizon_steps - tail_start);
      ok[i] = 1;
    });

    std::vector<Vector> kept;
    std::vector<const std::vector<Vector>*> kept_paths;
    for (long i = 0; i < opt.trials; ++i) {
      if (ok[i]) {
        kept.push_back(tail_means[i]);
        kept_paths.push_back(&paths[i]);
      } else {
        ++row.diverged;
      }
    }
    if (kept.size() < 2) throw DivergenceError("bias_study: too few finite trials", -1);
    const IntervalMoments m = moments_of(kept);
    row.offset = m.mean.norm();
    // first-order spread of |mean| along the mean direction
    row.offset_stderr = row.offset > 0.0
                            ? (m.mean.cwiseProduct(m.stderr_mean) / row.offset).norm()
                            : m.stderr_mean.norm();

    // decay of |E X_k| while it stays well above the steady-state offset
    std::vector<double> tk, logn;
    for (long k = 0; k < ep.horizon_steps; ++k) {
      Vector mean_k = Vector::Zero(kept.front().size());
      for (const auto* p : kept_paths) mean_k += (*p)[static_cast<std::size_t>(k)];
      mean_k /= static_cast<double>(kept_paths.size());
      const double norm = mean_k.norm();
      if (!(norm > 5.0 * row.offset)) break;
      tk.push_back(static_cast<double>(k) * dt);
      logn.push_back(std::log(norm));
    }
    if (tk.size() >= 3) {
      std::vector<TransitionSample> samples;
      for (std::size_t i = 0; i < tk.size(); ++i) samples.push_back({0.0, tk[i], std::exp(logn[i])});
      row.transient_rate = fit_exponential_bound(samples).zeta;
    }
    report.rows.push_back(row);
  }
  if (report.rows.size() >= 2) {
    std::vector<double> x, y;
    double sxy = 0.0, sxx = 0.0;
    for (const BiasRow& r : report.rows) {
      x.push_back(r.dt);
      y.push_back(r.offset);
      sxy += r.dt * r.offset;
      sxx += r.dt * r.dt;
    }
    report.slope = loglog_slope(x, y);
    report.coefficient = sxy / sxx;
  }
  return report;
}

}  // namespace fblpg
