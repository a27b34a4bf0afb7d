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

#include "fblpg/adapt.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace fblpg {

void PolicyConfig::validate() const {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("policy: sigma2 must be >= 0");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("policy: dt must be > 0");
  if (!(noise_clip > 0.0)) throw std::invalid_argument("policy: noise_clip must be > 0");
}

double Baseline::value() const {
  switch (kind_) {
    case BaselineKind::kNone:
      return 0.0;
    case BaselineKind::kSumOfPast:
      return sum_;
    case BaselineKind::kMeanOfPast:
      return count_ > 0 ? sum_ / static_cast<double>(count_) : 0.0;
  }
  return 0.0;
}

void Baseline::record(double reward) {
  sum_ += reward;
  ++count_;
}

Vector draw_truncated_noise(std::mt19937_64& rng, int dim, double sigma,
                            double clip) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector w(dim);
  for (int i = 0; i < dim; ++i) {
    double z = normal(rng);
    while (std::abs(z) > clip) z = normal(rng);
    w(i) = sigma * z;
  }
  return w;
}

std::mt19937_64 step_stream(std::uint64_t seed, long k) {
  // splitmix64 finalizer over (seed, k)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(k) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

PolicySample sample_policy(const BasisSet& bases, const LearnedParams& params,
                           const PlantModel& nominal, const Vector& x,
                           const ReferenceSample& ref_k, const Vector& e,
                           const GainMatrix& gain, const PolicyConfig& cfg,
                           std::mt19937_64& rng) {
  cfg.validate();
  PolicySample s;
  s.v = ref_k.yd_gamma + gain.K * e;
  s.u_hat = eval_learned_controller(bases, params, nominal, x, s.v);
  if (cfg.sigma2 > 0.0) {
    s.w = draw_truncated_noise(rng, nominal.io_dim(), std::sqrt(cfg.sigma2),
                               cfg.noise_clip);
  } else {
    s.w = Vector::Zero(nominal.io_dim());
  }
  s.u = s.u_hat + s.w;
  return s;
}

double discrete_reward(const Vector& e_k, const Vector& e_next,
                       const ReferenceModel& ref, const GainMatrix& gain,
                       double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("discrete_reward: dt must be > 0");
  require_size(e_k, ref.chain_dim(), "discrete_reward e_k");
  require_size(e_next, ref.chain_dim(), "discrete_reward e_next");
  const Matrix a_bar = Matrix::Identity(ref.chain_dim(), ref.chain_dim()) +
                       dt * closed_loop_matrix(ref, gain);
  return 0.5 * ((e_next - a_bar * e_k) / dt).squaredNorm();
}

Vector grad_log_policy(const Vector& u, const Vector& u_hat, double sigma2,
                       const Matrix& jac) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("grad_log_policy: sigma2 must be > 0");
  require_size(u_hat, u.size(), "grad_log_policy");
  if (jac.rows() != u.size()) throw DimensionError("grad_log_policy: jacobian rows");
  return jac.transpose() * (u - u_hat) / sigma2;
}

Vector estimate_gradient(double reward, double baseline, const Vector& score) {
  return (reward - baseline) * score;
}

LearnedParams update_params(const LearnedParams& params, const Vector& grad,
                            double dt) {
  require_size(grad, params.theta.size(), "update_params");
  if (!grad.allFinite()) {
    throw DivergenceError("gradient estimate is not finite", -1);
  }
  return {params.theta - dt * grad};
}

Vector exact_error(const Scenario& s, const Vector& x, double t) {
  const ReferenceSample r = sample_reference(s.reference, s.ref_model.gamma, t);
  return tracking_error(s.plant.output_chain(x), r.xi_d);
}

IntervalResult step_interval(const Scenario& s, const Vector& x, double t,
                             const LearnedParams& params, const Vector& w,
                             double dt, int substeps) {
  IntervalResult r;
  r.ref_k = sample_reference(s.reference, s.ref_model.gamma, t);
  r.e_k = tracking_error(s.plant.output_chain(x), r.ref_k.xi_d);
  r.v = r.ref_k.yd_gamma + s.gain.K * r.e_k;
  r.u_hat = eval_learned_controller(*s.bases, params, s.nominal, x, r.v);
  r.u = r.u_hat + w;
  r.x_next = integrate_zoh(s.plant, x, r.u, dt, substeps);
  r.e_next = exact_error(s, r.x_next, t + dt);
  r.reward = discrete_reward(r.e_k, r.e_next, s.ref_model, s.gain, dt);
  return r;
}

GradientSample gradient_sample(const Scenario& s, const IntervalResult& r,
                               const Vector& x, double sigma2,
                               double baseline_value) {
  GradientSample g;
  g.reward = r.reward;
  g.baseline_value = baseline_value;
  g.score = grad_log_policy(r.u, r.u_hat, sigma2, controller_jacobian(*s.bases, x, r.v));
  g.estimate = estimate_gradient(g.reward, baseline_value, g.score);
  return g;
}

namespace {

// Backward-difference estimate of the output chain from output samples
// spaced h apart (most recent last).
class ChainDifferentiator {
 public:
  ChainDifferentiator(const RelativeDegree& gamma, double h)
      : gamma_(gamma), h_(h) {
    for (int g : gamma) max_order_ = std::max(max_order_, g - 1);
  }

  void push(const Vector& y) {
    history_.push_back(y);
    while (static_cast<int>(history_.size()) > max_order_ + 1) history_.pop_front();
  }

  bool ready() const { return static_cast<int>(history_.size()) == max_order_ + 1; }

  Vector chain() const {
    Vector xi(total_degree(gamma_));
    const int last = static_cast<int>(history_.size()) - 1;
    int offset = 0;
    for (std::size_t j = 0; j < gamma_.size(); ++j) {
      for (int m = 0; m < gamma_[j]; ++m) {
        double acc = 0.0;
        double binom = 1.0;
        for (int i = 0; i <= m; ++i) {
          acc += ((i % 2) ? -binom : binom) * history_[last - i](j);
          binom = binom * (m - i) / (i + 1);
        }
        xi(offset + m) = acc / std::pow(h_, m);
      }
      offset += gamma_[j];
    }
    return xi;
  }

 private:
  RelativeDegree gamma_;
  double h_;
  int max_order_ = 0;
  std::deque<Vector> history_;
};

}  // namespace

AdaptRunRecord run_episode(const Scenario& s, const EpisodeOptions& opt) {
  opt.policy.validate();
  if (opt.substeps < 1) throw std::invalid_argument("run_episode: substeps < 1");
  if (opt.horizon_steps < 0) throw std::invalid_argument("run_episode: horizon < 0");
  require_size(s.x0, s.plant.state_dim(), "run_episode x0");
  require_size(s.theta0.theta, s.bases->size(), "run_episode theta0");
  if (s.nominal.state_dim() != s.plant.state_dim() ||
      s.nominal.io_dim() != s.plant.io_dim() ||
      s.ref_model.chain_dim() != s.plant.state_dim()) {
    throw DimensionError("run_episode: scenario components are inconsistent");
  }

  const double dt = opt.policy.dt;
  const double h = dt / opt.substeps;
  PolicyConfig policy = opt.policy;
  if (!opt.learning) policy.sigma2 = 0.0;
  const bool update = opt.learning && policy.sigma2 > 0.0;

  AdaptRunRecord rec;
  rec.seed = opt.seed;
  rec.dt = dt;
  rec.steps.reserve(static_cast<std::size_t>(opt.horizon_steps));

  ChainDifferentiator diff(s.ref_model.gamma, h);
  const bool numerical = opt.measurement == MeasurementMode::kNumericalDifferentiation;
  auto measure = [&](const Vector& x, double t) -> Vector {
    if (numerical && diff.ready()) {
      const ReferenceSample r = sample_reference(s.reference, s.ref_model.gamma, t);
      return diff.chain() - r.xi_d;
    }
    return exact_error(s, x, t);
  };

  Vector x = s.x0;
  LearnedParams theta = s.theta0;
  Baseline baseline(opt.baseline);
  if (numerical) diff.push(s.plant.output(x));
  Vector e = measure(x, 0.0);

  for (long k = 0; k < opt.horizon_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    StepRecord step;
    step.k = k;
    step.t = t;
    step.x = x;
    step.xi = s.plant.output_chain(x);
    step.e = e;
    step.theta = theta.theta;
    if (s.theta_star) step.phi = theta.theta - s.theta_star->theta;
    try {
      const ReferenceSample ref_k = sample_reference(s.reference, s.ref_model.gamma, t);
      std::mt19937_64 rng = step_stream(opt.seed, k);
      const PolicySample ps = sample_policy(*s.bases, theta, s.nominal, x, ref_k,
                                            e, s.gain, policy, rng);
      step.u = ps.u;
      step.w = ps.w;

      Vector x_next = x;
      for (int i = 0; i < opt.substeps; ++i) {
        x_next = integrate_zoh(s.plant, x_next, ps.u, h, 1);
        if (numerical) diff.push(s.plant.output(x_next));
      }
      if (!(x_next.norm() <= opt.max_state_norm)) {
        throw DivergenceError("state norm exceeded the divergence bound", k);
      }
      const Vector e_next = measure(x_next, t + dt);
      step.reward = discrete_reward(e, e_next, s.ref_model, s.gain, dt);
      step.baseline = baseline.value();

      if (update) {
        const Matrix jac = controller_jacobian(*s.bases, x, ps.v);
        const Vector score = grad_log_policy(ps.u, ps.u_hat, policy.sigma2, jac);
        const Vector grad = estimate_gradient(step.reward, step.baseline, score);
        theta = update_params(theta, grad, dt);
      }
      baseline.record(step.reward);
      rec.steps.push_back(std::move(step));
      x = std::move(x_next);
      e = e_next;
    } catch (const DivergenceError& err) {
      rec.diverged = true;
      rec.divergence_step = k;
      rec.divergence_reason = err.what();
      break;
    } catch (const SingularityError& err) {
      rec.diverged = true;
      rec.divergence_step = k;
      rec.divergence_reason = err.what();
      break;
    }
  }
  rec.x_final = x;
  rec.e_final = e;
  rec.theta_final = theta.theta;
  return rec;
}

}  // namespace fblpg
