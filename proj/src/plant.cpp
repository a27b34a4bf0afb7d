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

#include "fblpg/plant.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "fblpg/ode.hpp"

namespace fblpg {

PlantModel::PlantModel(std::string name, RelativeDegree gamma,
                       std::vector<int> chain_index, IoFunction io) {
  if (gamma.empty()) throw DimensionError("plant: empty relative degree");
  for (int g : gamma) {
    if (g < 1) throw DimensionError("plant: relative degrees must be >= 1");
  }
  const int n = total_degree(gamma);
  if (static_cast<int>(chain_index.size()) != n) {
    throw DimensionError("plant: chain index must list every state");
  }
  std::vector<bool> seen(n, false);
  for (int i : chain_index) {
    if (i < 0 || i >= n || seen[i]) {
      throw DimensionError("plant: chain index is not a permutation");
    }
    seen[i] = true;
  }
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->gamma = std::move(gamma);
  impl->n = n;
  impl->chain_index = std::move(chain_index);
  impl->io = std::move(io);
  impl_ = std::move(impl);
}

IoData PlantModel::io(const Vector& x) const {
  require_size(x, impl_->n, "plant io");
  return impl_->io(x);
}

Vector PlantModel::output_chain(const Vector& x) const {
  require_size(x, impl_->n, "output chain");
  Vector xi(impl_->n);
  for (int i = 0; i < impl_->n; ++i) xi(i) = x(impl_->chain_index[i]);
  return xi;
}

Vector PlantModel::state_from_chain(const Vector& xi) const {
  require_size(xi, impl_->n, "state from chain");
  Vector x(impl_->n);
  for (int i = 0; i < impl_->n; ++i) x(impl_->chain_index[i]) = xi(i);
  return x;
}

Vector PlantModel::output(const Vector& x) const {
  const Vector xi = output_chain(x);
  Vector y(io_dim());
  int offset = 0;
  for (int j = 0; j < io_dim(); ++j) {
    y(j) = xi(offset);
    offset += impl_->gamma[j];
  }
  return y;
}

Vector PlantModel::drift(const Vector& x) const {
  const Vector xi = output_chain(x);
  const IoData io_data = io(x);
  Vector xi_dot = Vector::Zero(impl_->n);
  int offset = 0;
  for (int j = 0; j < io_dim(); ++j) {
    const int top = offset + impl_->gamma[j] - 1;
    for (int i = offset; i < top; ++i) xi_dot(i) = xi(i + 1);
    xi_dot(top) = io_data.b(j);
    offset += impl_->gamma[j];
  }
  Vector f(impl_->n);
  for (int i = 0; i < impl_->n; ++i) f(impl_->chain_index[i]) = xi_dot(i);
  return f;
}

Matrix PlantModel::input_matrix(const Vector& x) const {
  const IoData io_data = io(x);
  Matrix g = Matrix::Zero(impl_->n, io_dim());
  int offset = 0;
  for (int j = 0; j < io_dim(); ++j) {
    const int top = offset + impl_->gamma[j] - 1;
    g.row(impl_->chain_index[top]) = io_data.A.row(j);
    offset += impl_->gamma[j];
  }
  return g;
}

Vector eval_dynamics(const PlantModel& model, const Vector& x, const Vector& u) {
  require_size(x, model.state_dim(), "eval_dynamics state");
  require_size(u, model.io_dim(), "eval_dynamics input");
  // Same result as drift(x) + input_matrix(x) * u with a single io() call.
  const Vector xi = model.output_chain(x);
  const IoData io_data = model.io(x);
  const RelativeDegree& gamma = model.relative_degree();
  const Vector top_rate = io_data.b + io_data.A * u;
  Vector xi_dot(x.size());
  int offset = 0;
  for (int j = 0; j < model.io_dim(); ++j) {
    const int top = offset + gamma[j] - 1;
    for (int i = offset; i < top; ++i) xi_dot(i) = xi(i + 1);
    xi_dot(top) = top_rate(j);
    offset += gamma[j];
  }
  return model.state_from_chain(xi_dot);
}

IoData eval_io(const PlantModel& model, const Vector& x) {
  require_size(x, model.state_dim(), "eval_io state");
  return model.io(x);
}

Vector integrate_zoh(const PlantModel& model, const Vector& x0, const Vector& u,
                     double dt, int substeps) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_zoh: dt must be > 0");
  if (substeps < 1) throw std::invalid_argument("integrate_zoh: substeps < 1");
  require_size(x0, model.state_dim(), "integrate_zoh state");
  require_size(u, model.io_dim(), "integrate_zoh input");
  auto rhs = [&](double, const Vector& x) { return eval_dynamics(model, x, u); };
  return rk4_integrate(rhs, 0.0, x0, dt / substeps, substeps);
}

Vector integrate_feedback(const PlantModel& model, const Vector& x0, double t0,
                          double t1, double h, const FeedbackLaw& control,
                          const StepObserver& observer) {
  if (!(h > 0.0) || !(t1 >= t0)) {
    throw std::invalid_argument("integrate_feedback: bad time grid");
  }
  const long steps = std::lround((t1 - t0) / h);
  auto rhs = [&](double t, const Vector& x) {
    return eval_dynamics(model, x, control(t, x));
  };
  Vector x = x0;
  if (observer) observer(t0, x);
  for (long i = 0; i < steps; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    x = rk4_step(rhs, t, x, h);
    if (!x.allFinite()) {
      throw DivergenceError("closed-loop state became non-finite", i);
    }
    if (observer) observer(t0 + static_cast<double>(i + 1) * h, x);
  }
  return x;
}

DoublePendulumParams DoublePendulumParams::scaled(double factor) const {
  DoublePendulumParams p = *this;
  p.m1 *= factor;
  p.m2 *= factor;
  p.l1 *= factor;
  p.l2 *= factor;
  return p;
}

void DoublePendulumParams::validate() const {
  if (!(m1 > 0 && m2 > 0 && l1 > 0 && l2 > 0 && gravity > 0)) {
    throw std::invalid_argument(
        "double pendulum: masses, lengths and gravity must be positive");
  }
}

PendulumTerms pendulum_terms(const DoublePendulumParams& p,
                             const Eigen::Vector2d& q,
                             const Eigen::Vector2d& qd) {
  const double c2 = std::cos(q(1));
  const double s2 = std::sin(q(1));
  const double s1 = std::sin(q(0));
  const double s12 = std::sin(q(0) + q(1));
  const double coupling = p.m2 * p.l1 * p.l2;

  PendulumTerms terms;
  const double m22 = p.m2 * p.l2 * p.l2;
  const double m12 = m22 + coupling * c2;
  const double m11 = (p.m1 + p.m2) * p.l1 * p.l1 + m22 + 2.0 * coupling * c2;
  terms.mass << m11, m12, m12, m22;

  const double hs = coupling * s2;
  terms.coriolis << -hs * (2.0 * qd(0) * qd(1) + qd(1) * qd(1)),
      hs * qd(0) * qd(0);

  terms.gravity << (p.m1 + p.m2) * p.gravity * p.l1 * s1 +
                       p.m2 * p.gravity * p.l2 * s12,
      p.m2 * p.gravity * p.l2 * s12;
  return terms;
}

PlantModel make_double_pendulum(const DoublePendulumParams& params) {
  params.validate();
  auto io = [params](const Vector& x) {
    const Eigen::Vector2d q = x.head<2>();
    const Eigen::Vector2d qd = x.tail<2>();
    const PendulumTerms t = pendulum_terms(params, q, qd);
    const Eigen::Matrix2d m_inv = t.mass.inverse();
    IoData out;
    out.A = m_inv;
    out.b = -m_inv * (t.coriolis + t.gravity);
    return out;
  };
  // xi = (q1, qd1, q2, qd2)
  return PlantModel("double_pendulum", {2, 2}, {0, 2, 1, 3}, io);
}

PlantModel make_linear_plant(const RelativeDegree& gamma, const Matrix& L,
                             const Matrix& D) {
  const int n = total_degree(gamma);
  const int q = static_cast<int>(gamma.size());
  if (L.rows() != q || L.cols() != n || D.rows() != q || D.cols() != q) {
    throw DimensionError("linear plant: L must be q x n and D q x q");
  }
  std::vector<int> chain(n);
  std::iota(chain.begin(), chain.end(), 0);
  auto io = [L, D](const Vector& x) { return IoData{L * x, D}; };
  return PlantModel("linear", gamma, std::move(chain), io);
}

}  // namespace fblpg
