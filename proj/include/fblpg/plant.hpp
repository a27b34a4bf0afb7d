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

// Control-affine plants x' = f(x) + g(x) u with full vector relative degree.
//
// Every plant shipped here has sum(gamma) == n, so the state is a
// permutation of the output chain
//   xi = (y_1, y_1', ..., y_1^(g1-1), ..., y_q, ..., y_q^(gq-1)).
// A plant is therefore fully described by its input-output data
//   y^(gamma) = b(x) + A(x) u
// together with that permutation; f and g are derived from it.

#ifndef FBLPG_PLANT_HPP_
#define FBLPG_PLANT_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fblpg/core.hpp"

namespace fblpg {

// Drift b(x) and decoupling matrix A(x) of the highest output derivatives.
struct IoData {
  Vector b;
  Matrix A;
};

class PlantModel {
 public:
  using IoFunction = std::function<IoData(const Vector& x)>;

  // `chain_index[i]` is the state index holding the i-th entry of xi.
  PlantModel(std::string name, RelativeDegree gamma,
             std::vector<int> chain_index, IoFunction io);

  const std::string& name() const { return impl_->name; }
  int state_dim() const { return impl_->n; }
  int io_dim() const { return static_cast<int>(impl_->gamma.size()); }
  const RelativeDegree& relative_degree() const { return impl_->gamma; }
  const std::vector<int>& chain_index() const { return impl_->chain_index; }

  IoData io(const Vector& x) const;
  Vector drift(const Vector& x) const;         // f(x)
  Matrix input_matrix(const Vector& x) const;  // g(x)
  Vector output(const Vector& x) const;        // h(x)
  Vector output_chain(const Vector& x) const;  // xi(x)
  Vector state_from_chain(const Vector& xi) const;

 private:
  struct Impl {
    std::string name;
    RelativeDegree gamma;
    int n = 0;
    std::vector<int> chain_index;
    IoFunction io;
  };
  std::shared_ptr<const Impl> impl_;
};

struct PlantState {
  Vector x;
  double t = 0.0;
};

// f(x) + g(x) u.
Vector eval_dynamics(const PlantModel& model, const Vector& x, const Vector& u);

IoData eval_io(const PlantModel& model, const Vector& x);

// RK4 with u held constant over [0, dt], split into `substeps` steps.
Vector integrate_zoh(const PlantModel& model, const Vector& x0, const Vector& u,
                     double dt, int substeps);

// Continuous state feedback u = control(t, x), integrated with fixed RK4
// step `h` from t0 to t1. `observer` (optional) is called at every step.
using FeedbackLaw = std::function<Vector(double t, const Vector& x)>;
using StepObserver = std::function<void(double t, const Vector& x)>;
Vector integrate_feedback(const PlantModel& model, const Vector& x0, double t0,
                          double t1, double h, const FeedbackLaw& control,
                          const StepObserver& observer = {});

struct DoublePendulumParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double l1 = 1.0;
  double l2 = 1.0;
  double gravity = 9.81;

  // Masses and lengths multiplied by `factor`; gravity unchanged.
  DoublePendulumParams scaled(double factor) const;
  void validate() const;
};

// Joint-space terms M(q) qdd + c(q, qd) + G(q) = tau of the fully actuated
// point-mass double pendulum. q1 is measured from the downward vertical and
// q2 relative to the first link.
struct PendulumTerms {
  Eigen::Matrix2d mass;
  Eigen::Vector2d coriolis;  // c(q, qd) = C(q, qd) qd
  Eigen::Vector2d gravity;
};
PendulumTerms pendulum_terms(const DoublePendulumParams& p,
                             const Eigen::Vector2d& q,
                             const Eigen::Vector2d& qd);

// State x = (q1, q2, qd1, qd2), outputs y = (q1, q2), gamma = (2, 2).
PlantModel make_double_pendulum(const DoublePendulumParams& params);

// Linear plant in chain coordinates: y^(gamma) = L x + D u, x = xi.
PlantModel make_linear_plant(const RelativeDegree& gamma, const Matrix& L,
                             const Matrix& D);

}  // namespace fblpg

#endif  // FBLPG_PLANT_HPP_
