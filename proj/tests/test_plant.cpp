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

#include "fblpg/ode.hpp"
#include "fblpg/plant.hpp"

namespace fblpg {
namespace {

// Kinetic and potential energy written from the point-mass positions.
double kinetic(const DoublePendulumParams& p, const Eigen::Vector2d& q,
               const Eigen::Vector2d& qd) {
  const double a = q(0), b = q(0) + q(1);
  const double ad = qd(0), bd = qd(0) + qd(1);
  const Eigen::Vector2d v1(p.l1 * std::cos(a) * ad, p.l1 * std::sin(a) * ad);
  const Eigen::Vector2d v2 = v1 + Eigen::Vector2d(p.l2 * std::cos(b) * bd, p.l2 * std::sin(b) * bd);
  return 0.5 * p.m1 * v1.squaredNorm() + 0.5 * p.m2 * v2.squaredNorm();
}

double potential(const DoublePendulumParams& p, const Eigen::Vector2d& q) {
  const double h1 = -p.l1 * std::cos(q(0));
  const double h2 = h1 - p.l2 * std::cos(q(0) + q(1));
  return p.gravity * (p.m1 * h1 + p.m2 * h2);
}

DoublePendulumParams odd_params() {
  DoublePendulumParams p;
  p.m1 = 1.3;
  p.m2 = 0.7;
  p.l1 = 0.9;
  p.l2 = 1.2;
  return p;
}

TEST(Pendulum, MassMatrixIsKineticHessian) {
  const DoublePendulumParams p = odd_params();
  const Eigen::Vector2d q(0.4, -1.1);
  const PendulumTerms terms = pendulum_terms(p, q, Eigen::Vector2d::Zero());
  const double h = 1e-4;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Eigen::Vector2d ei = Eigen::Vector2d::Unit(i) * h, ej = Eigen::Vector2d::Unit(j) * h;
      const double fd = (kinetic(p, q, ei + ej) - kinetic(p, q, ei - ej) -
                         kinetic(p, q, -ei + ej) + kinetic(p, q, -ei - ej)) /
                        (4.0 * h * h);
      EXPECT_NEAR(terms.mass(i, j), fd, 1e-6);
    }
  }
}

TEST(Pendulum, GravityIsPotentialGradient) {
  const DoublePendulumParams p = odd_params();
  const Eigen::Vector2d q(0.4, -1.1);
  const PendulumTerms terms = pendulum_terms(p, q, Eigen::Vector2d::Zero());
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i) {
    const Eigen::Vector2d d = Eigen::Vector2d::Unit(i) * h;
    EXPECT_NEAR(terms.gravity(i), (potential(p, q + d) - potential(p, q - d)) / (2 * h), 1e-6);
  }
}

TEST(Pendulum, UnforcedMotionConservesEnergy) {
  const DoublePendulumParams p = odd_params();
  const PlantModel plant = make_double_pendulum(p);
  Vector x(4);
  x << 1.0, -0.5, 0.3, 0.8;
  auto energy = [&](const Vector& s) {
    return kinetic(p, s.head<2>(), s.tail<2>()) + potential(p, s.head<2>());
  };
  const double e0 = energy(x);
  const Vector zero = Vector::Zero(2);
  for (int i = 0; i < 500; ++i) x = integrate_zoh(plant, x, zero, 0.01, 4);
  EXPECT_NEAR(energy(x), e0, 1e-6 * std::abs(e0) + 1e-8);
}

TEST(Pendulum, TorqueDoesWorkAtRate) {
  // dE/dt = qd . tau
  const DoublePendulumParams p = odd_params();
  const PlantModel plant = make_double_pendulum(p);
  Vector x(4), u(2);
  x << 0.3, 0.9, -0.4, 0.6;
  u << 1.5, -0.7;
  const double h = 1e-5;
  auto energy = [&](const Vector& s) {
    return kinetic(p, s.head<2>(), s.tail<2>()) + potential(p, s.head<2>());
  };
  const Vector f = eval_dynamics(plant, x, u);
  const Vector xp = x + h * f, xm = x - h * f;
  EXPECT_NEAR((energy(xp) - energy(xm)) / (2 * h), x.tail<2>().dot(u), 1e-6);
}

TEST(Pendulum, ChainRoundTrip) {
  const PlantModel plant = make_double_pendulum(DoublePendulumParams{});
  Vector x(4);
  x << 0.1, 0.2, 0.3, 0.4;
  const Vector xi = plant.output_chain(x);
  EXPECT_DOUBLE_EQ(xi(0), 0.1);
  EXPECT_DOUBLE_EQ(xi(1), 0.3);
  EXPECT_DOUBLE_EQ(xi(2), 0.2);
  EXPECT_DOUBLE_EQ(xi(3), 0.4);
  EXPECT_TRUE(plant.state_from_chain(xi).isApprox(x));
}

TEST(Pendulum, IoMatchesDynamics) {
  const PlantModel plant = make_double_pendulum(odd_params());
  Vector x(4), u(2);
  x << 0.5, -0.3, 0.2, -0.9;
  u << 0.4, 1.1;
  const IoData io = eval_io(plant, x);
  const Vector xdot = eval_dynamics(plant, x, u);
  EXPECT_TRUE((io.b + io.A * u).isApprox(xdot.tail<2>(), 1e-12));
  EXPECT_TRUE(xdot.head<2>().isApprox(x.tail<2>()));
}

TEST(Pendulum, InvalidParamsRejected) {
  DoublePendulumParams p;
  p.m1 = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(LinearPlant, IoIsAffine) {
  Matrix L(1, 2), D(1, 1);
  L << -2.0, 0.5;
  D << 3.0;
  const PlantModel plant = make_linear_plant({2}, L, D);
  Vector x(2);
  x << 0.7, -0.2;
  const IoData io = eval_io(plant, x);
  EXPECT_NEAR(io.b(0), -1.5, 1e-15);
  EXPECT_NEAR(io.A(0, 0), 3.0, 1e-15);
}

TEST(Rk4, MatchesMatrixExponential) {
  Matrix A(2, 2);
  A << 0.0, 1.0, -4.0, -0.5;
  Vector y0(2);
  y0 << 1.0, 0.0;
  auto rhs = [&](double, const Vector& y) -> Vector { return A * y; };
  const Vector y = rk4_integrate(rhs, 0.0, y0, 1e-3, 3000);
  EXPECT_LT((y - (A * 3.0).exp() * y0).norm(), 1e-11);
}

TEST(Rk4, FourthOrderConvergence) {
  auto rhs = [](double t, const Vector& y) -> Vector { return -y * std::cos(t); };
  Vector y0(1);
  y0 << 1.0;
  const double exact = std::exp(-std::sin(2.0));
  std::vector<double> err;
  for (long n : {20L, 40L, 80L}) {
    err.push_back(std::abs(rk4_integrate(rhs, 0.0, y0, 2.0 / n, n)(0) - exact));
  }
  EXPECT_NEAR(std::log2(err[0] / err[1]), 4.0, 0.3);
  EXPECT_NEAR(std::log2(err[1] / err[2]), 4.0, 0.3);
}

TEST(Rk4, NonFiniteStateThrows) {
  auto rhs = [](double, const Vector& y) -> Vector { return y.array().square(); };
  Vector y0(1);
  y0 << 1.0;
  EXPECT_THROW(rk4_integrate(rhs, 0.0, y0, 0.5, 100), DivergenceError);
}

}  // namespace
}  // namespace fblpg
