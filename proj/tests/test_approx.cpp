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

#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "fblpg/approx.hpp"
#include "fblpg/inspan.hpp"

namespace fblpg {
namespace {

BasisSet small_grid() {
  StateBox box{Vector::Constant(4, -1.0), Vector::Constant(4, 1.0)};
  return build_rbf_grid(box, {3, 2, 2, 1}, 1.0, 2, 0.5);
}

TEST(Basis, GridLayout) {
  const BasisSet b = small_grid();
  EXPECT_EQ(b.feature_count(), 12);
  EXPECT_EQ(b.k1(), 24);
  EXPECT_EQ(b.k2(), 48);
  EXPECT_DOUBLE_EQ(b.widths()(0), 1.0);
  EXPECT_DOUBLE_EQ(b.widths()(3), 2.0);
  // peak of amplitude at a center
  const Vector c = b.centers().row(5).transpose();
  EXPECT_NEAR(b.features(c)(5), 0.5, 1e-15);
}

TEST(Basis, GaussianValue) {
  Matrix c(1, 2);
  c << 0.0, 1.0;
  Vector w(2);
  w << 1.0, 2.0;
  const BasisSet b = BasisSet::gaussian(c, w, 1);
  Vector x(2);
  x << 1.0, 3.0;
  EXPECT_NEAR(b.features(x)(0), std::exp(-1.0), 1e-15);
}

TEST(Basis, PolynomialCount) {
  // monomials of degree <= 2 in 4 variables
  EXPECT_EQ(BasisSet::polynomial(4, 2, 2).feature_count(), 15);
}

TEST(Controller, ZeroThetaIsNominal) {
  const PlantModel nominal = make_double_pendulum(DoublePendulumParams{});
  const BasisSet b = small_grid();
  Vector x(4), v(2);
  x << 0.2, 0.1, -0.3, 0.4;
  v << 1.0, -2.0;
  const IoData io = eval_io(nominal, x);
  const Vector expected = io.A.lu().solve(v - io.b);
  EXPECT_TRUE(eval_learned_controller(b, LearnedParams::zeros(b), nominal, x, v)
                  .isApprox(expected, 1e-12));
}

TEST(Controller, JacobianColumns) {
  const BasisSet b = small_grid();
  Vector x(4), v(2);
  x << 0.2, 0.1, -0.3, 0.4;
  v << 1.5, -2.0;
  const Matrix jac = controller_jacobian(b, x, v);
  const Vector psi = b.features(x);
  const int q = 2, c = 7;
  EXPECT_NEAR(jac(1, c * q + 1), psi(c), 1e-15);
  EXPECT_EQ(jac(0, c * q + 1), 0.0);
  // theta2 index c*q*q + i*q + j multiplies v_j in row i
  EXPECT_NEAR(jac(1, b.k1() + c * q * q + 1 * q + 0), psi(c) * v(0), 1e-15);
  EXPECT_EQ(jac(0, b.k1() + c * q * q + 1 * q + 0), 0.0);
}

TEST(Controller, LinearInTheta) {
  const PlantModel nominal = make_double_pendulum(DoublePendulumParams{});
  const BasisSet b = small_grid();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  LearnedParams p = LearnedParams::zeros(b);
  for (int i = 0; i < p.theta.size(); ++i) p.theta(i) = n(rng);
  Vector x(4), v(2);
  x << -0.4, 0.6, 0.1, 0.0;
  v << 0.3, 0.9;
  const Vector u0 = eval_learned_controller(b, LearnedParams::zeros(b), nominal, x, v);
  const Vector u = eval_learned_controller(b, p, nominal, x, v);
  EXPECT_TRUE((u - u0).isApprox(controller_jacobian(b, x, v) * p.theta, 1e-12));
}

TEST(InSpan, ThetaStarLinearizesExactly) {
  const PlantModel nominal = make_double_pendulum(DoublePendulumParams{});
  auto bases = std::make_shared<const BasisSet>(small_grid());
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.1);
  LearnedParams star = LearnedParams::zeros(*bases);
  for (int i = 0; i < star.theta.size(); ++i) star.theta(i) = n(rng);
  const PlantModel plant = make_inspan_plant({nominal, bases, star});
  Vector x(4), v(2);
  x << 0.1, -0.2, 0.3, 0.1;
  v << -1.0, 0.5;
  const Vector u = eval_learned_controller(*bases, star, nominal, x, v);
  const IoData io = eval_io(plant, x);
  EXPECT_TRUE((io.b + io.A * u).isApprox(v, 1e-10));
}

TEST(InSpan, ProjectionRecoversTheta) {
  const PlantModel nominal = make_double_pendulum(DoublePendulumParams{});
  auto bases = std::make_shared<const BasisSet>(small_grid());
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 0.1);
  LearnedParams star = LearnedParams::zeros(*bases);
  for (int i = 0; i < star.theta.size(); ++i) star.theta(i) = n(rng);
  const PlantModel plant = make_inspan_plant({nominal, bases, star});
  Matrix states(200, 4), inputs(200, 2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int r = 0; r < 200; ++r) {
    for (int c = 0; c < 4; ++c) states(r, c) = u(rng);
    for (int c = 0; c < 2; ++c) inputs(r, c) = u(rng);
  }
  const SpanProjection proj = project_onto_span(*bases, plant, nominal, states, inputs);
  EXPECT_LT(proj.residual, 1e-9);
  EXPECT_LT((proj.theta.theta - star.theta).norm(), 1e-6);
}

}  // namespace
}  // namespace fblpg
