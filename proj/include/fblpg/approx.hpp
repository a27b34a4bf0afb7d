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

// Linear-in-parameters corrections to the nominal linearizing controller.
//
//   u_hat(theta, x, v) = (beta_m(x) + beta_theta1(x)) + (alpha_m(x) + alpha_theta2(x)) v
//
// with beta_m = -A_m^-1 b_m and alpha_m = A_m^-1 taken from the nominal
// model. Each scalar feature psi_c(x) generates q vector bases psi_c e_i
// (theta1) and q*q matrix bases psi_c E_ij (theta2):
//   theta1 index = c*q + i,  theta2 index = c*q*q + i*q + j.

#ifndef FBLPG_APPROX_HPP_
#define FBLPG_APPROX_HPP_

#include <vector>

#include "fblpg/core.hpp"
#include "fblpg/plant.hpp"

namespace fblpg {

enum class BasisKind { kGaussianRbf, kPolynomial };

class BasisSet {
 public:
  // amplitude * exp(-0.5 * sum_d ((x_d - c_d) / width_d)^2) for every
  // center row.
  static BasisSet gaussian(Matrix centers, Vector widths, int io_dim,
                           double amplitude = 1.0);
  // All monomials of the state of total degree <= `degree` (constant included).
  static BasisSet polynomial(int state_dim, int degree, int io_dim);

  BasisKind kind() const { return kind_; }
  int state_dim() const { return state_dim_; }
  int io_dim() const { return io_dim_; }
  int feature_count() const;
  int k1() const { return feature_count() * io_dim_; }
  int k2() const { return feature_count() * io_dim_ * io_dim_; }
  int size() const { return k1() + k2(); }

  const Matrix& centers() const { return centers_; }
  const Vector& widths() const { return widths_; }
  double amplitude() const { return amplitude_; }

  Vector features(const Vector& x) const;

 private:
  BasisKind kind_ = BasisKind::kGaussianRbf;
  int state_dim_ = 0;
  int io_dim_ = 0;
  Matrix centers_;                        // rbf: one center per row
  Vector widths_;                         // rbf: per-dimension widths
  double amplitude_ = 1.0;                // rbf: peak value
  std::vector<std::vector<int>> powers_;  // polynomial: exponent per state
};

// theta = (theta1, theta2) stacked.
struct LearnedParams {
  Vector theta;

  static LearnedParams zeros(const BasisSet& bases) {
    return {Vector::Zero(bases.size())};
  }
};

struct Correction {
  Vector beta;   // R^q
  Matrix alpha;  // q x q
};

struct NominalLinearization {
  Vector beta;   // -A_m^-1 b_m
  Matrix alpha;  // A_m^-1
};

// Raises SingularityError when the nominal decoupling matrix is singular at x.
NominalLinearization nominal_linearization(const PlantModel& nominal,
                                           const Vector& x);

Correction eval_correction(const BasisSet& bases, const LearnedParams& params,
                           const Vector& x);

Vector eval_learned_controller(const BasisSet& bases,
                               const LearnedParams& params,
                               const PlantModel& nominal, const Vector& x,
                               const Vector& v);

// d u_hat / d theta (q x (K1+K2)); independent of theta.
Matrix controller_jacobian(const BasisSet& bases, const Vector& x,
                           const Vector& v);

struct StateBox {
  Vector lower;
  Vector upper;
};

// Gaussian centers on a tensor grid over `box` with counts[d] points per
// dimension; width_d = width_rule * spacing_d (the box extent when
// counts[d] == 1). Dimension 0 varies slowest.
BasisSet build_rbf_grid(const StateBox& box, const std::vector<int>& counts,
                        double width_rule, int io_dim, double amplitude = 1.0);

// Gram matrix of the scalar features over a set of probe states (rows).
Matrix feature_gram(const BasisSet& bases, const Matrix& probes);

}  // namespace fblpg

#endif  // FBLPG_APPROX_HPP_
