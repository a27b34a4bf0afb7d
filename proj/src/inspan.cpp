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

#include "fblpg/inspan.hpp"

#include <stdexcept>

#include <Eigen/QR>

namespace fblpg {

PlantModel make_inspan_plant(const InSpanPlantSpec& spec) {
  if (!spec.bases) throw std::invalid_argument("in-span plant: missing bases");
  if (spec.bases->state_dim() != spec.nominal.state_dim() ||
      spec.bases->io_dim() != spec.nominal.io_dim()) {
    throw DimensionError("in-span plant: basis does not match nominal model");
  }
  require_size(spec.theta_star.theta, spec.bases->size(), "in-span theta*");

  const PlantModel nominal = spec.nominal;
  const auto bases = spec.bases;
  const LearnedParams theta_star = spec.theta_star;
  auto io = [nominal, bases, theta_star](const Vector& x) {
    const NominalLinearization lin = nominal_linearization(nominal, x);
    const Correction corr = eval_correction(*bases, theta_star, x);
    const int q = nominal.io_dim();
    const Matrix alpha = lin.alpha + corr.alpha;
    IoData out;
    out.A = checked_solve(alpha, Matrix::Identity(q, q),
                          "in-span plant alpha_m + alpha_theta2*");
    out.b = -out.A * (lin.beta + corr.beta);
    return out;
  };

  return PlantModel("inspan_" + nominal.name(), nominal.relative_degree(),
                    nominal.chain_index(), io);
}

SpanProjection project_onto_span(const BasisSet& bases, const PlantModel& plant,
                                 const PlantModel& nominal, const Matrix& states,
                                 const Matrix& inputs) {
  if (states.rows() != inputs.rows() || states.rows() == 0) {
    throw DimensionError("project_onto_span: need matching, nonempty probe sets");
  }
  const int q = plant.io_dim();
  const Eigen::Index n = states.rows();
  Matrix lhs(n * q, bases.size());
  Vector rhs(n * q);
  const LearnedParams zero = LearnedParams::zeros(bases);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector x = states.row(i).transpose();
    const Vector v = inputs.row(i).transpose();
    const IoData io = eval_io(plant, x);
    const Vector exact = checked_solve(io.A, v - io.b, "project_onto_span plant A");
    lhs.middleRows(i * q, q) = controller_jacobian(bases, x, v);
    rhs.segment(i * q, q) = exact - eval_learned_controller(bases, zero, nominal, x, v);
  }
  SpanProjection out;
  out.theta.theta = lhs.colPivHouseholderQr().solve(rhs);
  out.residual = (lhs * out.theta.theta - rhs).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace fblpg
