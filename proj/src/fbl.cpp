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

#include "fblpg/fbl.hpp"

#include <cmath>
#include <stdexcept>

namespace fblpg {

ReferenceModel build_reference_model(const RelativeDegree& gamma) {
  if (gamma.empty()) throw DimensionError("reference model: empty gamma");
  for (int g : gamma) {
    if (g < 1) throw DimensionError("reference model: gamma_j must be >= 1");
  }
  const int n = total_degree(gamma);
  const int q = static_cast<int>(gamma.size());
  ReferenceModel ref;
  ref.gamma = gamma;
  ref.A = Matrix::Zero(n, n);
  ref.B = Matrix::Zero(n, q);
  int offset = 0;
  for (int j = 0; j < q; ++j) {
    for (int i = 0; i + 1 < gamma[j]; ++i) ref.A(offset + i, offset + i + 1) = 1.0;
    ref.B(offset + gamma[j] - 1, j) = 1.0;
    offset += gamma[j];
  }
  return ref;
}

GainMatrix design_gain(const ReferenceModel& ref, double pole) {
  if (!(pole < 0.0)) throw std::invalid_argument("design_gain: pole must be < 0");
  GainMatrix gain;
  gain.K = Matrix::Zero(ref.io_dim(), ref.chain_dim());
  int offset = 0;
  for (int j = 0; j < ref.io_dim(); ++j) {
    const int g = ref.gamma[j];
    // Coefficients of (s - pole)^g = s^g + c_{g-1} s^{g-1} + ... + c_0;
    // the companion row then needs K = -(c_0, ..., c_{g-1}).
    std::vector<double> coeff(g + 1, 0.0);
    coeff[0] = 1.0;  // polynomial "1", coefficients by ascending power
    for (int k = 0; k < g; ++k) {
      std::vector<double> next(g + 1, 0.0);
      for (int i = 0; i <= k; ++i) {
        next[i + 1] += coeff[i];
        next[i] += -pole * coeff[i];
      }
      coeff = next;
    }
    for (int i = 0; i < g; ++i) gain.K(j, offset + i) = -coeff[i];
    for (int i = 0; i < g; ++i) gain.poles.push_back(pole);
    offset += g;
  }
  return gain;
}

Matrix closed_loop_matrix(const ReferenceModel& ref, const GainMatrix& gain) {
  return ref.A + ref.B * gain.K;
}

Vector tracking_error(const Vector& xi, const Vector& xi_d) {
  require_size(xi_d, xi.size(), "tracking_error");
  return xi - xi_d;
}

Vector exact_tracking_control(const PlantModel& model, const Vector& x,
                              const Vector& xi_d, const Vector& yd_gamma,
                              const GainMatrix& gain) {
  require_size(yd_gamma, model.io_dim(), "exact_tracking_control feedforward");
  const Vector e = tracking_error(model.output_chain(x), xi_d);
  const IoData io = model.io(x);
  const Vector rhs = -io.b + yd_gamma + gain.K * e;
  return checked_solve(io.A, rhs, "exact_tracking_control decoupling matrix");
}

}  // namespace fblpg
