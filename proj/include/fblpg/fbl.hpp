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

// Reference model, tracking gains and the exact feedback-linearizing
// tracking law.

#ifndef FBLPG_FBL_HPP_
#define FBLPG_FBL_HPP_

#include <vector>

#include "fblpg/core.hpp"
#include "fblpg/plant.hpp"

namespace fblpg {

// Chain of integrators xi' = A xi + B v in the block ordering
// (y_1, y_1', ..., y_q, ...). B^T B = I.
struct ReferenceModel {
  Matrix A;
  Matrix B;
  RelativeDegree gamma;

  int chain_dim() const { return static_cast<int>(A.rows()); }
  int io_dim() const { return static_cast<int>(B.cols()); }
};

struct GainMatrix {
  Matrix K;  // q x |gamma|
  std::vector<double> poles;
};

ReferenceModel build_reference_model(const RelativeDegree& gamma);

// Places every eigenvalue of each output block of A + B K at `pole`.
GainMatrix design_gain(const ReferenceModel& ref, double pole);

// A + B K.
Matrix closed_loop_matrix(const ReferenceModel& ref, const GainMatrix& gain);

Vector tracking_error(const Vector& xi, const Vector& xi_d);

// u = A(x)^-1 (-b(x) + y_d^(gamma) + K (xi(x) - xi_d)).
Vector exact_tracking_control(const PlantModel& model, const Vector& x,
                              const Vector& xi_d, const Vector& yd_gamma,
                              const GainMatrix& gain);

}  // namespace fblpg

#endif  // FBLPG_FBL_HPP_
