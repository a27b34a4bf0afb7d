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

// Synthetic plants whose exact linearizing controller lies in the span of
// the learned parameterization, so that a true parameter vector exists.

#ifndef FBLPG_INSPAN_HPP_
#define FBLPG_INSPAN_HPP_

#include <memory>

#include "fblpg/approx.hpp"
#include "fblpg/plant.hpp"

namespace fblpg {

struct InSpanPlantSpec {
  PlantModel nominal;
  std::shared_ptr<const BasisSet> bases;
  LearnedParams theta_star;
};

// A_p = (alpha_m + alpha_theta2*)^-1, b_p = -A_p (beta_m + beta_theta1*), so
// that A_p^-1 (v - b_p) == u_hat(theta*, x, v). The state layout is the
// nominal model's. Evaluating the plant at a state where
// alpha_m + alpha_theta2* is singular raises SingularityError.
PlantModel make_inspan_plant(const InSpanPlantSpec& spec);

struct SpanProjection {
  LearnedParams theta;
  double residual = 0.0;  // max |u_hat(theta, x, v) - u_exact(x, v)| over the probes
};

// Least-squares theta with u_hat(theta, x, v) ~= A_p(x)^-1 (v - b_p(x)) over
// probe pairs (rows of `states`, rows of `inputs`). A residual at round-off
// level means the plant's linearizing controller lies in the span.
SpanProjection project_onto_span(const BasisSet& bases, const PlantModel& plant,
                                 const PlantModel& nominal, const Matrix& states,
                                 const Matrix& inputs);

}  // namespace fblpg

#endif  // FBLPG_INSPAN_HPP_
