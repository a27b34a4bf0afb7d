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

#ifndef FBLPG_ODE_HPP_
#define FBLPG_ODE_HPP_

#include "fblpg/core.hpp"

namespace fblpg {

// One classical fourth-order Runge-Kutta step of y' = rhs(t, y).
// Works for any Eigen dense type (vectors or matrices).
template <typename State, typename Rhs>
State rk4_step(const Rhs& rhs, double t, const State& y, double h) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * h, State(y + 0.5 * h * k1));
  const State k3 = rhs(t + 0.5 * h, State(y + 0.5 * h * k2));
  const State k4 = rhs(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrates over [t0, t0 + steps*h]; throws DivergenceError carrying the
// failing step index when the state stops being finite.
template <typename State, typename Rhs>
State rk4_integrate(const Rhs& rhs, double t0, State y, double h, long steps) {
  for (long i = 0; i < steps; ++i) {
    y = rk4_step(rhs, t0 + static_cast<double>(i) * h, y, h);
    if (!y.allFinite()) {
      throw DivergenceError("state became non-finite during integration", i);
    }
  }
  return y;
}

}  // namespace fblpg

#endif  // FBLPG_ODE_HPP_
