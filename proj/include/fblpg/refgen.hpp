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

// Sum-of-sinusoids desired outputs and their analytic derivative stacks.

#ifndef FBLPG_REFGEN_HPP_
#define FBLPG_REFGEN_HPP_

#include <vector>

#include "fblpg/core.hpp"

namespace fblpg {

// a * sin(omega * t + phase)
struct SinusoidTerm {
  double amplitude = 0.0;
  double frequency = 0.0;  // rad/s
  double phase = 0.0;      // rad
};

struct SinusoidSum {
  std::vector<std::vector<SinusoidTerm>> channels;

  // m-th time derivative of channel j at t.
  double derivative(int channel, int order, double t) const;
};

struct ReferenceSample {
  double t = 0.0;
  Vector xi_d;      // stacked (y_j, ..., y_j^(gamma_j - 1)) per channel
  Vector yd_gamma;  // (y_1^(gamma_1), ..., y_q^(gamma_q))
};

ReferenceSample sample_reference(const SinusoidSum& ref,
                                 const RelativeDegree& gamma, double t);

// sum over all terms of |a| * max(1, omega)^gamma_j; bounds every tracked
// derivative of every channel.
double uniform_bound(const SinusoidSum& ref, const RelativeDegree& gamma);

// Two terms of amplitude 0.5 per channel at w_j and w_j*sqrt(2) rad/s with
// w_j = 0.7 (1 + 0.3 j); the first term is phase-shifted by j*pi/3 so that
// channels never coincide.
SinusoidSum default_reference(int channels);

}  // namespace fblpg

#endif  // FBLPG_REFGEN_HPP_
