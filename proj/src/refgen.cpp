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

#include "fblpg/refgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fblpg {

double SinusoidSum::derivative(int channel, int order, double t) const {
  double value = 0.0;
  for (const SinusoidTerm& term : channels.at(channel)) {
    value += term.amplitude * std::pow(term.frequency, order) *
             std::sin(term.frequency * t + term.phase +
                      0.5 * std::numbers::pi * order);
  }
  return value;
}

ReferenceSample sample_reference(const SinusoidSum& ref,
                                 const RelativeDegree& gamma, double t) {
  if (ref.channels.size() != gamma.size()) {
    throw DimensionError("sample_reference: one term list per output required");
  }
  ReferenceSample s;
  s.t = t;
  s.xi_d.resize(total_degree(gamma));
  s.yd_gamma.resize(static_cast<Eigen::Index>(gamma.size()));
  int offset = 0;
  for (int j = 0; j < static_cast<int>(gamma.size()); ++j) {
    for (int m = 0; m < gamma[j]; ++m) s.xi_d(offset + m) = ref.derivative(j, m, t);
    s.yd_gamma(j) = ref.derivative(j, gamma[j], t);
    offset += gamma[j];
  }
  return s;
}

double uniform_bound(const SinusoidSum& ref, const RelativeDegree& gamma) {
  if (ref.channels.size() != gamma.size()) {
    throw DimensionError("uniform_bound: one term list per output required");
  }
  double bound = 0.0;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    for (const SinusoidTerm& term : ref.channels[j]) {
      bound += std::abs(term.amplitude) *
               std::pow(std::max(1.0, std::abs(term.frequency)), gamma[j]);
    }
  }
  return bound;
}

SinusoidSum default_reference(int channels) {
  SinusoidSum ref;
  for (int j = 0; j < channels; ++j) {
    const double w = 0.7 * (1.0 + 0.3 * j);
    ref.channels.push_back({{0.5, w, j * std::numbers::pi / 3.0},
                            {0.5, w * std::numbers::sqrt2, 0.0}});
  }
  return ref;
}

}  // namespace fblpg
