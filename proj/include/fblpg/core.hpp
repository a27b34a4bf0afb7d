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

// Shared numeric aliases, error types and small linear-algebra helpers.

#ifndef FBLPG_CORE_HPP_
#define FBLPG_CORE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fblpg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Per-output relative degree (gamma_1, ..., gamma_q).
using RelativeDegree = std::vector<int>;

int total_degree(const RelativeDegree& gamma);

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a matrix that must be inverted is numerically singular.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Raised when a simulated state stops being finite (or leaves the allowed
// bound). `step` is the integration step at which it was detected.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

// Matrices with a 2-norm condition number above this are treated as singular.
inline constexpr double kSingularCondition = 1e12;

double condition_number(const Matrix& a);

// Largest singular value.
double spectral_norm(const Matrix& a);

// Solves a * x = rhs, raising SingularityError when cond(a) > kSingularCondition.
Matrix checked_solve(const Matrix& a, const Matrix& rhs, const char* what);

bool all_finite(const Vector& v);

void require_size(const Vector& v, Eigen::Index n, const char* what);

}  // namespace fblpg

#endif  // FBLPG_CORE_HPP_
