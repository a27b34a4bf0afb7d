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

#include "fblpg/core.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace fblpg {

int total_degree(const RelativeDegree& gamma) {
  return std::accumulate(gamma.begin(), gamma.end(), 0);
}

double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Matrix checked_solve(const Matrix& a, const Matrix& rhs, const char* what) {
  if (a.rows() != a.cols() || a.rows() != rhs.rows()) {
    throw DimensionError(std::string(what) + ": dimension mismatch in solve");
  }
  const double cond = condition_number(a);
  if (!(cond <= kSingularCondition)) {
    std::ostringstream msg;
    msg << what << ": matrix is singular (condition number " << cond << ")";
    throw SingularityError(msg.str(), cond);
  }
  return a.partialPivLu().solve(rhs);
}

bool all_finite(const Vector& v) { return v.allFinite(); }

void require_size(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << what << ": expected dimension " << n << ", got " << v.size();
    throw DimensionError(msg.str());
  }
}

}  // namespace fblpg
