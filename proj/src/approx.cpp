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

#include "fblpg/approx.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace fblpg {

BasisSet BasisSet::gaussian(Matrix centers, Vector widths, int io_dim,
                           double amplitude) {
  if (centers.rows() == 0) throw std::invalid_argument("rbf basis: no centers");
  if (widths.size() != centers.cols()) {
    throw DimensionError("rbf basis: one width per state dimension");
  }
  if (!((widths.array() > 0.0).all())) {
    throw std::invalid_argument("rbf basis: widths must be positive");
  }
  if (io_dim < 1) throw std::invalid_argument("rbf basis: io_dim < 1");
  if (!(amplitude > 0.0)) throw std::invalid_argument("rbf basis: amplitude <= 0");
  BasisSet b;
  b.kind_ = BasisKind::kGaussianRbf;
  b.state_dim_ = static_cast<int>(centers.cols());
  b.io_dim_ = io_dim;
  b.centers_ = std::move(centers);
  b.widths_ = std::move(widths);
  b.amplitude_ = amplitude;
  return b;
}

BasisSet BasisSet::polynomial(int state_dim, int degree, int io_dim) {
  if (state_dim < 1 || degree < 0 || io_dim < 1) {
    throw std::invalid_argument("polynomial basis: bad dimensions");
  }
  BasisSet b;
  b.kind_ = BasisKind::kPolynomial;
  b.state_dim_ = state_dim;
  b.io_dim_ = io_dim;
  std::vector<int> current(state_dim, 0);
  for (int total = 0; total <= degree; ++total) {
    // every exponent tuple with this total degree
    std::function<void(int, int)> fill = [&](int dim, int remaining) {
      if (dim == state_dim - 1) {
        current[dim] = remaining;
        b.powers_.push_back(current);
        return;
      }
      for (int p = remaining; p >= 0; --p) {
        current[dim] = p;
        fill(dim + 1, remaining - p);
      }
    };
    fill(0, total);
  }
  return b;
}

int BasisSet::feature_count() const {
  return kind_ == BasisKind::kGaussianRbf ? static_cast<int>(centers_.rows())
                                          : static_cast<int>(powers_.size());
}

Vector BasisSet::features(const Vector& x) const {
  require_size(x, state_dim_, "basis features");
  const int count = feature_count();
  Vector psi(count);
  if (kind_ == BasisKind::kGaussianRbf) {
    const Eigen::ArrayXd inv_w = widths_.array().inverse();
    for (int c = 0; c < count; ++c) {
      const Eigen::ArrayXd d =
          (x.transpose() - centers_.row(c)).transpose().array() * inv_w;
      psi(c) = amplitude_ * std::exp(-0.5 * d.square().sum());
    }
  } else {
    for (int c = 0; c < count; ++c) {
      double v = 1.0;
      for (int d = 0; d < state_dim_; ++d) {
        for (int p = 0; p < powers_[c][d]; ++p) v *= x(d);
      }
      psi(c) = v;
    }
  }
  return psi;
}

NominalLinearization nominal_linearization(const PlantModel& nominal,
                                           const Vector& x) {
  const IoData io = nominal.io(x);
  const int q = nominal.io_dim();
  const Matrix alpha =
      checked_solve(io.A, Matrix::Identity(q, q), "nominal decoupling matrix");
  return {-alpha * io.b, alpha};
}

namespace {

void check_params(const BasisSet& bases, const LearnedParams& params) {
  require_size(params.theta, bases.size(), "learned parameters");
}

}  // namespace

Correction eval_correction(const BasisSet& bases, const LearnedParams& params,
                           const Vector& x) {
  check_params(bases, params);
  const int q = bases.io_dim();
  const int count = bases.feature_count();
  const Vector psi = bases.features(x);
  Eigen::Map<const Matrix> theta1(params.theta.data(), q, count);
  Eigen::Map<const Matrix> theta2(params.theta.data() + bases.k1(), q * q, count);
  Correction out;
  out.beta = theta1 * psi;
  const Vector flat = theta2 * psi;
  out.alpha.resize(q, q);
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) out.alpha(i, j) = flat(i * q + j);
  }
  return out;
}

Vector eval_learned_controller(const BasisSet& bases,
                               const LearnedParams& params,
                               const PlantModel& nominal, const Vector& x,
                               const Vector& v) {
  require_size(v, nominal.io_dim(), "learned controller v");
  if (bases.io_dim() != nominal.io_dim()) {
    throw DimensionError("learned controller: basis/nominal io mismatch");
  }
  const NominalLinearization lin = nominal_linearization(nominal, x);
  const Correction corr = eval_correction(bases, params, x);
  return (lin.beta + corr.beta) + (lin.alpha + corr.alpha) * v;
}

Matrix controller_jacobian(const BasisSet& bases, const Vector& x,
                           const Vector& v) {
  const int q = bases.io_dim();
  require_size(v, q, "controller_jacobian v");
  const int count = bases.feature_count();
  const Vector psi = bases.features(x);
  Matrix jac = Matrix::Zero(q, bases.size());
  const int k1 = bases.k1();
  for (int c = 0; c < count; ++c) {
    for (int i = 0; i < q; ++i) {
      jac(i, c * q + i) = psi(c);
      for (int j = 0; j < q; ++j) jac(i, k1 + c * q * q + i * q + j) = psi(c) * v(j);
    }
  }
  return jac;
}

BasisSet build_rbf_grid(const StateBox& box, const std::vector<int>& counts,
                        double width_rule, int io_dim, double amplitude) {
  const Eigen::Index n = box.lower.size();
  if (n == 0 || box.upper.size() != n || static_cast<Eigen::Index>(counts.size()) != n) {
    throw std::invalid_argument("rbf grid: empty or inconsistent box");
  }
  if (!(width_rule > 0.0)) throw std::invalid_argument("rbf grid: width_rule <= 0");
  Vector widths(n);
  long total = 1;
  for (Eigen::Index d = 0; d < n; ++d) {
    if (counts[d] < 1) throw std::invalid_argument("rbf grid: counts must be >= 1");
    const double extent = box.upper(d) - box.lower(d);
    if (!(extent >= 0.0)) throw std::invalid_argument("rbf grid: upper < lower");
    double spacing = counts[d] > 1 ? extent / (counts[d] - 1) : extent;
    if (!(spacing > 0.0)) spacing = 1.0;
    widths(d) = width_rule * spacing;
    total *= counts[d];
  }
  Matrix centers(total, n);
  std::vector<int> idx(n, 0);
  for (long r = 0; r < total; ++r) {
    for (Eigen::Index d = 0; d < n; ++d) {
      centers(r, d) = counts[d] > 1
                          ? box.lower(d) + idx[d] * (box.upper(d) - box.lower(d)) /
                                               (counts[d] - 1)
                          : 0.5 * (box.lower(d) + box.upper(d));
    }
    for (Eigen::Index d = n - 1; d >= 0; --d) {
      if (++idx[d] < counts[d]) break;
      idx[d] = 0;
    }
  }
  return BasisSet::gaussian(std::move(centers), std::move(widths), io_dim,
                            amplitude);
}

Matrix feature_gram(const BasisSet& bases, const Matrix& probes) {
  Matrix gram = Matrix::Zero(bases.feature_count(), bases.feature_count());
  for (Eigen::Index r = 0; r < probes.rows(); ++r) {
    const Vector psi = bases.features(probes.row(r).transpose());
    gram.noalias() += psi * psi.transpose();
  }
  return gram;
}

}  // namespace fblpg
