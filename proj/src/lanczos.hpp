// Copyright 2026 The qcarbon Authors
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


#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace qcarbon::detail {

template <class Vector>
struct LowestEigenpair {
  double value = 0.0;
  Vector vector;
};

// Restarted Lanczos with full reorthogonalisation for the lowest eigenpair of
// a Hermitian operator given as y = apply(x).
template <class Vector, class Apply>
LowestEigenpair<Vector> lanczos_lowest(Apply&& apply, Vector start, double tol, Eigen::Index max_krylov = 160,
                                       int max_restarts = 50) {
  using Scalar = typename Vector::Scalar;
  using Basis = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index dim = start.size();
  max_krylov = std::min(dim, max_krylov);
  start.normalize();

  LowestEigenpair<Vector> out;
  Basis basis(dim, max_krylov);
  for (int restart = 0; restart < max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    basis.col(0) = start;
    Eigen::Index k = 0;
    for (; k < max_krylov; ++k) {
      Vector w = apply(basis.col(k));
      alpha.push_back(std::real(basis.col(k).dot(w)));
      for (int pass = 0; pass < 2; ++pass) {
        w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
      }
      const double b = w.norm();
      if (k + 1 == max_krylov || b < 1e-14) {
        ++k;
        break;
      }
      beta.push_back(b);
      basis.col(k + 1) = w / b;
    }
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    Vector v = basis.leftCols(k) * y.cast<Scalar>();
    v.normalize();
    out.value = es.eigenvalues()(0);
    out.vector = v;
    const Vector hv = apply(v);
    if ((hv - out.value * v).norm() < tol) break;
    start = v;
  }
  out.value = std::real(out.vector.dot(apply(out.vector)));
  return out;
}

}  // namespace qcarbon::detail
