// Copyright 2026 The abc-rates Authors
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

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>

#include "abcr/errors.hpp"

namespace abcr {

/// Acceptance norm ||s||_A defined by ||s||_A^2 = s^T A^{-1} s for a
/// symmetric positive-definite A.  W = A^{-1/2} is the symmetric inverse
/// square root, so the A-norm of s equals the Euclidean norm of W s.
struct AcceptanceNorm {
  Eigen::MatrixXd A;
  Eigen::MatrixXd W;

  int q() const { return static_cast<int>(A.rows()); }

  /// out = W * in (the whitened summary).
  void apply(std::span<const double> in, std::span<double> out) const {
    Eigen::Map<const Eigen::VectorXd> x(in.data(),
                                        static_cast<Eigen::Index>(in.size()));
    Eigen::Map<Eigen::VectorXd> y(out.data(),
                                  static_cast<Eigen::Index>(out.size()));
    y.noalias() = W * x;
  }

  static AcceptanceNorm identity(int q) {
    return AcceptanceNorm{Eigen::MatrixXd::Identity(q, q),
                          Eigen::MatrixXd::Identity(q, q)};
  }
};

/// Builds the whitening norm from an SPD matrix A via the symmetric
/// eigendecomposition A = V diag(lambda) V^T, giving
/// W = V diag(lambda^{-1/2}) V^T.
///
/// Throws NonSymmetricError when A deviates from symmetry by more than
/// 1e-12 (scaled by the largest entry magnitude) and NotPositiveDefiniteError
/// when any eigenvalue is at or below 1e-12 times the largest one.
inline AcceptanceNorm whitening_transform(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    throw InvalidArgumentError("whitening_transform: A must be square and non-empty");
  }
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  const double asymmetry = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-12 * scale) {
    throw NonSymmetricError("whitening_transform: asymmetry " +
                            std::to_string(asymmetry) + " beyond tolerance");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  if (solver.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("whitening_transform: eigendecomposition failed");
  }
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double lambda_max = lambda.maxCoeff();
  if (lambda_max <= 0.0 || lambda.minCoeff() <= 1e-12 * lambda_max) {
    throw NotPositiveDefiniteError(
        "whitening_transform: matrix is not positive definite (min eigenvalue " +
        std::to_string(lambda.minCoeff()) + ")");
  }

  const Eigen::VectorXd inv_sqrt = lambda.cwiseSqrt().cwiseInverse();
  AcceptanceNorm norm;
  norm.A = A;
  norm.W = solver.eigenvectors() * inv_sqrt.asDiagonal() *
           solver.eigenvectors().transpose();
  return norm;
}

}  // namespace abcr
