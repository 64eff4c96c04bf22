// Copyright 2026 lkflow contributors
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
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <complex>
#include <vector>

#include "lkflow/pauli.hpp"

namespace lkflow {

/// Null space of A as orthonormal columns; singular values below
/// rtol * sigma_max count as zero.
inline Matrix nullspace(const Matrix& a, double rtol = 1e-9) {
  if (a.size() == 0) return Matrix::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cutoff = (s.size() > 0 ? s(0) : 0.0) * rtol;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

inline Eigen::Index matrix_rank(const Matrix& a, double rtol = 1e-9) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  double cutoff = (s.size() > 0 ? s(0) : 0.0) * rtol;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return rank;
}

/// Orthonormalize the columns of a frame (via thin SVD; drops dependent columns).
inline Matrix orthonormalize_columns(const Matrix& a, double rtol = 1e-10) {
  if (a.cols() == 0) return a;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double cutoff = (s.size() > 0 ? s(0) : 0.0) * rtol;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Joint kernel of a list of matrices (stacked SVD).
inline Matrix joint_nullspace(const std::vector<Matrix>& mats, double rtol = 1e-9) {
  if (mats.empty()) throw std::invalid_argument("joint_nullspace: empty list");
  Eigen::Index cols = mats[0].cols(), rows = 0;
  for (const auto& m : mats) rows += m.rows();
  Matrix stacked(rows, cols);
  Eigen::Index r = 0;
  for (const auto& m : mats) {
    stacked.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
  return nullspace(stacked, rtol);
}

inline double hs_norm(const Matrix& a) { return a.norm(); }

/// Real Hilbert-Schmidt inner product Re tr(A^dag B).
inline double hs_inner_re(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace().real();
}

/// Incrementally built orthonormal basis of a real-linear span of complex
/// matrices (flattened, with Re and Im parts as separate coordinates).
/// Used by the Lie closure engine and the wedge sampler.
class RealSpan {
 public:
  explicit RealSpan(double rel_tol = 1e-8) : tol_(rel_tol) {}

  /// Returns true if the matrix added a new direction.
  bool add(const Matrix& m) {
    Eigen::VectorXd v = flatten(m);
    double n0 = v.norm();
    if (n0 == 0.0) return false;
    project_out(v);
    project_out(v);  // second MGS pass
    if (v.norm() > tol_ * std::max(1.0, n0)) {
      basis_.push_back(v / v.norm());
      return true;
    }
    return false;
  }

  bool contains(const Matrix& m, double rel_tol = 1e-8) const {
    Eigen::VectorXd v = flatten(m);
    double n0 = v.norm();
    if (n0 == 0.0) return true;
    project_out(v);
    project_out(v);
    return v.norm() <= rel_tol * n0;
  }

  size_t dim() const { return basis_.size(); }

 private:
  static Eigen::VectorXd flatten(const Matrix& m) {
    Eigen::VectorXd v(2 * m.size());
    Eigen::Map<const Vector> mv(m.data(), m.size());
    v.head(m.size()) = mv.real();
    v.tail(m.size()) = mv.imag();
    return v;
  }
  void project_out(Eigen::VectorXd& v) const {
    for (const auto& b : basis_) v -= b.dot(v) * b;
  }

  double tol_;
  std::vector<Eigen::VectorXd> basis_;
};

/// Largest principal angle between the spans of two orthonormal frames.
inline double max_principal_angle(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) return M_PI / 2;
  Eigen::JacobiSVD<Matrix> svd(a.adjoint() * b);
  double smin = svd.singularValues().minCoeff();
  smin = std::min(1.0, std::max(-1.0, smin));
  return std::acos(smin);
}

/// Hermitian square root of a PSD matrix (small negative eigenvalues clipped).
inline Matrix psd_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace lkflow
