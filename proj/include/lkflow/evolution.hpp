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

#include <vector>

#include "lkflow/expm.hpp"
#include "lkflow/linalg.hpp"
#include "lkflow/superop.hpp"

namespace lkflow {

/// A Hermitian, unit-trace, PSD (to tolerance) state.
struct DensityMatrix {
  Matrix rho;

  DensityMatrix() = default;
  explicit DensityMatrix(Matrix r, double eig_tol = 1e-9, double trace_tol = 1e-10) : rho(std::move(r)) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
    if ((rho - rho.adjoint()).norm() > 1e-9 * std::max(1.0, rho.norm()))
      throw std::invalid_argument("density matrix must be Hermitian");
    rho = 0.5 * (rho + rho.adjoint().eval());
    if (std::abs(rho.trace().real() - 1.0) > trace_tol || std::abs(rho.trace().imag()) > trace_tol)
      throw std::invalid_argument("density matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -eig_tol)
      throw std::invalid_argument("density matrix must be PSD");
  }

  static DensityMatrix pure(const Vector& psi) {
    Vector v = psi / psi.norm();
    return DensityMatrix(v * v.adjoint());
  }
  static DensityMatrix maximally_mixed(Eigen::Index d) {
    return DensityMatrix(Matrix::Identity(d, d) / double(d));
  }
};

/// Uhlmann fidelity; simplified form <psi|rho|psi> when the target is pure.
inline double fidelity(const Matrix& rho, const Matrix& target, double pure_tol = 1e-9) {
  if (std::abs((target * target - target).norm()) < pure_tol) {
    // target is a projector: F = tr(rho * target)
    return std::real((rho * target).trace());
  }
  Matrix s = psd_sqrt(target);
  Matrix inner = psd_sqrt(s * rho * s);
  double t = inner.trace().real();
  return t * t;
}

inline Matrix propagate(const Matrix& L, const Matrix& rho0, double t) {
  if (t < 0) throw std::invalid_argument("propagate: time must be nonnegative");
  Matrix prop = expm<Matrix>((-t * L).eval());
  Matrix out = unvec(prop * vec(rho0));
  return 0.5 * (out + out.adjoint().eval());
}

inline DensityMatrix propagate(const Superoperator& L, const DensityMatrix& rho0, double t) {
  return DensityMatrix(propagate(L.mat, rho0.rho, t), 1e-7, 1e-8);
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;
  std::vector<double> fidelities;  // vs target when provided
  bool converged = false;
  double final_fidelity = 0.0;
};

/// Doubles t until F(rho(t), target) >= 1 - tol or t exceeds t_max.
/// Non-convergence is reported in the verdict, not thrown.
inline Trajectory converge(const Matrix& L, const Matrix& rho0, const Matrix& target, double tol,
                           double t_max, double t0 = 1.0) {
  if (tol <= 0) throw std::invalid_argument("converge: tolerance must be positive");
  Trajectory traj;
  double f0 = fidelity(rho0, target);
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  traj.fidelities.push_back(f0);
  if (f0 >= 1.0 - tol) {
    traj.converged = true;
    traj.final_fidelity = f0;
    return traj;
  }
  for (double t = t0; t <= t_max * (1 + 1e-12); t *= 2) {
    Matrix rho = propagate(L, rho0, t);
    double f = fidelity(rho, target);
    traj.times.push_back(t);
    traj.states.push_back(rho);
    traj.fidelities.push_back(f);
    if (f >= 1.0 - tol) {
      traj.converged = true;
      break;
    }
  }
  traj.final_fidelity = traj.fidelities.back();
  return traj;
}

/// Choi matrix of the channel exp(-t L), built by propagating matrix units.
/// Guarded to n <= 3.
inline Matrix choi_matrix(const Matrix& L, int n, double t) {
  if (n > 3) throw std::invalid_argument("choi_matrix: guarded to n <= 3");
  Eigen::Index d = Eigen::Index(1) << n;
  Matrix prop = expm<Matrix>((-t * L).eval());
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      Matrix eij = Matrix::Zero(d, d);
      eij(i, j) = 1.0;
      Matrix im = unvec(prop * vec(eij));
      // choi += E_ij (x) T(E_ij)
      choi.block(i * d, j * d, d, d) += im;
    }
  return choi;
}

struct CptpPoint {
  double t = 0;
  double trace_deviation = 0;
  double choi_min_eig = 0;
  double hermiticity_defect = 0;
};

/// Per-time diagnostics: trace preservation, Choi positivity, Hermiticity
/// preservation of exp(-t L).
inline std::vector<CptpPoint> cptp_diagnostics(const Matrix& L, int n,
                                               const std::vector<double>& times) {
  Eigen::Index d = Eigen::Index(1) << n;
  std::vector<CptpPoint> out;
  for (double t : times) {
    CptpPoint pt;
    pt.t = t;
    Matrix prop = expm<Matrix>((-t * L).eval());
    // trace preservation: row dual to vec(1) is preserved
    Vector one = vec(Matrix::Identity(d, d));
    pt.trace_deviation = (prop.adjoint() * one - one).cwiseAbs().maxCoeff();
    Matrix choi = choi_matrix(L, n, t);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint().eval()),
                                             Eigen::EigenvaluesOnly);
    pt.choi_min_eig = es.eigenvalues().minCoeff();
    double defect = 0;
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) {
        Matrix h = Matrix::Zero(d, d);
        h(i, j) += 1;
        h(j, i) += 1;
        Matrix im = unvec(prop * vec(h));
        defect = std::max(defect, (im - im.adjoint().eval()).norm());
      }
    pt.hermiticity_defect = defect;
    out.push_back(pt);
  }
  return out;
}

}  // namespace lkflow
