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

#include <optional>

#include "lkflow/linalg.hpp"
#include "lkflow/pauli.hpp"

namespace lkflow {

// Conventions used throughout:
//  * vec is column stacking, so vec(AXB) = (B^T (x) A) vec(X).
//  * sigma-hat_p = (1/2)(1 (x) sigma_p - sigma_p^T (x) 1), acting as half the
//    commutator; sigma-hat_p^+ is half the anticommutator.
//  * Generators L are stored so that the flow is exp(-t L); the dissipator of a
//    jump operator V is Gamma(rho) = (1/2)(V^dag V rho + rho V^dag V - 2 V rho V^dag).

inline Vector vec(const Matrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("vec: matrix must be square");
  return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix unvec(const Vector& v) {
  auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (d * d != v.size()) throw std::invalid_argument("unvec: length is not a perfect square");
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

/// Commutator superoperator (1 (x) A - A^T (x) 1), i.e. ad_A on vec'd operators.
inline Matrix hat_ad(const Matrix& a) {
  Eigen::Index d = a.rows();
  Matrix id = Matrix::Identity(d, d);
  return kron(id, a) - kron(a.transpose(), id);
}

/// Anticommutator superoperator (1 (x) A + A^T (x) 1).
inline Matrix hat_ad_plus(const Matrix& a) {
  Eigen::Index d = a.rows();
  Matrix id = Matrix::Identity(d, d);
  return kron(id, a) + kron(a.transpose(), id);
}

inline Matrix hat_sigma(const PauliString& p) { return 0.5 * hat_ad(dense_matrix(p)); }
inline Matrix hat_sigma_plus(const PauliString& p) { return 0.5 * hat_ad_plus(dense_matrix(p)); }

enum class SuperopKind { Generator, Dissipator, HamiltonianAd };

inline const char* superop_kind_name(SuperopKind k) {
  switch (k) {
    case SuperopKind::Generator: return "generator";
    case SuperopKind::Dissipator: return "dissipator";
    case SuperopKind::HamiltonianAd: return "hamiltonian_ad";
  }
  return "?";
}

/// A 4^n x 4^n matrix acting on vectorized operators, tagged by what it
/// represents.
struct Superoperator {
  Matrix mat;
  SuperopKind kind = SuperopKind::Generator;
  int n = 0;
};

struct CanonicalProvenance {
  PauliString p;  // the Pauli factor
  PauliString m;  // signed direction, p * q = m
};

struct GeneralizedProvenance {
  XGroupElement g;
  std::vector<int> projector_indices;  // diagonal unit projectors summed into P
};

/// A jump operator with its rate and (optional) structured provenance.
/// Canonical terms satisfy V = (sqrt(gamma)/2)(sigma_p + i sigma_q) with
/// anticommuting factors and V^2 = 0.
struct LindbladTerm {
  Matrix V;
  double gamma = 1.0;
  enum class Kind { Raw, Canonical, Generalized } kind = Kind::Raw;
  std::optional<CanonicalProvenance> canonical;
  std::optional<GeneralizedProvenance> generalized;

  static LindbladTerm raw(Matrix v, double g = 1.0) {
    LindbladTerm t;
    t.V = std::move(v);
    t.gamma = g;
    return t;
  }

  /// V = (sqrt(gamma)/2) sigma_p (1 - sigma_m), m carrying its sign.
  static LindbladTerm canonical_form(const PauliString& p, const PauliString& m, double g = 1.0) {
    if (!anticommutes(p, m))
      throw std::invalid_argument("canonical term requires [sigma_p, sigma_m] != 0");
    Matrix sp = dense_matrix(p);
    Matrix sm = dense_matrix(m);
    Eigen::Index d = sp.rows();
    LindbladTerm t;
    t.V = (std::sqrt(g) / 2.0) * sp * (Matrix::Identity(d, d) - sm);
    t.gamma = g;
    t.kind = Kind::Canonical;
    t.canonical = CanonicalProvenance{p, m};
    return t;
  }

  /// V = sqrt(gamma) G P with P a sum of diagonal unit projectors.
  static LindbladTerm generalized_form(const XGroupElement& g, std::vector<int> proj,
                                       double gamma = 1.0) {
    Eigen::Index d = Eigen::Index(1) << g.num_qubits();
    Matrix P = Matrix::Zero(d, d);
    for (int k : proj) {
      if (k < 0 || k >= d) throw std::out_of_range("generalized term: projector index");
      P(k, k) = 1.0;
    }
    LindbladTerm t;
    t.V = std::sqrt(gamma) * dense_matrix(g.pauli()) * P;
    t.gamma = gamma;
    t.kind = Kind::Generalized;
    t.generalized = GeneralizedProvenance{g, std::move(proj)};
    return t;
  }
};

/// Drift + controls + dissipators of a coherently controlled system.
/// Hamiltonians must be Hermitian within 1e-9 relative Frobenius tolerance;
/// they are symmetrized on construction and rejected beyond tolerance.
struct GeneratorSpec {
  int n = 1;
  Matrix H_d;                         // drift Hamiltonian (may be zero-size for none)
  std::vector<Matrix> H_controls;     // control Hamiltonians
  std::vector<LindbladTerm> dissipators;

  Eigen::Index dim() const { return Eigen::Index(1) << n; }

  static Matrix checked_hermitian(Matrix h, double rel_tol = 1e-9) {
    double scale = std::max(1.0, h.norm());
    if ((h - h.adjoint()).norm() > rel_tol * scale)
      throw std::invalid_argument("Hamiltonian is not Hermitian within tolerance");
    return 0.5 * (h + h.adjoint().eval());
  }

  void validate() const {
    Eigen::Index d = dim();
    if (H_d.size() != 0 && (H_d.rows() != d || H_d.cols() != d))
      throw std::invalid_argument("drift Hamiltonian dimension mismatch");
    for (const auto& h : H_controls)
      if (h.rows() != d || h.cols() != d)
        throw std::invalid_argument("control Hamiltonian dimension mismatch");
    for (const auto& t : dissipators)
      if (t.V.rows() != d || t.V.cols() != d)
        throw std::invalid_argument("Lindblad term dimension mismatch");
  }
};

/// Dissipator matrix of one jump term:
/// Gamma-hat = (1/2)(1 (x) V^dag V + (V^dag V)^T (x) 1) - conj(V) (x) V.
inline Matrix dissipator_matrix(const Matrix& v) {
  Eigen::Index d = v.rows();
  Matrix id = Matrix::Identity(d, d);
  Matrix vdv = v.adjoint() * v;
  return 0.5 * (kron(id, vdv) + kron(vdv.transpose(), id)) - kron(v.conjugate(), v);
}

inline Matrix dissipator_matrix(const std::vector<LindbladTerm>& terms, Eigen::Index d) {
  Matrix g = Matrix::Zero(d * d, d * d);
  for (const auto& t : terms) g += dissipator_matrix(t.V);
  return g;
}

/// L = i ad_{H_d + sum u_k H_k} + Gamma in vec form; flow is exp(-t L).
inline Superoperator build_lindbladian(const GeneratorSpec& spec,
                                       const Eigen::VectorXd& controls = Eigen::VectorXd()) {
  spec.validate();
  if (controls.size() != 0 && size_t(controls.size()) != spec.H_controls.size())
    throw std::invalid_argument("control vector length mismatch");
  Eigen::Index d = spec.dim();
  Matrix h = Matrix::Zero(d, d);
  if (spec.H_d.size() != 0) h = GeneratorSpec::checked_hermitian(spec.H_d);
  for (size_t k = 0; k < spec.H_controls.size(); ++k) {
    double u = controls.size() ? controls(Eigen::Index(k)) : 0.0;
    if (u != 0.0) h += u * GeneratorSpec::checked_hermitian(spec.H_controls[k]);
  }
  Superoperator out;
  out.n = spec.n;
  out.kind = SuperopKind::Generator;
  out.mat = Complex(0, 1) * hat_ad(h) + dissipator_matrix(spec.dissipators, d);
  return out;
}

struct HamiltonianDissipativeSplit {
  Matrix H0;       // Hermitian traceless
  Matrix Gamma0;   // purely dissipative remainder (superoperator matrix)
  bool kappa_kernel = true;  // Prop-style check when jump terms provided
};

/// Unique split L = i ad_{H0} + Gamma0 with Gamma0 orthogonal to every i ad_H
/// (Hilbert-Schmidt). When V terms are supplied, also reports whether the
/// trace vector lies in the kernel of kappa.
inline HamiltonianDissipativeSplit split_hamiltonian_dissipative(
    const Matrix& L, int n, const std::vector<LindbladTerm>* terms = nullptr) {
  Eigen::Index d = Eigen::Index(1) << n;
  HamiltonianDissipativeSplit out;
  out.H0 = Matrix::Zero(d, d);
  for (const PauliString& m : all_strings(n)) {
    Matrix admp = Complex(0, 1) * hat_ad(dense_matrix(m));
    double denom = admp.squaredNorm();
    double coeff = hs_inner_re(admp, L) / denom;
    out.H0 += coeff * dense_matrix(m);
  }
  out.Gamma0 = L - Complex(0, 1) * hat_ad(out.H0);
  if (terms) {
    // kappa(alpha) = (i/2) sum_k (alpha_k V_k^dag - conj(alpha_k) V_k), alpha_k = tr V_k
    Matrix kap = Matrix::Zero(d, d);
    double vnorm = 0;
    for (const auto& t : *terms) {
      Complex a = t.V.trace();
      kap += Complex(0, 0.5) * (a * t.V.adjoint() - std::conj(a) * t.V);
      vnorm = std::max(vnorm, t.V.norm());
    }
    out.kappa_kernel = kap.norm() <= 1e-10 * std::max(1.0, vnorm * vnorm);
  }
  return out;
}

/// Normalized traceless Pauli basis sigma_m / sqrt(2^n), lexicographic order.
inline std::vector<Matrix> normalized_pauli_basis(int n) {
  double scale = std::pow(2.0, -0.5 * n);
  std::vector<Matrix> out;
  for (const PauliString& m : all_strings(n)) out.push_back(scale * dense_matrix(m));
  return out;
}

/// GKS matrix of a jump-term list relative to an orthonormal traceless basis.
/// A is PSD and Hermitian; recovered terms regenerate the same dissipator.
inline Matrix gks_matrix(const std::vector<LindbladTerm>& terms, const std::vector<Matrix>& basis) {
  Eigen::Index nb = Eigen::Index(basis.size());
  Matrix coeffs(Eigen::Index(terms.size()), nb);
  for (size_t k = 0; k < terms.size(); ++k) {
    if (std::abs(terms[k].V.trace()) > 1e-9 * std::max(1.0, terms[k].V.norm()))
      throw std::invalid_argument("gks_matrix: jump operators must be traceless");
    for (Eigen::Index j = 0; j < nb; ++j)
      coeffs(Eigen::Index(k), j) = (basis[j].adjoint() * terms[k].V).trace();
  }
  return (coeffs.adjoint() * coeffs).transpose();
}

/// Recover a jump-term list from a GKS matrix; negative eigenvalues beyond
/// tolerance signal a non-CP generator.
inline std::vector<LindbladTerm> from_gks(const Matrix& a, const std::vector<Matrix>& basis,
                                          double tol = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<LindbladTerm> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam < -tol * scale)
      throw std::invalid_argument("from_gks: GKS matrix has a negative eigenvalue (non-CP)");
    if (lam <= tol * scale) continue;
    Matrix v = Matrix::Zero(basis[0].rows(), basis[0].cols());
    for (size_t j = 0; j < basis.size(); ++j) v += es.eigenvectors()(Eigen::Index(j), i) * basis[j];
    out.push_back(LindbladTerm::raw(std::sqrt(lam) * v, lam));
  }
  return out;
}

struct UnitalMixedSplit {
  Matrix Gamma0;   // unital part
  Matrix Gamma_m;  // quasi-translation (mixed) part
};

/// Split of a canonical-term dissipator into unital and mixed parts,
/// Gamma0 = (gamma/2)(hat_p^2 + hat_q^2) per term. Hermitian single-Pauli
/// terms are accepted (their mixed part is zero).
inline UnitalMixedSplit split_unital_mixed(const std::vector<LindbladTerm>& terms, int n) {
  Eigen::Index dd = Eigen::Index(1) << (2 * n);
  UnitalMixedSplit out{Matrix::Zero(dd, dd), Matrix::Zero(dd, dd)};
  for (const auto& t : terms) {
    Matrix total = dissipator_matrix(t.V);
    if (t.kind == LindbladTerm::Kind::Canonical) {
      const auto& c = *t.canonical;
      PauliString q(star_product(c.p, c.m).axes);
      Matrix hp = hat_sigma(c.p), hq = hat_sigma(q);
      Matrix g0 = (t.gamma / 2.0) * (hp * hp + hq * hq);
      out.Gamma0 += g0;
      out.Gamma_m += total - g0;
      continue;
    }
    // Hermitian jump: purely unital.
    if ((t.V - t.V.adjoint()).norm() <= 1e-9 * std::max(1.0, t.V.norm())) {
      out.Gamma0 += total;
      continue;
    }
    throw std::invalid_argument("split_unital_mixed: term is neither canonical nor Hermitian");
  }
  return out;
}

/// Unitary change of basis to the coherence representation: columns are
/// vec(sigma_m)/2^{n/2} for traceless m (lexicographic), identity last.
inline Matrix coherence_transform(int n) {
  Eigen::Index d = Eigen::Index(1) << n;
  Eigen::Index dd = d * d;
  Matrix u(dd, dd);
  double scale = std::pow(2.0, -0.5 * n);
  auto strings = all_strings(n);
  for (size_t j = 0; j < strings.size(); ++j)
    u.col(Eigen::Index(j)) = scale * vec(dense_matrix(strings[j]));
  u.col(dd - 1) = scale * vec(Matrix::Identity(d, d));
  return u;
}

/// Real matrix of a superoperator in the coherence basis. Valid for maps with
/// traceless range acting real-linearly on Hermitian matrices.
inline Eigen::MatrixXd coherence_rep(const Matrix& a, int n, double imag_tol = 1e-8) {
  Matrix u = coherence_transform(n);
  Matrix m = u.adjoint() * a * u;
  if (m.imag().cwiseAbs().maxCoeff() > imag_tol * std::max(1.0, a.norm()))
    throw std::invalid_argument("coherence_rep: operator is not real in the coherence basis");
  return m.real();
}

inline Matrix from_coherence_rep(const Eigen::MatrixXd& m, int n) {
  Matrix u = coherence_transform(n);
  return u * m.cast<Complex>() * u.adjoint();
}

struct TranslationComponent {
  PauliString direction;
  double coefficient = 0.0;
};

/// Translation directions of a dissipator, read from the last column of the
/// coherence representation of the flow generator -Gamma. Amplitude damping
/// with V = (1/2)(sigma_x + i sigma_y) reports {z: +1}.
inline std::vector<TranslationComponent> translation_directions(const Matrix& gamma, int n,
                                                                double tol = 1e-10) {
  Matrix u = coherence_transform(n);
  Eigen::Index dd = u.cols();
  Vector last = u.adjoint() * (gamma * u.col(dd - 1));
  double scale = std::max(1.0, gamma.norm());
  std::vector<TranslationComponent> out;
  auto strings = all_strings(n);
  for (Eigen::Index j = 0; j + 1 < dd; ++j) {
    Complex c = -last(j);  // flow generator is -Gamma
    if (std::abs(c) > tol * scale) {
      if (std::abs(c.imag()) > 1e-8 * std::max(1.0, std::abs(c)))
        throw std::invalid_argument("translation_directions: non-real coefficient");
      out.push_back({strings[size_t(j)], c.real()});
    }
  }
  return out;
}

/// Expand a matrix over signed Pauli words as a human-readable sum.
inline std::string pauli_sum_string(const Matrix& v, int n, double tol = 1e-10) {
  Eigen::Index d = Eigen::Index(1) << n;
  double norm2n = double(d);
  std::string out;
  char buf[64];
  for (const PauliString& m : all_strings(n, /*skip_identity=*/false)) {
    Complex c = (dense_matrix(m).adjoint() * v).trace() / norm2n;
    if (std::abs(c) < tol) continue;
    if (!out.empty()) out += " + ";
    if (std::abs(c.imag()) < tol) {
      std::snprintf(buf, sizeof buf, "%.10g", c.real());
      out += buf;
    } else if (std::abs(c.real()) < tol) {
      std::snprintf(buf, sizeof buf, "%.10gi", c.imag());
      out += buf;
    } else {
      std::snprintf(buf, sizeof buf, "(%.10g%+.10gi)", c.real(), c.imag());
      out += buf;
    }
    out += "*";
    out += m.str();
  }
  return out.empty() ? "0" : out;
}

}  // namespace lkflow
