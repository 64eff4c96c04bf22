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
#include <random>
#include <string>

#include "lkflow/evolution.hpp"
#include "lkflow/linalg.hpp"
#include "lkflow/superop.hpp"

namespace lkflow {

// Fixed-point sets of purely dissipative generators: dark spaces, invariant
// subspaces, uniqueness certificates and the eigenspace structure of
// canonical terms.

inline constexpr double kNullTol = 1e-9;  // singular values below tol x sigma_max are zero

/// Orthonormal column frame for a subspace of C^{2^n}. Zero columns = trivial.
struct Subspace {
  Matrix frame;

  Subspace() = default;
  explicit Subspace(Matrix f, double tol = 1e-10) : frame(std::move(f)) {
    if (frame.cols() > 0) {
      Matrix g = frame.adjoint() * frame;
      if ((g - Matrix::Identity(frame.cols(), frame.cols())).norm() > tol * frame.cols())
        throw std::invalid_argument("Subspace frame is not orthonormal");
    }
  }

  Eigen::Index dimension() const { return frame.cols(); }
  Matrix projector() const {
    if (frame.cols() == 0) return Matrix::Zero(frame.rows(), frame.rows());
    return frame * frame.adjoint();
  }
};

enum class Uniqueness { Yes, No, Undecided };

inline const char* uniqueness_name(Uniqueness u) {
  switch (u) {
    case Uniqueness::Yes: return "yes";
    case Uniqueness::No: return "no";
    case Uniqueness::Undecided: return "undecided";
  }
  return "?";
}

struct FixedPointReport {
  Subspace dark_space;
  Eigen::Index kernel_dim = -1;  // dim ker(Gamma-hat); -1 when not computed
  Uniqueness unique = Uniqueness::Undecided;
  std::optional<Subspace> witness_subspace;     // orthogonal invariant subspace
  std::optional<Matrix> witness_state;          // second fixed point, if constructed
  std::vector<std::string> certificates;        // criteria applied, e.g. "prop_3_2_5"
};

/// Joint kernel of the jump operators (the nilpotent-term dark space).
inline Subspace dark_space(const std::vector<Matrix>& vs, double rtol = kNullTol) {
  return Subspace(joint_nullspace(vs, rtol));
}

/// Generalized dark space to a prescribed eigenvalue tuple: simultaneous right
/// eigenvectors plus the left-eigenvector condition. Implemented by filtering
/// the eigenvectors of V_1; adequate for small term counts.
inline Subspace generalized_dark_space(const std::vector<Matrix>& vs, const Vector& lambda,
                                       double tol = 1e-8) {
  if (vs.empty() || lambda.size() != Eigen::Index(vs.size()))
    throw std::invalid_argument("generalized_dark_space: eigenvalue tuple mismatch");
  Eigen::Index d = vs[0].rows();
  // right eigenspace of V_1 to lambda_1, then filter with the remaining terms
  Matrix frame = nullspace((vs[0] - lambda(0) * Matrix::Identity(d, d)).eval(), tol);
  for (size_t k = 1; k < vs.size() && frame.cols() > 0; ++k) {
    Matrix resid = vs[k] * frame - lambda(Eigen::Index(k)) * frame;
    Matrix coef = nullspace(resid, tol);  // combinations staying eigen
    frame = orthonormalize_columns((frame * coef).eval());
  }
  if (frame.cols() == 0) return Subspace(Matrix::Zero(d, 0));
  // left condition: psi^dag (sum conj(lambda_k) V_k) = lambda_sum psi^dag
  Matrix vsum = Matrix::Zero(d, d);
  double lam_sum = 0;
  for (size_t k = 0; k < vs.size(); ++k) {
    vsum += std::conj(lambda(Eigen::Index(k))) * vs[k];
    lam_sum += std::norm(lambda(Eigen::Index(k)));
  }
  Matrix resid = vsum.adjoint() * frame - lam_sum * frame;
  Matrix coef = nullspace(resid, tol);
  return Subspace(orthonormalize_columns((frame * coef).eval()));
}

struct KernelFixedPoints {
  std::vector<Matrix> hermitian_basis;
  std::optional<DensityMatrix> representative;
};

/// Null space of Gamma-hat as a Hermitian-symmetrized basis, plus a PSD
/// representative obtained by propagating the maximally mixed state to
/// stationarity and projecting onto the kernel.
inline KernelFixedPoints kernel_fixed_points(const Matrix& gamma, int n,
                                             double rtol = kNullTol) {
  Eigen::Index d = Eigen::Index(1) << n;
  KernelFixedPoints out;
  Matrix null = nullspace(gamma, rtol);
  if (null.cols() == 0)
    throw std::runtime_error(
        "kernel_fixed_points: empty kernel; not a valid Lindblad dissipator");
  // Hermitian-symmetrize: X -> (X + X^dag), i(X - X^dag), re-reduce.
  RealSpan span(1e-8);
  for (Eigen::Index j = 0; j < null.cols(); ++j) {
    Matrix x = unvec(null.col(j));
    Matrix h1 = x + x.adjoint();
    Matrix h2 = Complex(0, 1) * (x - x.adjoint());
    for (Matrix* h : {&h1, &h2}) {
      if (h->norm() < 1e-12) continue;
      Matrix hn = *h / h->norm();
      if (span.add(hn)) out.hermitian_basis.push_back(hn);
    }
  }
  // dynamical representative: rho0 = 1/2^n propagated until stationary
  Matrix rho = Matrix::Identity(d, d) / double(d);
  double t = 1.0;
  for (int it = 0; it < 64; ++it) {
    rho = propagate(gamma, rho, t);
    if ((gamma * vec(rho)).norm() < 1e-9) break;
    t *= 2;
  }
  // project onto the kernel and renormalize
  Vector v = vec(rho);
  Vector proj = null * (null.adjoint() * v);
  Matrix rep = unvec(proj);
  rep = 0.5 * (rep + rep.adjoint().eval());
  Complex tr = rep.trace();
  if (std::abs(tr) > 1e-10) {
    rep /= tr.real();
    Eigen::SelfAdjointEigenSolver<Matrix> es(rep, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() > -1e-7) out.representative = DensityMatrix(rep, 1e-7, 1e-7);
  }
  return out;
}

/// True iff every V_k maps S into S and sum V_k^dag V_k maps S into S.
inline bool invariant_subspace_test(const std::vector<Matrix>& vs, const Subspace& s,
                                    double tol = 1e-9) {
  if (s.dimension() == 0) return true;
  Eigen::Index d = vs.empty() ? s.frame.rows() : vs[0].rows();
  Matrix p = s.projector();
  Matrix q = Matrix::Identity(d, d) - p;
  Matrix vdv = Matrix::Zero(d, d);
  double scale = 1.0;
  for (const auto& v : vs) {
    if ((q * v * p).norm() > tol * std::max(1.0, v.norm())) return false;
    vdv += v.adjoint() * v;
    scale = std::max(scale, v.norm());
  }
  return (q * vdv * p).norm() <= tol * std::max(1.0, scale * scale);
}

struct PureFixedPointResult {
  bool fixed = false;
  Vector lambdas;
};

/// Checks V_k psi = lambda_k psi for all k together with the left-eigenvector
/// condition on sum conj(lambda_k) V_k.
inline PureFixedPointResult pure_fixed_point_test(const std::vector<Matrix>& vs, const Vector& psi,
                                                  double tol = 1e-9) {
  PureFixedPointResult out;
  Vector v = psi / psi.norm();
  out.lambdas.resize(Eigen::Index(vs.size()));
  Eigen::Index d = v.size();
  Matrix vsum = Matrix::Zero(d, d);
  double lam_sum = 0;
  for (size_t k = 0; k < vs.size(); ++k) {
    Complex lam = v.adjoint() * (vs[k] * v);
    out.lambdas(Eigen::Index(k)) = lam;
    if ((vs[k] * v - lam * v).norm() > tol * std::max(1.0, vs[k].norm())) return out;
    vsum += std::conj(lam) * vs[k];
    lam_sum += std::norm(lam);
  }
  Vector left = vsum.adjoint() * v - lam_sum * v;
  double scale = std::max(1.0, vsum.norm());
  out.fixed = left.norm() <= tol * scale;
  return out;
}

inline bool is_nilpotent(const Matrix& v, double tol = 1e-8) {
  Eigen::ComplexEigenSolver<Matrix> es(v, false);
  return es.eigenvalues().cwiseAbs().maxCoeff() <= tol * std::max(1.0, v.norm());
}

/// Reduced generator on her(S) for an invariant subspace S, as an r^2 x r^2
/// superoperator in the frame basis. Per the invariant-subspace identity, a
/// state is fixed iff its support frame is invariant and its restriction is
/// fixed for the reduced generator.
inline Matrix reduced_generator(const std::vector<Matrix>& vs, const Subspace& s) {
  if (!invariant_subspace_test(vs, s))
    throw std::invalid_argument("reduced_generator: subspace is not invariant");
  Eigen::Index r = s.dimension();
  Eigen::Index d = s.frame.rows();
  Matrix w = s.frame;
  Matrix q = Matrix::Identity(d, d) - s.projector();
  Matrix out = Matrix::Zero(r * r, r * r);
  Matrix kk = Matrix::Zero(r, r);
  for (const auto& v : vs) {
    Matrix a = w.adjoint() * v * w;
    out += dissipator_matrix(a);
    Matrix c = q * v * w;
    kk += c.adjoint() * c;  // vanishes for truly invariant S
  }
  Matrix id = Matrix::Identity(r, r);
  out += 0.5 * (kron(id, kk) + kron(kk.transpose(), id));
  return out;
}

namespace detail {

/// Smallest subspace containing seed, invariant under all mats (span growth).
inline Matrix invariant_closure(const std::vector<Matrix>& mats, const Matrix& seed,
                                double rtol = 1e-9) {
  Matrix frame = orthonormalize_columns(seed);
  for (int guard = 0; guard < 4 * int(seed.rows()); ++guard) {
    Eigen::Index before = frame.cols();
    Matrix grown(frame.rows(), frame.cols() * (1 + mats.size()));
    grown.leftCols(frame.cols()) = frame;
    Eigen::Index c = frame.cols();
    for (const auto& m : mats) {
      grown.middleCols(c, frame.cols()) = m * frame;
      c += frame.cols();
    }
    frame = orthonormalize_columns(grown, rtol);
    if (frame.cols() == before) break;
  }
  return frame;
}

/// Eigenvalue clusters of a matrix with geometric eigenspaces computed as
/// numerical null spaces (robust for defective matrices).
inline std::vector<std::pair<Complex, Matrix>> eigen_clusters(const Matrix& m,
                                                              double cluster_tol = 1e-6) {
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  double scale = std::max(1.0, m.norm());
  std::vector<Complex> reps;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    Complex lam = es.eigenvalues()(i);
    bool found = false;
    for (auto& r : reps)
      if (std::abs(lam - r) <= cluster_tol * scale) {
        found = true;
        break;
      }
    if (!found) reps.push_back(lam);
  }
  std::vector<std::pair<Complex, Matrix>> out;
  Eigen::Index d = m.rows();
  for (Complex lam : reps) {
    Matrix space = nullspace((m - lam * Matrix::Identity(d, d)).eval(), 1e-7);
    if (space.cols() > 0) out.emplace_back(lam, space);
  }
  return out;
}

}  // namespace detail

struct CertificateOptions {
  int random_restarts = 64;
  uint64_t seed = 0x5eed;
  double tol = 1e-8;
};

/// Uniqueness certificate for a target fixed point. Applies, in order:
/// commuting-nilpotent criterion, the no-orthogonal-eigenvector criterion on
/// sum V_k, a kernel-rank check of Gamma-hat, and a bounded search for an
/// orthogonal invariant subspace seeded by eigenvectors of sum V_k plus random
/// restarts. Returns yes / no (with witness) / undecided.
inline FixedPointReport uniqueness_certificate(const std::vector<LindbladTerm>& terms,
                                               const DensityMatrix& target, int n,
                                               CertificateOptions opts = {}) {
  Eigen::Index d = Eigen::Index(1) << n;
  std::vector<Matrix> vs;
  for (const auto& t : terms) vs.push_back(t.V);
  Matrix gamma = dissipator_matrix(terms, d);
  double scale = std::max(1.0, gamma.norm());
  if ((gamma * vec(target.rho)).norm() > 1e-8 * scale)
    throw std::invalid_argument("uniqueness_certificate: target is not a fixed point");

  FixedPointReport rep;

  bool all_nilpotent = true;
  for (const auto& v : vs) all_nilpotent &= is_nilpotent(v);

  // Dark space: joint kernel for nilpotent terms, otherwise the lambda tuple
  // observed on the target support (general D via eigen filtering).
  Subspace dark = dark_space(vs);
  rep.dark_space = dark;

  if (n <= 4) {
    rep.kernel_dim = d * d - matrix_rank(gamma, kNullTol);
  }

  auto witness_from_dark = [&](const Subspace& ds) {
    // A second fixed point from another dark vector.
    for (Eigen::Index j = 0; j < ds.dimension(); ++j) {
      Matrix cand = ds.frame.col(j) * ds.frame.col(j).adjoint();
      if ((cand - target.rho).norm() > 1e-6) {
        rep.witness_state = cand;
        return;
      }
    }
  };

  // (a) commuting nilpotent terms (or a single nilpotent term)
  if (all_nilpotent) {
    bool commuting = true;
    for (size_t i = 0; i + 1 < vs.size() && commuting; ++i)
      for (size_t j = i + 1; j < vs.size(); ++j)
        if ((vs[i] * vs[j] - vs[j] * vs[i]).norm() >
            1e-9 * std::max(1.0, vs[i].norm() * vs[j].norm())) {
          commuting = false;
          break;
        }
    if (vs.size() == 1 || commuting) {
      rep.certificates.push_back("prop_3_2_5");
      if (dark.dimension() == 1) {
        rep.unique = Uniqueness::Yes;
        return rep;
      }
      rep.unique = Uniqueness::No;
      witness_from_dark(dark);
      return rep;
    }
  }

  // (b) every eigenvector of sum V_k lies within the dark space
  Matrix msum = Matrix::Zero(d, d);
  for (const auto& v : vs) msum += v;
  auto clusters = detail::eigen_clusters(msum);
  Matrix pd = dark.projector();
  bool all_in_dark = dark.dimension() > 0;
  for (auto& [lam, space] : clusters) {
    Eigen::JacobiSVD<Matrix> svd(pd * space);
    double smin = svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
    if (smin < opts.tol) {
      all_in_dark = false;
      break;
    }
  }
  if (all_in_dark) {
    rep.certificates.push_back("prop_3_2_4");
    if (dark.dimension() == 1) {
      rep.unique = Uniqueness::Yes;
      return rep;
    }
    rep.unique = Uniqueness::No;
    witness_from_dark(dark);
    return rep;
  }

  // kernel-rank shortcut: a one-dimensional kernel pins the fixed point
  if (rep.kernel_dim == 1) {
    rep.certificates.push_back("kernel_rank_one");
    rep.unique = Uniqueness::Yes;
    return rep;
  }

  // (c) bounded search for an invariant subspace orthogonal to the dark space
  rep.certificates.push_back("invariant_subspace_search");
  Matrix q = Matrix::Identity(d, d) - pd;
  std::vector<Matrix> closure_mats = vs;
  {
    Matrix vdv = Matrix::Zero(d, d);
    for (const auto& v : vs) vdv += v.adjoint() * v;
    closure_mats.push_back(vdv);
  }
  std::vector<Vector> seeds;
  for (auto& [lam, space] : clusters)
    for (Eigen::Index j = 0; j < space.cols(); ++j) {
      Vector s = q * space.col(j);
      if (s.norm() > opts.tol) seeds.push_back(s / s.norm());
    }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  for (int r = 0; r < opts.random_restarts; ++r) {
    Vector s(d);
    for (Eigen::Index i = 0; i < d; ++i) s(i) = Complex(gauss(rng), gauss(rng));
    s = q * s;
    if (s.norm() > opts.tol) seeds.push_back(s / s.norm());
  }
  for (const Vector& s : seeds) {
    Matrix grown = detail::invariant_closure(closure_mats, s);
    if (grown.cols() == 0 || grown.cols() >= d) continue;
    if ((pd * grown).norm() > opts.tol) continue;  // not orthogonal to dark space
    Subspace inv(grown);
    if (!invariant_subspace_test(vs, inv, 1e-8)) continue;
    rep.certificates.push_back("orthogonal_invariant_subspace_found");
    rep.unique = Uniqueness::No;
    rep.witness_subspace = inv;
    // witness state from the reduced generator's kernel
    Matrix red = reduced_generator(vs, inv);
    auto kfp = kernel_fixed_points(red, 0 /*unused*/, kNullTol);
    if (!kfp.representative) {
      // fall back to any Hermitian kernel element shifted to PSD
      if (!kfp.hermitian_basis.empty()) {
        Matrix h = kfp.hermitian_basis[0];
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < 0) h = -h;
        h /= h.trace().real();
        rep.witness_state = inv.frame * h * inv.frame.adjoint();
      }
    } else {
      rep.witness_state = inv.frame * kfp.representative->rho * inv.frame.adjoint();
    }
    return rep;
  }
  // Exhaustive when every eigenvalue cluster of sum V_k is geometrically simple.
  bool all_simple = true;
  for (auto& [lam, space] : clusters) all_simple &= (space.cols() == 1);
  if (all_simple) {
    rep.certificates.push_back("eigenvector_closure_exhaustive");
    rep.unique = (dark.dimension() == 1) ? Uniqueness::Yes : Uniqueness::No;
    if (rep.unique == Uniqueness::No) witness_from_dark(dark);
    return rep;
  }
  rep.unique = Uniqueness::Undecided;
  return rep;
}

struct SingleTermReport {
  std::string case_label;           // "1a", "1b" or "none"
  std::optional<Vector> psi;        // the pure fixed point, when present
  std::optional<Matrix> second_fixed_point;
  Uniqueness unique = Uniqueness::Undecided;
  int pure_fixed_point_count = 0;   // kernel vectors + simultaneous L/R eigenvectors
};

/// Classification of the pure-state fixed points of a single jump operator,
/// building the complementary Moore-Penrose fixed point in case 1a.
inline SingleTermReport single_term_analysis(const Matrix& v, double tol = 1e-8) {
  Eigen::Index d = v.rows();
  SingleTermReport out;
  Matrix ker = nullspace(v, kNullTol);
  auto clusters = detail::eigen_clusters(v);

  // simultaneous left/right eigenvectors
  std::vector<Vector> sim;
  for (auto& [lam, space] : clusters) {
    if (std::abs(lam) <= tol * std::max(1.0, v.norm())) continue;
    for (Eigen::Index j = 0; j < space.cols(); ++j) {
      Vector x = space.col(j);
      if ((v.adjoint() * x - std::conj(lam) * x).norm() <= tol * std::max(1.0, v.norm()))
        sim.push_back(x);
    }
  }
  out.pure_fixed_point_count = int(ker.cols()) + int(sim.size());

  auto block_form_ok = [&](const Vector& psi) {
    Matrix p = psi * psi.adjoint();
    Matrix q = Matrix::Identity(d, d) - p;
    double s = std::max(1.0, v.norm());
    if ((q * v * p).norm() > tol * s) return false;
    if ((p * v * q).norm() > tol * s) return false;
    Matrix vperp = q * v * q;
    // remaining block must be full rank on the complement
    return matrix_rank(vperp, kNullTol) == d - 1;
  };

  if (ker.cols() == 1 && sim.empty()) {
    out.case_label = "1b";
    out.psi = ker.col(0);
    // unique iff no eigenvector lies entirely in the complement of psi
    Matrix p = ker.col(0) * ker.col(0).adjoint();
    bool ortho_eig = false;
    for (auto& [lam, space] : clusters) {
      Eigen::JacobiSVD<Matrix> svd(p * space);
      double smin = svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
      if (smin < tol) {
        ortho_eig = true;
        break;
      }
    }
    out.unique = ortho_eig ? Uniqueness::Undecided : Uniqueness::Yes;
    return out;
  }

  // case 1a: psi a simultaneous L/R eigenvector (possibly a lone kernel vector
  // that is also a left null vector), complement block full rank
  std::vector<Vector> candidates = sim;
  if (ker.cols() == 1) candidates.push_back(ker.col(0));
  for (const Vector& psi : candidates) {
    if (!block_form_ok(psi)) continue;
    out.case_label = "1a";
    out.psi = psi;
    Matrix q = Matrix::Identity(d, d) - psi * psi.adjoint();
    Matrix vperp = q * v * q;
    Matrix m = vperp.adjoint() * vperp;
    Matrix pinv = m.completeOrthogonalDecomposition().pseudoInverse();
    out.second_fixed_point = pinv / pinv.trace().real();
    out.unique = Uniqueness::No;
    return out;
  }
  out.case_label = "none";
  out.unique = Uniqueness::Undecided;
  return out;
}

/// Eigenspace structure of a canonical term's unital and mixed components,
/// each space listed by the Pauli words selected by commutation predicates.
struct CanonicalEigenstructure {
  std::vector<PauliString> ker_u;      // commute with both factors
  std::vector<PauliString> e_minus_2;  // anticommute with exactly one factor
  std::vector<PauliString> e_minus_4;  // anticommute with both factors
  std::vector<PauliString> ker_m;      // anticommute with at least one factor
  std::vector<PauliString> range_m;    // equals e_minus_4
};

inline CanonicalEigenstructure canonical_eigenstructure(const LindbladTerm& term) {
  if (term.kind != LindbladTerm::Kind::Canonical || !term.canonical)
    throw std::invalid_argument("canonical_eigenstructure: requires a canonical term");
  const PauliString& p = term.canonical->p;
  PauliString q(star_product(term.canonical->p, term.canonical->m).axes);
  int n = int(p.num_qubits());
  CanonicalEigenstructure out;
  for (const PauliString& m : all_strings(n, /*skip_identity=*/false)) {
    bool ap = anticommutes(p, m);
    bool aq = anticommutes(q, m);
    if (!ap && !aq) out.ker_u.push_back(m);
    if (ap != aq) out.e_minus_2.push_back(m);
    if (ap && aq) {
      out.e_minus_4.push_back(m);
      out.range_m.push_back(m);
    }
    if (ap || aq) out.ker_m.push_back(m);
  }
  return out;
}

}  // namespace lkflow
