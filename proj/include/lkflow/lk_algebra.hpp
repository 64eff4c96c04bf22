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

#include "lkflow/linalg.hpp"
#include "lkflow/superop.hpp"

namespace lkflow {

// Bases of the Lindblad-Kossakowski Lie algebra and its unital subalgebra,
// the translation ideal, the chi projection and a generic numerical
// Lie-closure engine. Superoperators are kept in the Kronecker (vec)
// representation; spans are real-linear.

/// Rank tolerance for linear independence: residual > 1e-8 x input norm.
inline constexpr double kRankTol = 1e-8;

struct OperatorBasis {
  std::vector<Matrix> elements;  // linearly independent spanning set
  int n = 0;

  size_t dim() const { return elements.size(); }
};

struct CartanSplit {
  OperatorBasis k_part;  // skew-Hermitian
  OperatorBasis p_part;  // Hermitian
};

/// Splits a basis into Hermitian / skew-Hermitian elements. Mixed elements are
/// split into their two components and re-reduced.
inline CartanSplit cartan_split(const OperatorBasis& basis) {
  CartanSplit out;
  out.k_part.n = out.p_part.n = basis.n;
  RealSpan kspan(kRankTol), pspan(kRankTol);
  for (const Matrix& a : basis.elements) {
    Matrix h = 0.5 * (a + a.adjoint());
    Matrix s = 0.5 * (a - a.adjoint());
    if (h.norm() > 1e-12 && pspan.add(h)) out.p_part.elements.push_back(h);
    if (s.norm() > 1e-12 && kspan.add(s)) out.k_part.elements.push_back(s);
  }
  return out;
}

/// C0 = 2^{-(2n-1)} sum_p sigma-hat_p^2: the orthogonal projection acting as
/// the identity on traceless vecs and annihilating vec(1).
inline Matrix c0_matrix(int n) {
  if (n > 4) throw std::invalid_argument("c0_matrix: guarded to n <= 4");
  Eigen::Index dd = Eigen::Index(1) << (2 * n);
  Matrix c = Matrix::Zero(dd, dd);
  for (const PauliString& p : all_strings(n)) {
    Matrix hp = hat_sigma(p);
    c += hp * hp;
  }
  return c / std::pow(2.0, 2 * n - 1);
}

inline bool in_gE(const Matrix& a, int n, double tol = 1e-8) {
  Eigen::Index d = Eigen::Index(1) << n;
  Vector one = vec(Matrix::Identity(d, d));
  return (a.adjoint() * one).norm() <= tol * std::max(1.0, a.norm()) * one.norm();
}

/// chi(A) = [C0, A]; orthogonal projection onto the translation ideal.
/// Input must have traceless range.
inline Matrix chi_projection(const Matrix& a, int n) {
  if (!in_gE(a, n))
    throw std::invalid_argument("chi_projection: operator range is not traceless");
  Matrix c0 = c0_matrix(n);
  return c0 * a - a * c0;
}

/// Translation operator tau_m = chi(i sigma-hat_q sigma-hat_p^+) for any star
/// preimage (p, q) of m; independent of the choice. tau_m vec(1) = vec(sigma_m)
/// and tau_m annihilates traceless inputs.
inline Matrix translation_tau(const PauliString& m) {
  if (m.is_identity_axes())
    throw std::invalid_argument("translation_tau: identity direction");
  int n = int(m.num_qubits());
  if (n > 4) throw std::invalid_argument("translation_tau: guarded to n <= 4");
  auto pre = star_preimages(m);
  const auto& [p, q] = pre.front();
  Matrix qt = Complex(0, 1) * hat_sigma(q) * hat_sigma_plus(p);
  return chi_projection(qt, n);
}

/// Spanning set {i sigma-hat_p, sigma-hat_p^2, {sigma-hat_a, sigma-hat_b}_+}
/// completed to a basis of the unital LK algebra, dimension (4^n - 1)^2.
/// Guarded to n <= 2 (full enumeration).
inline OperatorBasis unital_basis(int n) {
  if (n > 2) throw std::invalid_argument("unital_basis: full enumeration guarded to n <= 2");
  OperatorBasis out;
  out.n = n;
  RealSpan span(kRankTol);
  auto add = [&](const Matrix& m) {
    if (span.add(m)) out.elements.push_back(m);
  };
  auto strings = all_strings(n);
  std::vector<Matrix> hats;
  hats.reserve(strings.size());
  for (const auto& p : strings) hats.push_back(hat_sigma(p));
  for (const auto& h : hats) add(Complex(0, 1) * h);
  std::vector<Matrix> sym;  // p-part candidates
  for (size_t a = 0; a < hats.size(); ++a) {
    sym.push_back(hats[a] * hats[a]);
    add(sym.back());
  }
  for (size_t a = 0; a < hats.size(); ++a)
    for (size_t b = a + 1; b < hats.size(); ++b) {
      sym.push_back(hats[a] * hats[b] + hats[b] * hats[a]);
      add(sym.back());
    }
  // k-part completion: [a0, p0] brackets close the algebra.
  for (size_t a = 0; a < hats.size(); ++a) {
    Matrix sq = hats[a] * hats[a];
    for (const Matrix& s : sym) add(sq * s - s * sq);
  }
  return out;
}

/// Unital basis together with the 4^n - 1 translation operators; dimension
/// (4^n - 1) 4^n.
inline OperatorBasis nonunital_basis(int n) {
  OperatorBasis out = unital_basis(n);
  for (const PauliString& m : all_strings(n)) out.elements.push_back(translation_tau(m));
  return out;
}

struct ClosureResult {
  OperatorBasis basis;
  bool capped = false;
};

/// Smallest real Lie algebra containing the generators, as an independent
/// spanning set. Breadth-first over brackets of generators with the frontier,
/// re-reduced each round; deterministic in input order then generation order.
inline ClosureResult lie_closure(const std::vector<Matrix>& generators, size_t cap) {
  if (cap < generators.size() && !generators.empty())
    throw std::invalid_argument("lie_closure: cap below generator count");
  ClosureResult out;
  RealSpan span(kRankTol);
  std::vector<Matrix> gens;
  std::vector<Matrix> frontier;
  for (const Matrix& g : generators) {
    if (g.norm() < 1e-14) continue;
    Matrix gn = g / g.norm();
    gens.push_back(gn);
    if (span.add(gn)) {
      out.basis.elements.push_back(gn);
      frontier.push_back(gn);
    }
  }
  while (!frontier.empty()) {
    std::vector<Matrix> next;
    for (const Matrix& g : gens) {
      for (const Matrix& f : frontier) {
        Matrix c = g * f - f * g;
        double cn = c.norm();
        if (cn < 1e-14) continue;
        c /= cn;
        if (span.add(c)) {
          out.basis.elements.push_back(c);
          next.push_back(c);
          if (out.basis.elements.size() > cap) {
            out.capped = true;
            return out;
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

struct SystemAlgebraReport {
  size_t dim_kc = 0;
  size_t dim_kd = 0;
  size_t dim_g_sigma = 0;
  bool H = false;   // k_c = ad_su(2^n)
  bool WH = false;  // k_d = ad_su(2^n) while k_c is not
  bool A = false;   // g_sigma = full LK algebra (unital or non-unital as applicable)
  bool unital = false;
  bool capped = false;
};

/// Control/extended-control/system Lie algebra dimensions and the H / WH / A
/// flags of a coherently controlled system.
inline SystemAlgebraReport classify_system_algebra(const GeneratorSpec& spec,
                                                   size_t cap_margin = 16) {
  spec.validate();
  int n = spec.n;
  Eigen::Index d = spec.dim();
  size_t full_nonunital = (size_t(1) << (2 * n)) * ((size_t(1) << (2 * n)) - 1);
  size_t cap = full_nonunital + cap_margin;

  std::vector<Matrix> ctrl;
  for (const auto& h : spec.H_controls)
    ctrl.push_back(Complex(0, 1) * hat_ad(GeneratorSpec::checked_hermitian(h)));
  ClosureResult kc = lie_closure(ctrl, cap);

  std::vector<Matrix> ctrl_d = ctrl;
  if (spec.H_d.size() != 0)
    ctrl_d.push_back(Complex(0, 1) * hat_ad(GeneratorSpec::checked_hermitian(spec.H_d)));
  ClosureResult kd = lie_closure(ctrl_d, cap);

  Matrix gamma = dissipator_matrix(spec.dissipators, d);
  Matrix drift = gamma;
  if (spec.H_d.size() != 0)
    drift += Complex(0, 1) * hat_ad(GeneratorSpec::checked_hermitian(spec.H_d));
  std::vector<Matrix> gsig_gens;
  if (drift.norm() > 1e-14) gsig_gens.push_back(drift);
  for (const auto& c : ctrl) gsig_gens.push_back(c);
  ClosureResult gs = lie_closure(gsig_gens, cap);

  SystemAlgebraReport rep;
  rep.dim_kc = kc.basis.dim();
  rep.dim_kd = kd.basis.dim();
  rep.dim_g_sigma = gs.basis.dim();
  rep.capped = kc.capped || kd.capped || gs.capped;
  size_t ad_su_dim = (size_t(1) << (2 * n)) - 1;
  rep.H = (rep.dim_kc == ad_su_dim);
  rep.WH = (rep.dim_kd == ad_su_dim) && !rep.H;
  Vector one = vec(Matrix::Identity(d, d));
  rep.unital = (gamma * one).norm() <= 1e-10 * std::max(1.0, gamma.norm());
  size_t full = rep.unital ? ad_su_dim * ad_su_dim : full_nonunital;
  rep.A = (rep.dim_g_sigma == full);
  return rep;
}

}  // namespace lkflow
