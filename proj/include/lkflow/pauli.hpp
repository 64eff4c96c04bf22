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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lkflow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Single-site Pauli symbol. The ordering 1 < x < y < z is total and fixed;
/// it drives all basis indexing in the library.
enum class Axis : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char axis_char(Axis a) {
  switch (a) {
    case Axis::I: return '1';
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

inline Axis axis_from_char(char c) {
  switch (c) {
    case '1': case 'i': case 'I': return Axis::I;
    case 'x': case 'X': return Axis::X;
    case 'y': case 'Y': return Axis::Y;
    case 'z': case 'Z': return Axis::Z;
    default: throw std::invalid_argument(std::string("invalid Pauli symbol '") + c + "'");
  }
}

/// A signed n-qubit Pauli word: an axis tuple together with a global sign.
/// The all-identity word with sign +1 is the multiplicative unit of the
/// star product. Text form is e.g. "xz1y" with an optional leading '-'.
struct PauliString {
  std::vector<Axis> axes;
  int sign = +1;

  PauliString() = default;
  PauliString(std::vector<Axis> a, int s = +1) : axes(std::move(a)), sign(s) {
    if (axes.empty()) throw std::invalid_argument("PauliString needs at least one site");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  }

  static PauliString identity(size_t n) {
    return PauliString(std::vector<Axis>(n, Axis::I), +1);
  }

  static PauliString parse(const std::string& text) {
    std::string s = text;
    int sign = +1;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      sign = (s[0] == '-') ? -1 : +1;
      s = s.substr(1);
    }
    if (s.empty()) throw std::invalid_argument("empty Pauli string");
    std::vector<Axis> axes;
    axes.reserve(s.size());
    for (char c : s) axes.push_back(axis_from_char(c));
    return PauliString(std::move(axes), sign);
  }

  size_t num_qubits() const { return axes.size(); }

  bool is_identity_axes() const {
    for (Axis a : axes)
      if (a != Axis::I) return false;
    return true;
  }

  std::string str() const {
    std::string out;
    if (sign < 0) out.push_back('-');
    for (Axis a : axes) out.push_back(axis_char(a));
    return out;
  }

  PauliString negated() const { return PauliString(axes, -sign); }

  bool operator==(const PauliString& o) const { return sign == o.sign && axes == o.axes; }
  bool operator!=(const PauliString& o) const { return !(*this == o); }
};

/// An exact product of Pauli words: i^phase times an unsigned axis tuple.
/// Phase composition is additive mod 4; any word squares to phase 0.
struct PhasedPauli {
  std::vector<Axis> axes;
  int phase = 0;  // power of i, 0..3

  std::string str() const {
    static const char* ph[4] = {"", "i*", "-", "-i*"};
    std::string out = ph[phase & 3];
    for (Axis a : axes) out.push_back(axis_char(a));
    return out;
  }
};

/// Element of the group of {1, sigma_x} tensor words; acts on standard basis
/// vectors by bit flips.
struct XGroupElement {
  std::vector<bool> flips;  // true = sigma_x at that site

  XGroupElement() = default;
  explicit XGroupElement(std::vector<bool> f) : flips(std::move(f)) {
    if (flips.empty()) throw std::invalid_argument("XGroupElement needs at least one site");
  }
  static XGroupElement from_mask(uint64_t mask, size_t n) {
    std::vector<bool> f(n);
    for (size_t j = 0; j < n; ++j) f[j] = (mask >> (n - 1 - j)) & 1u;  // site 0 = high bit
    return XGroupElement(std::move(f));
  }

  size_t num_qubits() const { return flips.size(); }

  uint64_t mask() const {
    uint64_t m = 0;
    size_t n = flips.size();
    for (size_t j = 0; j < n; ++j)
      if (flips[j]) m |= uint64_t(1) << (n - 1 - j);
    return m;
  }

  PauliString pauli() const {
    std::vector<Axis> a(flips.size());
    for (size_t j = 0; j < flips.size(); ++j) a[j] = flips[j] ? Axis::X : Axis::I;
    return PauliString(std::move(a));
  }

  std::string str() const { return pauli().str(); }
};

namespace detail {

// sigma_a * sigma_b = i^phase * sigma_c on a single site; phase in {0,1,3}.
inline std::pair<Axis, int> site_product(Axis a, Axis b) {
  if (a == Axis::I) return {b, 0};
  if (b == Axis::I) return {a, 0};
  if (a == b) return {Axis::I, 0};
  int ia = int(a), ib = int(b);
  // third axis: indices {1,2,3} with the one not equal to ia, ib
  Axis c = Axis(6 - ia - ib);
  // cyclic (x,y,z): sigma_x sigma_y = i sigma_z etc.; reversed order gives -i.
  bool cyc = (ib - ia == 1) || (ib - ia == -2);
  return {c, cyc ? 1 : 3};
}

// Star product on one site: result axis and sign, with sigma_a sigma_b = (sign i) sigma_c
// for distinct non-identity axes.
inline std::pair<Axis, int> site_star(Axis a, Axis b) {
  if (a == b) return {Axis::I, +1};
  if (b == Axis::I) return {a, +1};
  if (a == Axis::I) return {b, +1};
  auto [c, ph] = site_product(a, b);
  return {c, ph == 1 ? +1 : -1};
}

inline void require_same_length(const PauliString& p, const PauliString& q) {
  if (p.num_qubits() != q.num_qubits())
    throw std::invalid_argument("Pauli string length mismatch");
}

}  // namespace detail

/// Index-level star product p * q = m: per-site star results with the overall
/// sign collecting per-site signs and the input signs.
inline PauliString star_product(const PauliString& p, const PauliString& q) {
  detail::require_same_length(p, q);
  std::vector<Axis> axes(p.num_qubits());
  int sign = p.sign * q.sign;
  for (size_t k = 0; k < axes.size(); ++k) {
    auto [c, s] = detail::site_star(p.axes[k], q.axes[k]);
    axes[k] = c;
    sign *= s;
  }
  return PauliString(std::move(axes), sign);
}

/// Exact matrix-level product sigma_p sigma_q = i^phase sigma_axes.
inline PhasedPauli string_product(const PauliString& p, const PauliString& q) {
  detail::require_same_length(p, q);
  PhasedPauli out;
  out.axes.resize(p.num_qubits());
  int phase = 0;
  for (size_t k = 0; k < out.axes.size(); ++k) {
    auto [c, ph] = detail::site_product(p.axes[k], q.axes[k]);
    out.axes[k] = c;
    phase += ph;
  }
  if (p.sign * q.sign < 0) phase += 2;
  out.phase = phase & 3;
  return out;
}

/// Number of sites where both axes differ and neither is the identity.
inline int commutation_epsilon(const PauliString& p, const PauliString& q) {
  detail::require_same_length(p, q);
  int eps = 0;
  for (size_t k = 0; k < p.num_qubits(); ++k) {
    Axis a = p.axes[k], b = q.axes[k];
    if (a != b && a != Axis::I && b != Axis::I) ++eps;
  }
  return eps;
}

inline bool commutes(const PauliString& p, const PauliString& q) {
  return commutation_epsilon(p, q) % 2 == 0;
}

inline bool anticommutes(const PauliString& p, const PauliString& q) {
  return !commutes(p, q);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline const Matrix& single_site_matrix(Axis a) {
  static const Matrix I2 = Matrix::Identity(2, 2);
  static const Matrix X = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  static const Matrix Y = (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  static const Matrix Z = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  switch (a) {
    case Axis::I: return I2;
    case Axis::X: return X;
    case Axis::Y: return Y;
    case Axis::Z: return Z;
  }
  return I2;
}

inline constexpr size_t kMaxDenseQubits = 12;

/// Dense 2^n x 2^n matrix of a signed Pauli word.
inline Matrix dense_matrix(const PauliString& p) {
  if (p.num_qubits() > kMaxDenseQubits)
    throw std::invalid_argument("dense_matrix: qubit count exceeds dense-storage guard");
  Matrix out = single_site_matrix(p.axes[0]);
  for (size_t k = 1; k < p.num_qubits(); ++k) out = kron(out, single_site_matrix(p.axes[k]));
  if (p.sign < 0) out = -out;
  return out;
}

inline Matrix dense_matrix(const PhasedPauli& p) {
  static const Complex iphase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Matrix out = dense_matrix(PauliString(p.axes));
  return iphase[p.phase & 3] * out;
}

/// Lexicographic index of an axis tuple with 1 < x < y < z; identity is 0.
inline size_t pauli_index(const std::vector<Axis>& axes) {
  size_t idx = 0;
  for (Axis a : axes) idx = idx * 4 + size_t(a);
  return idx;
}

inline std::vector<Axis> axes_from_index(size_t idx, size_t n) {
  std::vector<Axis> axes(n);
  for (size_t k = n; k-- > 0;) {
    axes[k] = Axis(idx & 3);
    idx >>= 2;
  }
  return axes;
}

/// All axis tuples of length n in lexicographic order; identity first unless skipped.
inline std::vector<PauliString> all_strings(size_t n, bool skip_identity = true) {
  size_t total = size_t(1) << (2 * n);
  std::vector<PauliString> out;
  out.reserve(total - (skip_identity ? 1 : 0));
  for (size_t idx = skip_identity ? 1 : 0; idx < total; ++idx)
    out.emplace_back(axes_from_index(idx, n));
  return out;
}

/// All ordered pairs (p, q) of unsigned words with p * q = m exactly and
/// p * q != q * p. There are 4^{n-1} of them for every non-identity m.
inline std::vector<std::pair<PauliString, PauliString>> star_preimages(const PauliString& m) {
  if (m.is_identity_axes())
    throw std::invalid_argument("star_preimages: direction must not be the identity string");
  std::vector<std::pair<PauliString, PauliString>> out;
  for (PauliString& p : all_strings(m.num_qubits())) {
    if (!anticommutes(p, m)) continue;
    // candidate partner: q has the axes of p * m
    PauliString q(star_product(p, m).axes);
    if (q.is_identity_axes()) continue;
    if (star_product(p, q) == m) out.emplace_back(std::move(p), std::move(q));
  }
  return out;
}

/// Basis-vector index j with G e_k = e_j. An involution.
inline size_t xgroup_action(const XGroupElement& g, size_t k) {
  size_t dim = size_t(1) << g.num_qubits();
  if (k >= dim) throw std::out_of_range("xgroup_action: basis index out of range");
  return k ^ g.mask();
}

}  // namespace lkflow
