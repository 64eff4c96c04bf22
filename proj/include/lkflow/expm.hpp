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
#include <Eigen/LU>

namespace lkflow {

// Scaling-and-squaring matrix exponential with Pade order selected by the
// 1-norm of the argument (orders 3/5/7/9/13, double-precision thresholds).

namespace expm_detail {

template <typename MatT>
void pade3(const MatT& a, const MatT& a2, MatT& u, MatT& v) {
  const double b[] = {120., 60., 12., 1.};
  MatT id = MatT::Identity(a.rows(), a.cols());
  u = a * (b[3] * a2 + b[1] * id);
  v = b[2] * a2 + b[0] * id;
}

template <typename MatT>
void pade5(const MatT& a, const MatT& a2, const MatT& a4, MatT& u, MatT& v) {
  const double b[] = {30240., 15120., 3360., 420., 30., 1.};
  MatT id = MatT::Identity(a.rows(), a.cols());
  u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

template <typename MatT>
void pade7(const MatT& a, const MatT& a2, const MatT& a4, const MatT& a6, MatT& u, MatT& v) {
  const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
  MatT id = MatT::Identity(a.rows(), a.cols());
  u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

template <typename MatT>
void pade9(const MatT& a, const MatT& a2, const MatT& a4, const MatT& a6, const MatT& a8, MatT& u,
           MatT& v) {
  const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                      2162160.,     110880.,     3960.,       90.,        1.};
  MatT id = MatT::Identity(a.rows(), a.cols());
  u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

template <typename MatT>
void pade13(const MatT& a, const MatT& a2, const MatT& a4, const MatT& a6, MatT& u, MatT& v) {
  const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                      1187353796428800.,  129060195264000.,   10559470521600.,
                      670442572800.,      33522128640.,       1323241920.,
                      40840800.,          960960.,            16380.,
                      182.,               1.};
  MatT id = MatT::Identity(a.rows(), a.cols());
  MatT w = b[13] * a6 + b[11] * a4 + b[9] * a2;
  u = a * (a6 * w + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace expm_detail

template <typename MatT>
MatT expm(const MatT& arg) {
  using namespace expm_detail;
  const double theta3 = 1.495585217958292e-2;
  const double theta5 = 2.539398330063230e-1;
  const double theta7 = 9.504178996162932e-1;
  const double theta9 = 2.097847961257068;
  const double theta13 = 5.371920351148152;

  double norm1 = arg.cwiseAbs().colwise().sum().maxCoeff();
  MatT u, v;
  int squarings = 0;
  MatT a = arg;
  if (norm1 <= theta9) {
    MatT a2 = a * a;
    if (norm1 <= theta3) {
      pade3(a, a2, u, v);
    } else {
      MatT a4 = a2 * a2;
      if (norm1 <= theta5) {
        pade5(a, a2, a4, u, v);
      } else {
        MatT a6 = a4 * a2;
        if (norm1 <= theta7) {
          pade7(a, a2, a4, a6, u, v);
        } else {
          MatT a8 = a6 * a2;
          pade9(a, a2, a4, a6, a8, u, v);
        }
      }
    }
  } else {
    double l2 = std::log2(norm1 / theta13);
    squarings = std::max(0, int(std::ceil(l2)));
    a = arg / std::pow(2.0, squarings);
    MatT a2 = a * a;
    MatT a4 = a2 * a2;
    MatT a6 = a4 * a2;
    pade13(a, a2, a4, a6, u, v);
  }
  MatT num = v + u;
  MatT den = v - u;
  MatT r = den.partialPivLu().solve(num);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace lkflow
