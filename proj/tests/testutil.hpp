// Copyright 2026 The weylsteer Authors
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

// Reference computations kept independent of the library internals.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

namespace weylsteer {
namespace testutil {

using Cplx = std::complex<double>;
using MatXc = Eigen::MatrixXcd;

// Truncated Taylor series with scaling and squaring.
inline MatXc taylor_expm(const MatXc &A) {
  const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
  const int s =
      std::max(0, int(std::ceil(std::log2(std::max(nrm, 1e-300)))) + 1);
  const MatXc B = A / std::pow(2., s);
  MatXc term = MatXc::Identity(A.rows(), A.cols()), out = term;
  for (int k = 1; k < 30; ++k) {
    term = term * B / double(k);
    out += term;
  }
  for (int i = 0; i < s; ++i) out = out * out;
  return out;
}

// e^{-i H t}
inline MatXc evolve(const MatXc &H, double t) {
  return taylor_expm(Cplx(0, -t) * H);
}

inline Eigen::Matrix2cd sx() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2cd sy() {
  Eigen::Matrix2cd m;
  m << 0, Cplx(0, -1), Cplx(0, 1), 0;
  return m;
}
inline Eigen::Matrix2cd sz() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd &a,
                              const Eigen::Matrix2cd &b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// Makhlin invariants (Re G1, Im G1, G2) from the magic-basis Gram matrix.
inline Eigen::Vector3d makhlin(const Eigen::Matrix4cd &U) {
  Eigen::Matrix4cd Q;
  const Cplx i(0, 1);
  Q << 1, 0, 0, i, 0, i, 1, 0, 0, i, -1, 0, 1, 0, 0, -i;
  Q /= std::sqrt(2.);
  const Cplx det = U.determinant();
  const Eigen::Matrix4cd UB = Q.adjoint() * (U / std::pow(det, 0.25)) * Q;
  const Eigen::Matrix4cd m = UB.transpose() * UB;
  const Cplx tr = m.trace(), tr2 = (m * m).trace();
  const Cplx G1 = tr * tr / 16., G2 = (tr * tr - tr2) / 4.;
  return {G1.real(), G1.imag(), G2.real()};
}

inline Eigen::Matrix4cd canonical(double c1, double c2, double c3) {
  const Eigen::Matrix4cd A = c1 * kron2(sx(), sx()) + c2 * kron2(sy(), sy()) +
                             c3 * kron2(sz(), sz());
  return taylor_expm(Cplx(0, 0.5) * A);
}

inline double phase_free_fidelity(const MatXc &U, const MatXc &V) {
  return std::abs((U.adjoint() * V).trace()) / double(U.rows());
}

inline Eigen::Matrix4cd cnot() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

inline Eigen::Matrix4cd swap_gate() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  return m;
}

}  // namespace testutil
}  // namespace weylsteer
