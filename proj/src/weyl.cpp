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

#include "weylsteer/weyl.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>

namespace weylsteer {
namespace weyl {

using qmath::kron;
using qmath::pauli;

bool WeylPoint::is_canonical(double eps) const {
  return PI - c2 >= c1 - eps && c1 >= c2 - eps && c2 >= c3 - eps &&
         c3 >= -eps;
}

Eigen::Vector3d chamber_to_makhlin(const Eigen::Vector3d &g) {
  const Complex G1 = std::pow(Complex(g(0), g(1)) / 4., 2);
  return {G1.real(), G1.imag(), g(2)};
}

const Mat4 &magic_basis() {
  static const Mat4 Q = [] {
    Mat4 M;
    M << 1., 0., 0., I_, 0., I_, 1., 0., 0., I_, -1., 0., 1., 0., 0., -I_;
    return Mat4(M / std::sqrt(2.));
  }();
  return Q;
}

Mat4 canonical_gate(const Eigen::Vector3d &c) {
  Mat4 H = Mat4::Zero();
  for (int a = 0; a < 3; ++a) H += c(a) * kron(pauli(a + 1), pauli(a + 1));
  // e^{iH/2} = e^{-i(-H)(1/2)}
  return qmath::expm_hermitian(-H, 0.5);
}

WeylPoint fold_to_chamber(const Eigen::Vector3d &raw) {
  std::array<double, 3> c;
  for (int a = 0; a < 3; ++a) {
    double x = qmath::wrap(raw(a), PI);
    if (x > PI / 2) x -= PI;
    c[a] = x;
  }
  std::sort(c.begin(), c.end(), [](double x, double y) {
    return std::abs(x) > std::abs(y);
  });
  int neg = 0;
  for (double &x : c) {
    if (x < 0) ++neg;
    x = std::abs(x);
  }
  if (neg % 2 == 1 && c[2] > 1e-9) c[0] = PI - c[0];
  return {c[0], c[1], c[2]};
}

InvariantTriple invariants_from_weyl(double c1, double c2, double c3) {
  InvariantTriple t;
  t.chamber << 4 * std::cos(c1) * std::cos(c2) * std::cos(c3),
      4 * std::sin(c1) * std::sin(c2) * std::sin(c3),
      std::cos(2 * c1) + std::cos(2 * c2) + std::cos(2 * c3);
  t.makhlin = chamber_to_makhlin(t.chamber);
  return t;
}

namespace {
Mat4 gram_in_magic_basis(const Mat4 &U) {
  const Mat4 &Q = magic_basis();
  const Mat4 UB = Q.adjoint() * qmath::to_special_unitary(U) * Q;
  return UB.transpose() * UB;
}
}  // namespace

Eigen::Vector3d makhlin_invariants(const Mat4 &U) {
  qmath::require_unitary(U, "makhlin_invariants");
  const Mat4 m = gram_in_magic_basis(U);
  const Complex tr = m.trace();
  const Complex tr2 = (m * m).trace();
  const Complex G1 = tr * tr / 16.;
  const Complex G2 = (tr * tr - tr2) / 4.;
  return {G1.real(), G1.imag(), G2.real()};
}

InvariantTriple invariants_from_unitary(const Mat4 &U) {
  InvariantTriple t;
  t.makhlin = makhlin_invariants(U);
  t.chamber = invariants_from_weyl(weyl_coordinates(U)).chamber;
  return t;
}

WeylPoint weyl_coordinates(const Mat4 &U) {
  qmath::require_unitary(U, "weyl_coordinates");
  const Mat4 m = gram_in_magic_basis(U);
  Eigen::ComplexEigenSolver<Mat4> es(m, false);
  std::array<double, 4> th;
  for (int k = 0; k < 4; ++k) th[k] = std::arg(es.eigenvalues()(k));
  std::sort(th.begin(), th.end());
  // det m = 1 fixes the phase sum to a multiple of 2 pi; bring it to zero
  double sum = th[0] + th[1] + th[2] + th[3];
  const long s = std::lround(sum / (2 * PI));
  for (long k = 0; k < std::abs(s); ++k) {
    if (s > 0) {
      th[3 - k] -= 2 * PI;
    } else {
      th[k] += 2 * PI;
    }
  }
  // eigenphases of canonical_gate(c) in the magic basis are P c
  static const double P[4][3] = {
      {1, -1, 1}, {1, 1, -1}, {-1, -1, -1}, {-1, 1, 1}};
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 3; ++a) c(a) += P[k][a] * th[k] / 4;
  return fold_to_chamber(c);
}

bool is_locally_equivalent(const Mat4 &U, const Mat4 &V, double eps) {
  return (makhlin_invariants(U) - makhlin_invariants(V)).cwiseAbs().maxCoeff() <=
         eps;
}

Mat4 coupling_operator(const Eigen::Matrix3d &J) {
  Mat4 S = Mat4::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      S += J(a, b) * kron(pauli(a + 1), pauli(b + 1));
  return S;
}

Mat2 lift_rotation(const Eigen::Matrix3d &R) {
  const Eigen::AngleAxisd aa(R);
  return std::cos(aa.angle() / 2) * qmath::pauli_i() -
         I_ * std::sin(aa.angle() / 2) * qmath::pauli_vec(aa.axis());
}

CanonicalCoupling canonicalize_coupling(const Eigen::Matrix3d &J) {
  if (!J.allFinite()) {
    throw ContractViolation("canonicalize_coupling: non-finite coupling");
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d O1 = svd.matrixU(), O2 = svd.matrixV();
  Eigen::Vector3d d = svd.singularValues();
  if (O1.determinant() < 0) {
    O1.col(2) *= -1;
    d(2) *= -1;
  }
  if (O2.determinant() < 0) {
    O2.col(2) *= -1;
    d(2) *= -1;
  }
  CanonicalCoupling out;
  out.k = kron(lift_rotation(O1.transpose()), lift_rotation(O2.transpose()));
  out.diag = d;
  return out;
}

namespace {

Eigen::Matrix3d action_of(const Mat2 &k1, const Mat2 &k2) {
  const Mat4 k = kron(k1, k2);
  Eigen::Matrix3d M;
  for (int a = 0; a < 3; ++a) {
    const Mat4 img = k * kron(pauli(a + 1), pauli(a + 1)) * k.adjoint();
    for (int b = 0; b < 3; ++b) {
      M(b, a) = (img * kron(pauli(b + 1), pauli(b + 1))).trace().real() / 4;
    }
  }
  return M.array().round().matrix();
}

}  // namespace

const std::vector<WeylGroupElement> &weyl_group() {
  static const std::vector<WeylGroupElement> group = [] {
    const Mat2 Id = qmath::pauli_i();
    const Mat2 sz = qmath::expm_hermitian(qmath::pauli_z(), PI / 4);
    const Mat2 sx = qmath::expm_hermitian(qmath::pauli_x(), PI / 4);
    std::vector<std::pair<Mat2, Mat2>> gens = {
        {qmath::pauli_z(), Id}, {qmath::pauli_x(), Id}, {sz, sz}, {sx, sx}};
    std::vector<WeylGroupElement> out;
    out.push_back({Eigen::Matrix3d::Identity(), Id, Id});
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (const auto &[g1, g2] : gens) {
        WeylGroupElement e{
            Eigen::Matrix3d::Zero(), g1 * out[i].k1, g2 * out[i].k2};
        e.M = action_of(e.k1, e.k2);
        const bool seen = std::any_of(out.begin(), out.end(), [&](auto &x) {
          return (x.M - e.M).norm() < 0.5;
        });
        if (!seen) out.push_back(e);
      }
    }
    return out;
  }();
  return group;
}

}  // namespace weyl
}  // namespace weylsteer
