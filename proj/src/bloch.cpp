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

#include "weylsteer/bloch.hpp"

#include <algorithm>
#include <cmath>

namespace weylsteer {
namespace bloch {

using qmath::wrap;

double BlochPoint::theta() const {
  return std::acos(std::clamp(z, -1., 1.));
}

double BlochPoint::phi() const {
  if (std::hypot(x, y) < tol::structural) return 0.;
  return wrap(std::atan2(y, x), 2 * PI);
}

BlochPoint BlochPoint::from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

BlochPoint BlochPoint::from_vec(const Eigen::Vector3d &v) {
  const Eigen::Vector3d u = v.normalized();
  return {u(0), u(1), u(2)};
}

Mat2 rz(double a) {
  Mat2 M = Mat2::Zero();
  M(0, 0) = std::exp(-I_ * a / 2.);
  M(1, 1) = std::exp(I_ * a / 2.);
  return M;
}

Mat2 rx(double a) {
  Mat2 M;
  M << std::cos(a / 2), -I_ * std::sin(a / 2), -I_ * std::sin(a / 2),
      std::cos(a / 2);
  return M;
}

BlochPoint hopf_map(const Mat2 &U) {
  const Complex z1 = U(0, 1), z2 = U(1, 1);
  const Complex w = 2. * std::conj(z1) * z2;
  BlochPoint p{w.real(), w.imag(), std::norm(z1) - std::norm(z2)};
  const double n = p.vec().norm();
  return {p.x / n, p.y / n, p.z / n};
}

bool is_rz_equivalent(const Mat2 &U, const Mat2 &V, double eps) {
  const Mat2 W = U.adjoint() * V;
  return std::max(std::abs(W(0, 1)), std::abs(W(1, 0))) <= eps;
}

DriftStandardization standardize_drift(const Mat2 &H_d) {
  qmath::require_hermitian(H_d, "standardize_drift");
  if (std::abs(H_d.trace()) > tol::structural * std::max(1., H_d.norm())) {
    throw ContractViolation("standardize_drift: drift must be traceless");
  }
  const Eigen::Vector3d c = qmath::pauli_coeffs(H_d);
  const double a1 = c(0), a2 = c(1), a3 = c(2);
  const double a = c.norm();
  if (a == 0.) {
    throw ContractViolation("standardize_drift: zero drift has no direction");
  }
  DriftStandardization out;
  out.a = a;
  const double r2 = a1 * a1 + a2 * a2;
  if (r2 == 0.) {
    out.k = a3 > 0 ? qmath::pauli_i() : qmath::pauli_x();
    return out;
  }
  // a - a3 and a + a3 without cancellation
  const double am = a3 > 0 ? r2 / (a + a3) : a - a3;
  const double ap = a3 > 0 ? a + a3 : r2 / (a - a3);
  // the printed matrix satisfies k^dagger H_d k = a sigma_z; store its adjoint
  const Complex w(a1, -a2);
  Mat2 printed;
  printed << w / std::sqrt(2 * a * am), -w / std::sqrt(2 * a * ap),
      std::sqrt(am / (2 * a)), std::sqrt(ap / (2 * a));
  out.k = printed.adjoint();
  return out;
}

EulerZXZ euler_zxz(const Mat2 &U_in) {
  qmath::require_unitary(U_in, "euler_zxz");
  const Mat2 U = qmath::to_special_unitary(U_in);
  const double s = std::abs(U(0, 1)), c = std::abs(U(0, 0));
  const double beta = 2 * std::atan2(s, c);
  EulerZXZ e;
  e.theta = std::clamp(PI - beta, 0., PI);
  if (s < 1e-14 || c < 1e-14) {
    e.phi = PI / 2;
  } else {
    const double p = -(std::arg(U(0, 0)) + std::arg(I_ * U(0, 1)));
    e.phi = wrap(p + PI / 2, 2 * PI);
  }
  const Mat2 D = (rz(e.phi - PI / 2) * rx(PI - e.theta)).adjoint() * U;
  e.gamma = wrap(-2 * std::arg(D(0, 0)), 4 * PI);
  return e;
}

Mat2 euler_reconstruct(const EulerZXZ &e) {
  return rz(e.phi - PI / 2) * rx(PI - e.theta) * rz(e.gamma);
}

double unreachable_cap(double A, double omega0, double omega) {
  if (A < 0) throw ContractViolation("unreachable_cap: A < 0");
  const double d = omega0 - omega;
  const double h = A / 2;
  if (h == 0 && d == 0) {
    throw ContractViolation("unreachable_cap: A = 0 at resonance is 0/0");
  }
  return (h * h - d * d) / (h * h + d * d);
}

}  // namespace bloch
}  // namespace weylsteer
