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

#include "weylsteer/qmath.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace weylsteer {
namespace qmath {

namespace {
Mat2 make(Complex a, Complex b, Complex c, Complex d) {
  Mat2 M;
  M << a, b, c, d;
  return M;
}
}  // namespace

const Mat2 &pauli_i() {
  static const Mat2 M = Mat2::Identity();
  return M;
}
const Mat2 &pauli_x() {
  static const Mat2 M = make(0., 1., 1., 0.);
  return M;
}
const Mat2 &pauli_y() {
  static const Mat2 M = make(0., -I_, I_, 0.);
  return M;
}
const Mat2 &pauli_z() {
  static const Mat2 M = make(1., 0., 0., -1.);
  return M;
}

const Mat2 &pauli(int idx) {
  switch (idx) {
    case 0:
      return pauli_i();
    case 1:
      return pauli_x();
    case 2:
      return pauli_y();
    case 3:
      return pauli_z();
    default:
      throw ContractViolation("pauli: index must be 0..3");
  }
}

Mat2 pauli_vec(const Eigen::Vector3d &n) {
  return n(0) * pauli_x() + n(1) * pauli_y() + n(2) * pauli_z();
}

Eigen::Vector3d pauli_coeffs(const Mat2 &H) {
  Eigen::Vector3d c;
  for (int k = 0; k < 3; ++k) {
    c(k) = 0.5 * (pauli(k + 1) * H).trace().real();
  }
  return c;
}

Mat4 kron(const Mat2 &A, const Mat2 &B) {
  Mat4 K;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) K.block<2, 2>(2 * i, 2 * j) = A(i, j) * B;
  return K;
}

bool is_finite(const MatX &M) {
  for (Eigen::Index i = 0; i < M.size(); ++i) {
    const Complex z = M.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

bool is_unitary(const MatX &U, double eps) {
  if (U.rows() != U.cols() || !is_finite(U)) return false;
  return (U * U.adjoint() - MatX::Identity(U.rows(), U.cols())).norm() <= eps;
}

bool is_hermitian(const MatX &H, double eps) {
  if (H.rows() != H.cols() || !is_finite(H)) return false;
  return (H - H.adjoint()).norm() <= eps;
}

void require_unitary(const MatX &U, const char *who) {
  // accept matrices assembled from rounded text input
  if (!is_unitary(U, 1e-8 * std::max<double>(1., U.rows()))) {
    throw ContractViolation(std::string(who) + ": matrix is not unitary");
  }
}

void require_hermitian(const MatX &H, const char *who) {
  if (!is_hermitian(H, tol::structural * std::max(1., H.norm()))) {
    throw ContractViolation(std::string(who) + ": matrix is not Hermitian");
  }
}

MatX expm_hermitian(const MatX &H, double t) {
  require_hermitian(H, "expm_hermitian");
  MatX Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<MatX> es(Hs);
  const MatX &V = es.eigenvectors();
  Eigen::VectorXcd ph(Hs.rows());
  for (Eigen::Index k = 0; k < Hs.rows(); ++k) {
    ph(k) = std::exp(-I_ * es.eigenvalues()(k) * t);
  }
  return V * ph.asDiagonal() * V.adjoint();
}

MatX propagate_timedep(
    const TimeDependentField &field, double t_f, unsigned steps) {
  if (t_f < 0) throw ContractViolation("propagate_timedep: t_f < 0");
  if (steps == 0) throw ContractViolation("propagate_timedep: steps = 0");
  MatX H0 = field(0.);
  MatX U = MatX::Identity(H0.rows(), H0.cols());
  const double dt = t_f / steps;
  for (unsigned s = 0; s < steps; ++s) {
    const double tm = (s + 0.5) * dt;
    U = expm_hermitian(field(tm), dt) * U;
  }
  return U;
}

unsigned default_steps(const TimeDependentField &field, double t_f) {
  double hmax = 0;
  const int samples = 64;
  for (int s = 0; s <= samples; ++s) {
    MatX H = field(t_f * s / samples);
    Eigen::SelfAdjointEigenSolver<MatX> es(0.5 * (H + H.adjoint()), false);
    hmax = std::max(hmax, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return std::max(1u, static_cast<unsigned>(std::ceil(200. * t_f * hmax)));
}

double gate_fidelity(const MatX &U, const MatX &V) {
  if (U.rows() != V.rows() || U.cols() != V.cols()) {
    throw ContractViolation("gate_fidelity: dimension mismatch");
  }
  double f = std::abs((U.adjoint() * V).trace()) / U.rows();
  return std::min(1., f);
}

MatX to_special_unitary(const MatX &U) {
  const Complex d = U.determinant();
  return U / std::pow(d, 1. / U.rows());
}

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

}  // namespace qmath
}  // namespace weylsteer
