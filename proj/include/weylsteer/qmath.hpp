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

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace weylsteer {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;

constexpr double PI = 3.14159265358979323846;
constexpr Complex I_{0., 1.};

namespace tol {
// structural checks (unitarity, hermiticity, conjugation identities)
constexpr double structural = 1e-12;
// comparisons between two physics computations
constexpr double physics = 1e-9;
}  // namespace tol

// Raised when an input breaks an operation's precondition.
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string &what)
      : std::invalid_argument(what) {}
};

// Raised when a numerical search cannot produce an acceptable answer.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string &what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Raised when a produced artifact fails its own verification step.
class VerificationFailure : public std::runtime_error {
 public:
  explicit VerificationFailure(const std::string &what)
      : std::runtime_error(what) {}
};

namespace qmath {

const Mat2 &pauli_i();
const Mat2 &pauli_x();
const Mat2 &pauli_y();
const Mat2 &pauli_z();

// Pauli matrix by index: 0 = I, 1 = X, 2 = Y, 3 = Z.
const Mat2 &pauli(int idx);

// Hermitian combination n0 I + n1 X + n2 Y + n3 Z with n0 = 0.
Mat2 pauli_vec(const Eigen::Vector3d &n);

// Real coefficients (x, y, z) of a 2x2 matrix in the Pauli basis.
Eigen::Vector3d pauli_coeffs(const Mat2 &H);

Mat4 kron(const Mat2 &A, const Mat2 &B);

bool is_finite(const MatX &M);
bool is_unitary(const MatX &U, double eps = tol::structural);
bool is_hermitian(const MatX &H, double eps = tol::structural);

void require_unitary(const MatX &U, const char *who);
void require_hermitian(const MatX &H, const char *who);

// e^{-iHt} from the eigendecomposition of H.
MatX expm_hermitian(const MatX &H, double t);

using TimeDependentField = std::function<MatX(double)>;

// Product of exact exponentials of H sampled at step midpoints.
MatX propagate_timedep(
    const TimeDependentField &field, double t_f, unsigned steps);

// ceil(200 t_f max|H|) with the spectral norm sampled over [0, t_f].
unsigned default_steps(const TimeDependentField &field, double t_f);

// |tr(U^dagger V)| / dim
double gate_fidelity(const MatX &U, const MatX &V);

// Scale U onto det = 1 using the principal branch of det^{1/dim}.
MatX to_special_unitary(const MatX &U);

// Reduce x into [0, period).
double wrap(double x, double period);

// Haar-random SU(2) from a Gaussian quaternion.
template <class Rng>
Mat2 random_su2(Rng &rng) {
  std::normal_distribution<double> n(0., 1.);
  Eigen::Vector4d q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  Mat2 U;
  U << Complex(q(0), q(3)), Complex(q(2), q(1)), Complex(-q(2), q(1)),
      Complex(q(0), -q(3));
  return U;
}

}  // namespace qmath
}  // namespace weylsteer
