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
#include <vector>

#include "weylsteer/qmath.hpp"

namespace weylsteer {
namespace weyl {

struct WeylPoint {
  double c1 = 0, c2 = 0, c3 = 0;

  Eigen::Vector3d vec() const { return {c1, c2, c3}; }
  static WeylPoint from_vec(const Eigen::Vector3d &v) {
    return {v(0), v(1), v(2)};
  }
  // pi - c2 >= c1 >= c2 >= c3 >= 0 up to eps
  bool is_canonical(double eps = tol::physics) const;
};

struct InvariantTriple {
  // (g1, g2, g3) with identity at (4, 0, 3)
  Eigen::Vector3d chamber = Eigen::Vector3d::Zero();
  // (Re G1, Im G1, G2) with identity at (1, 0, 3)
  Eigen::Vector3d makhlin = Eigen::Vector3d::Zero();
};

// G1 = ((g1 + i g2)/4)^2, G2 = g3
Eigen::Vector3d chamber_to_makhlin(const Eigen::Vector3d &g);

// Columns are the magic (Bell) basis.
const Mat4 &magic_basis();

// exp(i/2 (c1 XX + c2 YY + c3 ZZ))
Mat4 canonical_gate(const Eigen::Vector3d &c);
inline Mat4 canonical_gate(const WeylPoint &c) {
  return canonical_gate(c.vec());
}

// Map a raw coordinate triple onto its chamber representative.
WeylPoint fold_to_chamber(const Eigen::Vector3d &c);

InvariantTriple invariants_from_weyl(double c1, double c2, double c3);
inline InvariantTriple invariants_from_weyl(const WeylPoint &c) {
  return invariants_from_weyl(c.c1, c.c2, c.c3);
}

// Makhlin triple only; cheaper than invariants_from_unitary.
Eigen::Vector3d makhlin_invariants(const Mat4 &U);

InvariantTriple invariants_from_unitary(const Mat4 &U);

WeylPoint weyl_coordinates(const Mat4 &U);

bool is_locally_equivalent(const Mat4 &U, const Mat4 &V, double eps);

struct CanonicalCoupling {
  Mat4 k;
  Eigen::Vector3d diag;
};

// sum_ab J(a,b) sigma_a (x) sigma_b
Mat4 coupling_operator(const Eigen::Matrix3d &J);

CanonicalCoupling canonicalize_coupling(const Eigen::Matrix3d &J);

// SU(2) element acting on Pauli vectors through R.
Mat2 lift_rotation(const Eigen::Matrix3d &R);

// Local (k1 (x) k2) with k (sum c_a s_a s_a) k^dagger = sum (M c)_a s_a s_a.
struct WeylGroupElement {
  Eigen::Matrix3d M;
  Mat2 k1, k2;
  Mat4 local() const { return qmath::kron(k1, k2); }
};

// The 24 signed permutations with an even number of sign flips.
const std::vector<WeylGroupElement> &weyl_group();

}  // namespace weyl
}  // namespace weylsteer

