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

#include "weylsteer/qmath.hpp"

namespace weylsteer {
namespace bloch {

struct BlochPoint {
  double x = 0, y = 0, z = -1;

  Eigen::Vector3d vec() const { return {x, y, z}; }
  // colatitude in [0, pi]
  double theta() const;
  // azimuth in [0, 2 pi); 0 at the poles
  double phi() const;
  static BlochPoint from_angles(double theta, double phi);
  static BlochPoint from_vec(const Eigen::Vector3d &v);
};

// U_T = Rz(phi - pi/2) Rx(pi - theta) Rz(gamma), with Rz(a) = e^{-i a/2 Z}
struct EulerZXZ {
  double theta = PI, phi = PI / 2, gamma = 0;
};

struct DriftStandardization {
  Mat2 k;
  double a = 0;
};

// e^{-i a/2 Z} and e^{-i a/2 X}
Mat2 rz(double a);
Mat2 rx(double a);

BlochPoint hopf_map(const Mat2 &U);

bool is_rz_equivalent(const Mat2 &U, const Mat2 &V, double eps);

DriftStandardization standardize_drift(const Mat2 &H_d);

EulerZXZ euler_zxz(const Mat2 &U);
Mat2 euler_reconstruct(const EulerZXZ &e);

double unreachable_cap(double A, double omega0, double omega);

}  // namespace bloch
}  // namespace weylsteer
