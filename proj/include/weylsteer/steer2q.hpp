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

#include <map>
#include <string>
#include <vector>

#include "weylsteer/qmath.hpp"
#include "weylsteer/weyl.hpp"

namespace weylsteer {
namespace steer2q {

using weyl::InvariantTriple;
using weyl::WeylPoint;

// H = g1 . sigma (x) I + I (x) g2 . sigma + sum_ab J(a,b) sigma_a (x) sigma_b
struct HamiltonianSpec {
  Eigen::Vector3d g1 = Eigen::Vector3d::Zero();
  Eigen::Vector3d g2 = Eigen::Vector3d::Zero();
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();

  static HamiltonianSpec diagonal(const Eigen::Vector3d &g1,
                                  const Eigen::Vector3d &g2,
                                  const Eigen::Vector3d &Jd);
};

Mat4 hamiltonian_matrix(const HamiltonianSpec &H);

// sign = +1 evolves with e^{-iHt}, sign = -1 with e^{+iHt}
Mat4 evolve(const HamiltonianSpec &H, double t, int sign);

struct TrajectorySample {
  double t;
  WeylPoint point;
  InvariantTriple invariants;
};

struct WeylTrajectory {
  std::vector<TrajectorySample> samples;
  int sign_convention = 1;
};

WeylTrajectory weyl_trajectory(const HamiltonianSpec &H,
                               const std::vector<double> &t_grid, int sign);

struct PlanSegment {
  enum class Kind { Evolution, Local };
  Kind kind = Kind::Evolution;
  HamiltonianSpec hamiltonian;
  double duration = 0;
  Mat4 local = Mat4::Identity();
};

struct SteeringPlan {
  std::string strategy;
  std::vector<PlanSegment> segments;
  int sign_convention = 1;
  WeylPoint predicted_endpoint;
  WeylPoint target_class;
  double tolerance = 1e-6;
  std::map<std::string, double> parameters;

  double coupling_time() const;
};

// Time-ordered product of the plan's segments.
Mat4 simulate_plan(const SteeringPlan &plan);

// Makhlin distance of the simulated endpoint from the target class.
double plan_residual(const SteeringPlan &plan);

SteeringPlan plan_isotropic_equal(const Eigen::Vector3d &g, double J);

enum class LambdaRoot { Below, Above };

SteeringPlan plan_isotropic_ratio(const Eigen::Vector3d &g2, double J,
                                  int m, LambdaRoot root = LambdaRoot::Below);

// Closed-form trajectory point of the ratio strategy at time t, folded.
WeylPoint isotropic_ratio_curve(double J, double omega, double t);

InvariantTriple yy_invariants(double f1, double f2, double J, double t);

// H_yy with g1 = [(f1+f2)/2, 0, 0], g2 = [(f1-f2)/2, 0, 0], J on YY.
HamiltonianSpec yy_hamiltonian(double f1, double f2, double J);

enum class YYTarget { B, CNOT };

SteeringPlan solve_yy_gate(YYTarget target, double J = 1);

Eigen::Vector3d approx_straightline_ising(const Eigen::Vector3d &g1,
                                          const Eigen::Vector3d &g2);

// Linear coefficient of c1(t) in the weak-coupling sinusoid.
double weak_c1_rate(const Eigen::Vector3d &Jd, const Eigen::Vector3d &g1,
                    const Eigen::Vector3d &g2);

SteeringPlan plan_weak_cnot(const Eigen::Vector3d &Jd,
                            const Eigen::Vector3d &d1,
                            const Eigen::Vector3d &d2, int m);

SteeringPlan plan_nonlocal_polyline(const WeylPoint &target,
                                    const Eigen::Vector3d &Jd);

}  // namespace steer2q
}  // namespace weylsteer
