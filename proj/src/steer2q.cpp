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

#include "weylsteer/steer2q.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

namespace weylsteer {
namespace steer2q {

using Eigen::Vector3d;
using qmath::kron;
using qmath::pauli;

HamiltonianSpec HamiltonianSpec::diagonal(const Vector3d &g1,
                                          const Vector3d &g2,
                                          const Vector3d &Jd) {
  HamiltonianSpec h;
  h.g1 = g1;
  h.g2 = g2;
  h.J = Jd.asDiagonal();
  return h;
}

Mat4 hamiltonian_matrix(const HamiltonianSpec &H) {
  const Mat2 Id = qmath::pauli_i();
  return kron(qmath::pauli_vec(H.g1), Id) + kron(Id, qmath::pauli_vec(H.g2)) +
         weyl::coupling_operator(H.J);
}

Mat4 evolve(const HamiltonianSpec &H, double t, int sign) {
  return qmath::expm_hermitian(hamiltonian_matrix(H), sign >= 0 ? t : -t);
}

WeylTrajectory weyl_trajectory(const HamiltonianSpec &H,
                               const std::vector<double> &t_grid, int sign) {
  if (t_grid.empty()) {
    throw ContractViolation("weyl_trajectory: empty time grid");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw ContractViolation("weyl_trajectory: time grid not increasing");
    }
  }
  const Mat4 Hm = hamiltonian_matrix(H);
  WeylTrajectory tr;
  tr.sign_convention = sign >= 0 ? 1 : -1;
  tr.samples.reserve(t_grid.size());
  for (double t : t_grid) {
    const Mat4 U = qmath::expm_hermitian(Hm, tr.sign_convention * t);
    TrajectorySample s;
    s.t = t;
    s.point = weyl::weyl_coordinates(U);
    s.invariants.makhlin = weyl::makhlin_invariants(U);
    s.invariants.chamber = weyl::invariants_from_weyl(s.point).chamber;
    tr.samples.push_back(s);
  }
  return tr;
}

double SteeringPlan::coupling_time() const {
  double t = 0;
  for (const auto &s : segments)
    if (s.kind == PlanSegment::Kind::Evolution) t += s.duration;
  return t;
}

Mat4 simulate_plan(const SteeringPlan &plan) {
  Mat4 U = Mat4::Identity();
  for (const auto &s : plan.segments) {
    if (s.kind == PlanSegment::Kind::Local) {
      U = s.local * U;
    } else {
      U = evolve(s.hamiltonian, s.duration, plan.sign_convention) * U;
    }
  }
  return U;
}

double plan_residual(const SteeringPlan &plan) {
  const Vector3d a = weyl::makhlin_invariants(simulate_plan(plan));
  const Vector3d b = weyl::invariants_from_weyl(plan.target_class).makhlin;
  return (a - b).cwiseAbs().maxCoeff();
}

namespace {

PlanSegment evolution(const HamiltonianSpec &h, double tau) {
  PlanSegment s;
  s.kind = PlanSegment::Kind::Evolution;
  s.hamiltonian = h;
  s.duration = tau;
  return s;
}

PlanSegment local(const Mat4 &k) {
  PlanSegment s;
  s.kind = PlanSegment::Kind::Local;
  s.local = k;
  return s;
}

const WeylPoint kCnotClass{PI / 2, 0, 0};
const WeylPoint kBClass{PI / 2, PI / 4, 0};

}  // namespace

SteeringPlan plan_isotropic_equal(const Vector3d &g, double J) {
  if (J == 0) throw ContractViolation("plan_isotropic_equal: J = 0");
  const auto H = HamiltonianSpec::diagonal(g, g, Vector3d::Constant(J));
  const double tau = PI / (8 * std::abs(J));
  SteeringPlan p;
  p.strategy = "isotropic_equal";
  p.sign_convention = -1;
  p.segments = {evolution(H, tau),
                local(kron(qmath::pauli_z(), qmath::pauli_i())),
                evolution(H, tau)};
  p.predicted_endpoint = kCnotClass;
  p.target_class = kCnotClass;
  p.tolerance = 1e-9;
  p.parameters = {{"J", J}, {"segment_time", tau}};
  return p;
}

SteeringPlan plan_isotropic_ratio(const Vector3d &g2, double J, int m,
                                  LambdaRoot root) {
  const double g = g2.norm();
  if (g == 0) throw ContractViolation("plan_isotropic_ratio: g2 = 0");
  if (!(J > 0)) throw ContractViolation("plan_isotropic_ratio: J <= 0");
  if (m < 1) throw ContractViolation("plan_isotropic_ratio: m < 1");
  const double r = std::sqrt(16. * m * m - 4.) * J / g;
  const double lambda = root == LambdaRoot::Below ? 1 - r : 1 + r;
  const double omega =
      std::sqrt((lambda - 1) * (lambda - 1) * g * g + 4 * J * J);
  const double t = PI / (4 * J);
  SteeringPlan p;
  p.strategy = "isotropic_ratio";
  p.sign_convention = -1;
  p.segments = {evolution(
      HamiltonianSpec::diagonal(lambda * g2, g2, Vector3d::Constant(J)), t)};
  p.predicted_endpoint = isotropic_ratio_curve(J, omega, t);
  p.target_class = kCnotClass;
  p.tolerance = 1e-6;
  p.parameters = {{"lambda", lambda}, {"omega", omega}, {"t", t},
                  {"J", J},           {"m", double(m)}};
  return p;
}

WeylPoint isotropic_ratio_curve(double J, double omega, double t) {
  const double s =
      std::abs(std::asin(std::clamp(2 * J / omega * std::sin(omega * t), -1., 1.)));
  return weyl::fold_to_chamber(Vector3d(2 * J * t, s, s));
}

InvariantTriple yy_invariants(double f1, double f2, double J, double t) {
  const double a = f1 * f1 + J * J, b = f2 * f2 + J * J;
  const double x = std::cos(std::sqrt(b) * t), y = std::cos(std::sqrt(a) * t);
  const double J2 = J * J, J4 = J2 * J2;
  const double D = a * b;
  const double g1 =
      (a * J2 * x * x + b * J2 * y * y + f1 * f1 * f2 * f2 - J4) / D;
  const double g3 = (3 * f1 * f1 * f2 * f2 - J2 * (f1 * f1 + f2 * f2) +
                     J4 * (8 * x * x * y * y + 3) +
                     4 * J2 * y * y * (f2 * f2 - J2) +
                     4 * J2 * x * x * (f1 * f1 - J2)) /
                    D;
  // the closed form carries the square root of the Makhlin G1
  InvariantTriple out;
  out.chamber = Vector3d(4 * g1, 0, g3);
  out.makhlin = Vector3d(g1 * g1, 0, g3);
  return out;
}

HamiltonianSpec yy_hamiltonian(double f1, double f2, double J) {
  HamiltonianSpec h;
  h.g1 = Vector3d((f1 + f2) / 2, 0, 0);
  h.g2 = Vector3d((f1 - f2) / 2, 0, 0);
  h.J(1, 1) = J;
  return h;
}

namespace {

// cos(2 sqrt(f^2 + 1) t) = -f^2 + branch (sqrt2/2)(f^2 + 1), J = 1 units
struct YYEquation {
  double branch;
  double operator()(double f, double t) const {
    const double s = std::sqrt(f * f + 1);
    return std::cos(2 * s * t) + f * f -
           branch * std::sqrt(0.5) * (f * f + 1);
  }
};

constexpr double kFMax = 3.;
constexpr double kFStep = 1e-3;

double bisect(const std::function<double(double)> &F, double lo, double hi) {
  double flo = F(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = F(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> roots_in_f(const YYEquation &eq, double t) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround(kFMax / kFStep));
  double prev = eq(0., t);
  if (prev == 0) out.push_back(0.);
  for (int i = 1; i <= n; ++i) {
    const double f = i * kFStep;
    const double v = eq(f, t);
    if (v == 0) {
      out.push_back(f);
    } else if ((v < 0) != (prev < 0) && prev != 0) {
      out.push_back(bisect([&](double x) { return eq(x, t); }, f - kFStep, f));
    }
    prev = v;
  }
  return out;
}

struct YYPair {
  double f1, f2;
};

// Closest pair of distinct roots with f1 > f2.
std::optional<YYPair> feasible_pair(const YYEquation &e1, const YYEquation &e2,
                                    double t) {
  const auto R1 = roots_in_f(e1, t);
  if (R1.empty()) return std::nullopt;
  const auto R2 = roots_in_f(e2, t);
  std::optional<YYPair> best;
  for (double r1 : R1)
    for (double r2 : R2)
      if (r1 > r2 && (!best || r1 - r2 < best->f1 - best->f2))
        best = YYPair{r1, r2};
  return best;
}

double newton_1d(const std::function<double(double)> &F, double x) {
  for (int it = 0; it < 60; ++it) {
    const double h = 1e-7 * std::max(1., std::abs(x));
    const double d = (F(x + h) - F(x - h)) / (2 * h);
    if (d == 0) break;
    const double step = F(x) / d;
    x -= step;
    if (std::abs(step) < 1e-15 * std::max(1., std::abs(x))) break;
  }
  return x;
}

// Double root of eq in f: eq = 0 and d eq / df = 0.
bool tangency(const YYEquation &eq, double &f, double &t) {
  auto G = [&](double ff, double tt) {
    const double h = 1e-6;
    return Eigen::Vector2d(
        eq(ff, tt), (eq(ff + h, tt) - eq(ff - h, tt)) / (2 * h));
  };
  for (int it = 0; it < 80; ++it) {
    const Eigen::Vector2d g = G(f, t);
    const double h = 1e-6;
    Eigen::Matrix2d Jm;
    Jm.col(0) = (G(f + h, t) - G(f - h, t)) / (2 * h);
    Jm.col(1) = (G(f, t + h) - G(f, t - h)) / (2 * h);
    const Eigen::Vector2d step = Jm.fullPivLu().solve(g);
    f -= step(0);
    t -= step(1);
    if (step.norm() < 1e-14) return true;
  }
  return std::abs(eq(f, t)) < 1e-12;
}

}  // namespace

SteeringPlan solve_yy_gate(YYTarget target, double J) {
  if (!(J > 0)) throw ContractViolation("solve_yy_gate: J <= 0");
  std::vector<std::pair<YYEquation, YYEquation>> assignments;
  if (target == YYTarget::B) {
    assignments = {{YYEquation{1}, YYEquation{-1}},
                   {YYEquation{-1}, YYEquation{1}}};
  } else {
    assignments = {{YYEquation{0}, YYEquation{0}}};
  }
  const double dt = 2e-3, t_max = 10.;
  double best_t = std::numeric_limits<double>::infinity();
  YYPair best{0, 0};
  std::size_t best_a = 0;
  for (std::size_t a = 0; a < assignments.size(); ++a) {
    const auto &[e1, e2] = assignments[a];
    for (double t = dt; t <= std::min(t_max, best_t); t += dt) {
      if (!feasible_pair(e1, e2, t)) continue;
      double lo = t - dt, hi = t;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible_pair(e1, e2, mid) ? hi : lo) = mid;
      }
      if (hi < best_t) {
        best_t = hi;
        best = *feasible_pair(e1, e2, hi);
        best_a = a;
      }
      break;
    }
  }
  if (!std::isfinite(best_t)) {
    throw SolverFailure("solve_yy_gate: no solution for t <= 10",
                        std::numeric_limits<double>::infinity());
  }
  const auto &[e1, e2] = assignments[best_a];
  double t = best_t, f1 = best.f1, f2 = best.f2;
  const bool same_equation = e1.branch == e2.branch;
  if (same_equation && f1 - f2 < 20 * kFStep) {
    // onset of a double root: the two field magnitudes merge in the limit
    double f = 0.5 * (f1 + f2);
    if (tangency(e1, f, t)) f1 = f2 = f;
  } else {
    if (f2 < 5 * kFStep) {
      // the second root enters through f2 = 0
      t = newton_1d([&](double tt) { return e2(0., tt); }, t);
      f2 = 0;
    }
    f1 = newton_1d([&](double f) { return e1(f, t); }, f1);
  }
  const Vector3d target_inv =
      weyl::invariants_from_weyl(target == YYTarget::B ? kBClass : kCnotClass)
          .makhlin;
  const double residual =
      (yy_invariants(f1, f2, 1., t).makhlin - target_inv).cwiseAbs().maxCoeff();
  if (residual > 1e-9) {
    std::ostringstream os;
    os << "solve_yy_gate: invariant residual " << residual << " at (f1, f2, t) = ("
       << f1 << ", " << f2 << ", " << t << ")";
    throw SolverFailure(os.str(), residual);
  }
  SteeringPlan p;
  p.strategy = target == YYTarget::B ? "yy_B" : "yy_CNOT";
  p.sign_convention = -1;
  p.segments = {evolution(yy_hamiltonian(J * f1, J * f2, J), t / J)};
  p.predicted_endpoint = target == YYTarget::B ? kBClass : kCnotClass;
  p.target_class = p.predicted_endpoint;
  p.tolerance = 1e-6;
  p.parameters = {{"f1", J * f1}, {"f2", J * f2}, {"t", t / J}, {"J", J},
                  {"g1x", J * (f1 + f2) / 2}, {"g2x", J * (f1 - f2) / 2},
                  {"branch", e1.branch}};
  return p;
}

Vector3d approx_straightline_ising(const Vector3d &g1, const Vector3d &g2) {
  const double n1 = g1.norm(), n2 = g2.norm();
  if (std::abs(n1 - n2) > 1e-9 * std::max(1., std::max(n1, n2))) {
    throw ContractViolation(
        "approx_straightline_ising: local fields need equal norms");
  }
  const double rho = std::hypot(g1(0), g1(1)) * std::hypot(g2(0), g2(1));
  const double zz = 2 * g1(2) * g2(2);
  if (zz >= rho) return {zz, rho, rho};
  return {rho, rho, zz};
}

double weak_c1_rate(const Vector3d &Jd, const Vector3d &g1,
                    const Vector3d &g2) {
  return 2 * (Jd.array() * g1.array() * g2.array()).sum() /
         (g1.norm() * g2.norm());
}

SteeringPlan plan_weak_cnot(const Vector3d &Jd, const Vector3d &d1,
                            const Vector3d &d2, int m) {
  const double n1 = d1.norm(), n2 = d2.norm();
  if (n1 == 0 || n2 == 0) {
    throw ContractViolation("plan_weak_cnot: zero template direction");
  }
  const double rate = weak_c1_rate(Jd, d1, d2);
  if (!(rate > 0)) {
    throw ContractViolation(
        "plan_weak_cnot: template has no positive projected coupling");
  }
  if (!((n1 - n2) * m > 0)) {
    throw ContractViolation(
        "plan_weak_cnot: sign of |d1| - |d2| does not match m");
  }
  // c1 = rate t reaches pi/2; the norm difference closes m half-turns
  const double t = PI / (2 * rate);
  const double s = m * PI / ((n1 - n2) * t);
  SteeringPlan p;
  p.strategy = "weak_cnot";
  p.sign_convention = -1;
  const Vector3d g1 = s * d1, g2 = s * d2;
  p.segments = {evolution(HamiltonianSpec::diagonal(g1, g2, Jd), t)};
  p.predicted_endpoint = kCnotClass;
  p.target_class = kCnotClass;
  p.tolerance = 1e-3;
  p.parameters = {{"t", t},         {"scale", s},      {"m", double(m)},
                  {"g1x", g1(0)},   {"g1y", g1(1)},    {"g1z", g1(2)},
                  {"g2x", g2(0)},   {"g2y", g2(1)},    {"g2z", g2(2)},
                  {"coupling_ratio", Jd.norm() / std::min(g1.norm(), g2.norm())}};
  return p;
}

SteeringPlan plan_nonlocal_polyline(const WeylPoint &target,
                                    const Vector3d &Jd) {
  const auto &G = weyl::weyl_group();
  // per unit time, k e^{iH tau} k^dagger = canonical_gate(2 tau M J)
  std::vector<Vector3d> dirs;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Vector3d d = 2 * G[i].M * Jd;
    const bool dup = std::any_of(dirs.begin(), dirs.end(), [&](auto &x) {
      return (x - d).norm() < 1e-12;
    });
    if (!dup && d.norm() > 0) {
      dirs.push_back(d);
      owner.push_back(i);
    }
  }
  Eigen::MatrixXd Dm(3, std::max<std::size_t>(1, dirs.size()));
  Dm.setZero();
  for (std::size_t i = 0; i < dirs.size(); ++i) Dm.col(i) = dirs[i];
  const auto rank = dirs.empty() ? 0 : Eigen::FullPivLU<Eigen::MatrixXd>(Dm).rank();
  if (rank == 0) {
    throw ContractViolation(
        "plan_nonlocal_polyline: coupling (Jx, Jy, Jz) = 0 spans no direction");
  }
  std::vector<Vector3d> images;
  const Vector3d c = target.vec();
  for (const auto &g : G)
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b)
        for (int e = -2; e <= 2; ++e)
          images.push_back(g.M * c + PI * Vector3d(a, b, e));

  struct Best {
    std::vector<std::size_t> idx;
    std::vector<double> tau;
    double total = std::numeric_limits<double>::infinity();
  } best;
  const double eps = 1e-10;
  auto consider = [&](const std::vector<std::size_t> &idx,
                      const std::vector<double> &tau) {
    double tot = 0;
    for (double x : tau) {
      if (x < -eps) return;
      tot += std::max(0., x);
    }
    if (tot < best.total - 1e-12) best = {idx, tau, tot};
  };
  const std::size_t n = dirs.size();
  for (unsigned count = 1; count <= 3 && !std::isfinite(best.total); ++count) {
    if (count == 1) {
      for (std::size_t i = 0; i < n; ++i) {
        const Vector3d &d = dirs[i];
        for (const auto &y : images) {
          const double tau = y.dot(d) / d.squaredNorm();
          if ((y - tau * d).norm() < 1e-9) consider({i}, {tau});
        }
      }
    } else if (count == 2) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          Eigen::Matrix<double, 3, 2> A;
          A << dirs[i], dirs[j];
          const Eigen::Matrix2d N = A.transpose() * A;
          if (std::abs(N.determinant()) < 1e-12) continue;
          const Eigen::Matrix2d Ni = N.inverse();
          for (const auto &y : images) {
            const Eigen::Vector2d tau = Ni * (A.transpose() * y);
            if ((A * tau - y).norm() < 1e-9) consider({i, j}, {tau(0), tau(1)});
          }
        }
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          for (std::size_t k = j + 1; k < n; ++k) {
            Eigen::Matrix3d A;
            A << dirs[i], dirs[j], dirs[k];
            if (std::abs(A.determinant()) < 1e-12) continue;
            const Eigen::Matrix3d Ai = A.inverse();
            for (const auto &y : images) {
              const Vector3d tau = Ai * y;
              consider({i, j, k}, {tau(0), tau(1), tau(2)});
            }
          }
    }
  }
  if (!std::isfinite(best.total)) {
    std::ostringstream os;
    os << "plan_nonlocal_polyline: directions from (Jx, Jy, Jz) span rank "
       << rank << " and no nonnegative combination of at most 3 reaches "
       << "the target";
    throw SolverFailure(os.str(), std::numeric_limits<double>::infinity());
  }
  const auto Hc = HamiltonianSpec::diagonal(Vector3d::Zero(),
                                            Vector3d::Zero(), Jd);
  SteeringPlan p;
  p.strategy = "nonlocal_polyline";
  p.sign_convention = -1;
  Mat4 pending = Mat4::Identity();
  for (std::size_t s = 0; s < best.idx.size(); ++s) {
    const Mat4 k = G[owner[best.idx[s]]].local();
    pending = k.adjoint() * pending;
    if (!pending.isApprox(Mat4::Identity(), 1e-14)) p.segments.push_back(local(pending));
    p.segments.push_back(evolution(Hc, std::max(0., best.tau[s])));
    pending = k;
  }
  if (!pending.isApprox(Mat4::Identity(), 1e-14)) p.segments.push_back(local(pending));
  p.predicted_endpoint = weyl::fold_to_chamber(c);
  p.target_class = p.predicted_endpoint;
  p.tolerance = 1e-6;
  p.parameters = {{"segments", double(best.idx.size())},
                  {"coupling_time", best.total}};
  return p;
}

}  // namespace steer2q
}  // namespace weylsteer
