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

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "testutil.hpp"
#include "weylsteer/steer2q.hpp"

namespace weylsteer {
namespace test_steer2q {

using namespace steer2q;
using Catch::Approx;
using Eigen::Vector3d;

static Mat4 build_h(const Vector3d &g1, const Vector3d &g2, const Vector3d &J) {
  const Mat2 P[3] = {testutil::sx(), testutil::sy(), testutil::sz()};
  Mat4 H = Mat4::Zero();
  for (int k = 0; k < 3; ++k) {
    H += g1(k) * testutil::kron2(P[k], Mat2::Identity()) +
         g2(k) * testutil::kron2(Mat2::Identity(), P[k]) +
         J(k) * testutil::kron2(P[k], P[k]);
  }
  return H;
}

static std::vector<double> grid(double t_end, int n) {
  std::vector<double> t;
  for (int i = 1; i <= n; ++i) t.push_back(t_end * i / n);
  return t;
}

// Independent plan simulation from the segment list.
static Mat4 run_plan(const SteeringPlan &p) {
  Mat4 U = Mat4::Identity();
  for (const auto &s : p.segments) {
    if (s.kind == PlanSegment::Kind::Local) {
      U = s.local * U;
      continue;
    }
    const Mat4 H = build_h(s.hamiltonian.g1, s.hamiltonian.g2,
                           s.hamiltonian.J.diagonal());
    U = Mat4(testutil::evolve(H, p.sign_convention * s.duration)) * U;
  }
  return U;
}

SCENARIO("Weyl chamber trajectories") {
  GIVEN("Pure coupling") {
    const Vector3d J(0.5, 0.3, 0.1);
    const auto H = HamiltonianSpec::diagonal(Vector3d::Zero(), Vector3d::Zero(), J);
    const auto tr = weyl_trajectory(H, grid(2., 40), -1);
    for (const auto &s : tr.samples) {
      const WeylPoint want = weyl::fold_to_chamber(2 * J * s.t);
      REQUIRE((s.point.vec() - want.vec()).norm() < 1e-9);
      REQUIRE(s.point.is_canonical());
    }
    const auto tp = weyl_trajectory(H, grid(2., 40), 1);
    for (const auto &s : tp.samples) {
      const Vector3d w = -2 * J * s.t;
      REQUIRE((s.invariants.makhlin -
               testutil::makhlin(testutil::canonical(w(0), w(1), w(2))))
                  .norm() < 1e-9);
    }
  }
  GIVEN("Local fields only") {
    const auto H = HamiltonianSpec::diagonal(Vector3d(0.3, 1, -2),
                                             Vector3d::Zero(), Vector3d::Zero());
    for (const auto &s : weyl_trajectory(H, grid(3., 20), 1).samples)
      REQUIRE(s.point.vec().norm() < 1e-9);
  }
  GIVEN("Bad grids") {
    const auto H = HamiltonianSpec::diagonal(Vector3d::Zero(), Vector3d::Zero(),
                                             Vector3d::Ones());
    REQUIRE_THROWS_AS(weyl_trajectory(H, {}, 1), ContractViolation);
    REQUIRE_THROWS_AS(weyl_trajectory(H, {0.1, 0.1}, 1), ContractViolation);
  }
}

SCENARIO("Isotropic coupling with equal local fields") {
  const Vector3d g(0.7, -0.4, 1.1);
  GIVEN("The flow") {
    const auto H = HamiltonianSpec::diagonal(g, g, Vector3d::Constant(1.));
    const auto S = HamiltonianSpec::diagonal(Vector3d::Zero(), Vector3d::Zero(),
                                             Vector3d::Constant(1.));
    const auto a = weyl_trajectory(H, grid(1.5, 30), 1);
    const auto b = weyl_trajectory(S, grid(1.5, 30), 1);
    for (std::size_t i = 0; i < a.samples.size(); ++i)
      REQUIRE((a.samples[i].invariants.makhlin - b.samples[i].invariants.makhlin)
                  .norm() < 1e-9);
  }
  GIVEN("Exact factorization") {
    const Mat4 Smat = build_h(Vector3d::Zero(), Vector3d::Zero(), Vector3d::Ones());
    const Mat2 gs = qmath::pauli_vec(g);
    for (double t : {0.2, 0.9, 2.7}) {
      const Mat4 lhs = evolve(HamiltonianSpec::diagonal(g, g, Vector3d::Constant(0.4)), t, 1);
      const Mat2 l = testutil::evolve(gs, t);
      const Mat4 rhs = testutil::kron2(l, l) * Mat4(testutil::evolve(0.4 * Smat, t));
      REQUIRE((lhs - rhs).norm() < 1e-10);
    }
  }
  GIVEN("The two-segment plan") {
    for (double J : {1., 0.25}) {
      const auto p = plan_isotropic_equal(g, J);
      REQUIRE(p.coupling_time() == Approx(PI / (4 * J)));
      const Mat4 U = run_plan(p);
      REQUIRE((testutil::makhlin(U) - Vector3d(0, 0, 1)).norm() < 1e-9);
      REQUIRE(plan_residual(p) <= p.tolerance);
      SteeringPlan half = p;
      half.segments.resize(1);
      REQUIRE((weyl::weyl_coordinates(simulate_plan(half)).vec() -
               Vector3d::Constant(PI / 4))
                  .norm() < 1e-9);
    }
    REQUIRE_THROWS_AS(plan_isotropic_equal(g, 0.), ContractViolation);
  }
}

SCENARIO("Isotropic coupling with proportional local fields") {
  GIVEN("The worked parameters") {
    const auto p = plan_isotropic_ratio(Vector3d(4, 4, 4), 0.1, 4);
    REQUIRE(p.parameters.at("lambda") == Approx(0.7709).margin(5e-5));
    REQUIRE(p.parameters.at("omega") == Approx(1.6).margin(1e-3));
    REQUIRE(p.parameters.at("t") == Approx(2.5 * PI).margin(1e-12));
    REQUIRE(plan_residual(p) <= 1e-6);
    REQUIRE((weyl::weyl_coordinates(run_plan(p)).vec() - Vector3d(PI / 2, 0, 0))
                .norm() < 1e-6);
  }
  GIVEN("The closed-form trajectory") {
    for (auto root : {LambdaRoot::Below, LambdaRoot::Above}) {
      for (int m : {1, 2, 4}) {
        const double J = 0.1;
        const Vector3d g2(4, 4, 4);
        const auto p = plan_isotropic_ratio(g2, J, m, root);
        const double lambda = p.parameters.at("lambda");
        const double omega = p.parameters.at("omega");
        REQUIRE(p.parameters.at("t") * 4 * J == Approx(PI));
        REQUIRE(omega * p.parameters.at("t") == Approx(m * PI));
        if (root == LambdaRoot::Above) REQUIRE(lambda > 1);
        const auto H = HamiltonianSpec::diagonal(lambda * g2, g2, Vector3d::Constant(J));
        for (const auto &s : weyl_trajectory(H, grid(2.5 * PI, 60), -1).samples) {
          const WeylPoint c = isotropic_ratio_curve(J, omega, s.t);
          REQUIRE((s.invariants.makhlin - weyl::invariants_from_weyl(c).makhlin)
                      .norm() < 1e-6);
        }
        REQUIRE(plan_residual(p) <= 1e-6);
      }
    }
  }
  GIVEN("Invalid inputs") {
    REQUIRE_THROWS_AS(plan_isotropic_ratio(Vector3d::Zero(), 0.1, 1), ContractViolation);
    REQUIRE_THROWS_AS(plan_isotropic_ratio(Vector3d::Ones(), 0., 1), ContractViolation);
  }
}

// Makhlin triple of e^{+i H t} with the YY realization of (f1, f2).
static Vector3d yy_simulated(double f1, double f2, double J, double t) {
  const Mat4 H = build_h(Vector3d((f1 + f2) / 2, 0, 0), Vector3d((f1 - f2) / 2, 0, 0),
                         Vector3d(0, J, 0));
  return testutil::makhlin(testutil::evolve(H, -t));
}

SCENARIO("YY model invariants") {
  REQUIRE((yy_invariants(0.4, 0.1, 1., 0.).makhlin - Vector3d(1, 0, 3)).norm() < 1e-12);
  REQUIRE(yy_invariants(1.6753, 0, 1, 3 * PI / 8).makhlin.cwiseAbs().maxCoeff() < 1e-3);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const double f1 = u(rng), f2 = u(rng), J = 0.3 + std::abs(u(rng)), t = 2 + u(rng);
    const auto inv = yy_invariants(f1, f2, J, t);
    REQUIRE((inv.makhlin - yy_simulated(f1, f2, J, t)).norm() < 1e-9);
    REQUIRE(inv.makhlin(1) == 0.);
    REQUIRE((weyl::chamber_to_makhlin(inv.chamber) - inv.makhlin).norm() < 1e-12);
    const auto h = yy_hamiltonian(f1, f2, J);
    REQUIRE(h.g1(0) + h.g2(0) == Approx(f1));
  }
}

SCENARIO("YY gate solver") {
  GIVEN("The B gate") {
    const auto p = solve_yy_gate(YYTarget::B);
    const double f1 = p.parameters.at("f1"), f2 = p.parameters.at("f2"),
                 t = p.parameters.at("t");
    REQUIRE(f1 == Approx(1.6753).margin(1e-3));
    REQUIRE(f2 == Approx(0.).margin(1e-3));
    REQUIRE(t == Approx(3 * PI / 8).margin(1e-3));
    REQUIRE(yy_simulated(f1, f2, 1, t).norm() < 1e-9);
    REQUIRE(plan_residual(p) <= 1e-9);
    THEN("The trajectory stays in the base plane") {
      const auto tr = weyl_trajectory(p.segments[0].hamiltonian, grid(t, 50), -1);
      for (const auto &s : tr.samples) REQUIRE(s.point.c3 < 1e-9);
    }
    THEN("Nothing is feasible earlier on the scan grid") {
      for (double tt = 0.01; tt < t - 0.01; tt += 0.01) {
        bool hit = false;
        for (double f = 0; f <= 3 && !hit; f += 1e-3)
          hit = std::abs(yy_invariants(f, 0, 1, tt).makhlin(0)) < 1e-12;
        REQUIRE_FALSE(hit);
      }
    }
  }
  GIVEN("Rescaled coupling") {
    const auto p = solve_yy_gate(YYTarget::B, 2.);
    REQUIRE(p.parameters.at("t") == Approx(3 * PI / 16).margin(1e-9));
    REQUIRE(plan_residual(p) <= 1e-9);
  }
  GIVEN("The CNOT gate") {
    const auto p = solve_yy_gate(YYTarget::CNOT);
    const double f1 = p.parameters.at("f1"), f2 = p.parameters.at("f2"),
                 t = p.parameters.at("t");
    REQUIRE((yy_simulated(f1, f2, 1, t) - Vector3d(0, 0, 1)).norm() < 1e-9);
    REQUIRE(plan_residual(p) <= 1e-9);
    THEN("The returned point is a double root of the field condition") {
      auto F = [&](double f) {
        return std::cos(2 * std::sqrt(f * f + 1) * t) + f * f;
      };
      const double h = 1e-5;
      REQUIRE(std::abs(F(f1)) < 1e-9);
      REQUIRE(std::abs((F(f1 + h) - F(f1 - h)) / (2 * h)) < 1e-6);
      // just below the onset the condition has no root near f1
      auto G = [&](double f) {
        return std::cos(2 * std::sqrt(f * f + 1) * (t - 1e-3)) + f * f;
      };
      for (double f = f1 - 0.05; f < f1 + 0.05; f += 1e-4) REQUIRE(G(f) > 0);
    }
  }
  GIVEN("A nonpositive coupling") {
    REQUIRE_THROWS_AS(solve_yy_gate(YYTarget::B, 0.), ContractViolation);
  }
}

// Largest Makhlin deviation between the simulated trajectory and a line.
static double line_deviation(const Vector3d &g1, const Vector3d &g2, double Jz,
                             double t_end) {
  const Vector3d dir = approx_straightline_ising(g1, g2);
  const double n2 = g1.squaredNorm();
  const auto H = HamiltonianSpec::diagonal(g1, g2, Vector3d(0, 0, Jz));
  double worst = 0;
  for (const auto &s : weyl_trajectory(H, grid(t_end, 80), -1).samples) {
    const Vector3d c = dir * Jz * s.t / n2;
    worst = std::max(worst, (s.invariants.makhlin -
                             weyl::invariants_from_weyl(c(0), c(1), c(2)).makhlin)
                                .norm());
  }
  return worst;
}

SCENARIO("Weak Ising coupling straight lines") {
  GIVEN("Fields along z") {
    const Vector3d g(0, 0, 2.);
    const Vector3d d = approx_straightline_ising(g, g);
    REQUIRE((d - Vector3d(8, 0, 0)).norm() < 1e-12);
    REQUIRE(line_deviation(g, g, 0.3, 4.) < 1e-9);
  }
  GIVEN("Fields along x at a coupling ratio of 0.02") {
    const Vector3d g(5., 0, 0);
    const Vector3d d = approx_straightline_ising(g, g);
    REQUIRE((d - Vector3d(25, 25, 0)).norm() < 1e-12);
    const double Jz = 0.02 * 5.;
    const auto H = HamiltonianSpec::diagonal(g, g, Vector3d(0, 0, Jz));
    double worst = 0;
    for (const auto &s : weyl_trajectory(H, grid(PI / (2 * Jz), 200), 1).samples) {
      const Vector3d line(Jz * s.t, Jz * s.t, 0);
      worst = std::max(worst, (s.point.vec() - line).cwiseAbs().maxCoeff());
    }
    REQUIRE(worst <= 0.05);
  }
  GIVEN("Random equal-norm fields") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> n;
    for (int i = 0; i < 5; ++i) {
      const Vector3d g1 = 3 * Vector3d(n(rng), n(rng), n(rng)).normalized();
      const Vector3d g2 = 3 * Vector3d(n(rng), n(rng), n(rng)).normalized();
      const double Jz = 0.01 * 3;
      const double t_end = 0.5 / Jz;
      const double e1 = line_deviation(g1, g2, Jz, t_end);
      const double e2 = line_deviation(g1, g2, Jz / 2, 2 * t_end);
      REQUIRE(e2 < e1);
    }
  }
  GIVEN("Unequal norms") {
    REQUIRE_THROWS_AS(approx_straightline_ising(Vector3d(1, 0, 0), Vector3d(2, 0, 0)),
                      ContractViolation);
  }
}

SCENARIO("Weak-coupling CNOT planning") {
  const Vector3d Jd(0, 0, 0.2), d1(2.5, 0, 10.0182), d2(2, 0, 7.8177);
  GIVEN("The worked template") {
    const auto p = plan_weak_cnot(Jd, d1, d2, 3);
    const double t = p.parameters.at("t");
    REQUIRE(t == Approx(4.1778).margin(1e-3));
    const auto &s = p.segments[0].hamiltonian;
    REQUIRE((s.g1 - d1).cwiseAbs().maxCoeff() < 1e-3);
    REQUIRE((s.g2 - d2).cwiseAbs().maxCoeff() < 1e-3);
    REQUIRE((s.g1.norm() - s.g2.norm()) * t == Approx(3 * PI));
    REQUIRE(weak_c1_rate(Jd, s.g1, s.g2) * t == Approx(PI / 2));
    const Vector3d w = weyl::weyl_coordinates(run_plan(p)).vec() / PI;
    REQUIRE((w - Vector3d(0.5, 0.0002, 0.0002)).cwiseAbs().maxCoeff() < 5e-4);
    REQUIRE(plan_residual(p) <= p.tolerance);
    THEN("The fitted c1 slope matches the predicted rate") {
      const auto tr = weyl_trajectory(s, grid(0.9 * t, 100), -1);
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (const auto &q : tr.samples) {
        sx += q.t;
        sy += q.point.c1;
        sxx += q.t * q.t;
        sxy += q.t * q.point.c1;
      }
      const double N = double(tr.samples.size());
      const double slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
      REQUIRE(slope == Approx(weak_c1_rate(Jd, s.g1, s.g2)).epsilon(0.02));
    }
  }
  GIVEN("Weaker coupling improves the approximation") {
    double prev = 1e9;
    for (int m : {3, 9, 27}) {
      const auto p = plan_weak_cnot(Jd, d1, d2, m);
      REQUIRE(p.parameters.at("coupling_ratio") < 0.2);
      const auto &h = p.segments[0].hamiltonian;
      const double rate = weak_c1_rate(Jd, h.g1, h.g2);
      double dev = 0;
      for (const auto &q : weyl_trajectory(h, grid(p.parameters.at("t"), 400), -1).samples)
        dev = std::max(dev, (q.invariants.makhlin -
                             weyl::invariants_from_weyl(rate * q.t, 0, 0).makhlin)
                                .norm());
      REQUIRE(dev < prev);
      prev = dev;
    }
  }
  GIVEN("Infeasible templates") {
    REQUIRE_THROWS_AS(plan_weak_cnot(Jd, Vector3d(1, 0, 0), Vector3d(0.5, 0, 0), 1),
                      ContractViolation);
    REQUIRE_THROWS_AS(plan_weak_cnot(Jd, d1, d1, 1), ContractViolation);
  }
}

SCENARIO("Purely nonlocal polyline plans") {
  GIVEN("CNOT from isotropic coupling") {
    const auto p = plan_nonlocal_polyline(WeylPoint{PI / 2, 0, 0}, Vector3d::Ones());
    REQUIRE(p.parameters.at("segments") == 2);
    REQUIRE(p.coupling_time() == Approx(PI / 4));
    REQUIRE((testutil::makhlin(run_plan(p)) - Vector3d(0, 0, 1)).norm() < 1e-9);
  }
  GIVEN("A target on the coupling ray") {
    const Vector3d J(1, 0.7, 0.3);
    const auto p = plan_nonlocal_polyline(weyl::fold_to_chamber(2 * 0.4 * J), J);
    REQUIRE(p.parameters.at("segments") == 1);
    REQUIRE(p.coupling_time() == Approx(0.4));
  }
  GIVEN("Random chamber targets") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0, 1);
    const Vector3d J(1, 0.7, 0.3);
    for (int i = 0; i < 50; ++i) {
      Vector3d c(PI * u(rng), PI / 2 * u(rng), PI / 2 * u(rng));
      const WeylPoint w = weyl::fold_to_chamber(c);
      const auto p = plan_nonlocal_polyline(w, J);
      REQUIRE(p.parameters.at("segments") <= 3);
      for (const auto &s : p.segments) {
        if (s.kind == PlanSegment::Kind::Evolution) {
          REQUIRE(s.duration >= 0);
          REQUIRE(s.hamiltonian.g1.norm() == 0);
        }
      }
      REQUIRE((testutil::makhlin(run_plan(p)) - weyl::invariants_from_weyl(w).makhlin)
                  .cwiseAbs()
                  .maxCoeff() < 1e-6);
    }
  }
  GIVEN("A single nonzero coupling component") {
    const auto p = plan_nonlocal_polyline(WeylPoint{1., 0.6, 0.2}, Vector3d(0.5, 0, 0));
    REQUIRE(plan_residual(p) <= 1e-6);
  }
  GIVEN("No coupling") {
    REQUIRE_THROWS_AS(plan_nonlocal_polyline(WeylPoint{1, 0.5, 0}, Vector3d::Zero()),
                      ContractViolation);
  }
}

SCENARIO("Propagator sign on the worked examples") {
  // e^{-iHt} and e^{+iHt} give the same triple whenever Im G1 vanishes
  std::vector<std::pair<SteeringPlan, bool>> plans = {
      {solve_yy_gate(YYTarget::B), true},
      {solve_yy_gate(YYTarget::CNOT), true},
      {plan_isotropic_ratio(Vector3d(4, 4, 4), 0.1, 4), true},
      {plan_isotropic_equal(Vector3d(1, 2, 3), 1.), true},
      {plan_weak_cnot(Vector3d(0, 0, 0.2), Vector3d(2.5, 0, 10.0182),
                      Vector3d(2, 0, 7.8177), 3),
       true}};
  for (auto &[p, expect_real] : plans) {
    const Vector3d a = testutil::makhlin(run_plan(p));
    p.sign_convention = -p.sign_convention;
    const Vector3d b = testutil::makhlin(run_plan(p));
    if (expect_real) {
      REQUIRE(std::abs(a(1)) < 1e-6);
      REQUIRE((a - b).norm() < 1e-6);
    }
  }
  GIVEN("An intermediate point of the proportional-field flow") {
    const auto H = HamiltonianSpec::diagonal(0.77 * Vector3d(4, 4, 4), Vector3d(4, 4, 4),
                                             Vector3d::Constant(0.1));
    const Mat4 U = evolve(H, 1.0, 1);
    const Vector3d a = weyl::makhlin_invariants(U);
    const Vector3d b = weyl::makhlin_invariants(Mat4(U.adjoint()));
    THEN("Im G1 is nonzero and changes sign") {
      REQUIRE(std::abs(a(1)) > 1e-4);
      REQUIRE(a(1) == Approx(-b(1)));
    }
  }
}

}  // namespace test_steer2q
}  // namespace weylsteer
