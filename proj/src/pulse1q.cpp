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

#include "weylsteer/pulse1q.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace weylsteer {
namespace pulse1q {

using bloch::rz;
using qmath::wrap;

namespace {

constexpr int kMaxWinding = 64;

// signed distance of x from the nearest multiple of 2 pi
double lattice_distance(double x) {
  const double r = wrap(x, 2 * PI);
  return std::min(r, 2 * PI - r);
}

PulseProgram1Q make_program(
    Frame frame, const OscillatingFieldSpec &field, double t_f, double t_z,
    int m1, int m2, int m3) {
  PulseProgram1Q p;
  p.frame = frame;
  p.field = field;
  p.m1 = m1;
  p.m2 = m2;
  p.m3 = m3;
  p.segments.push_back({PulseSegment::Kind::FreeZ, t_z});
  p.segments.push_back({PulseSegment::Kind::Driven, t_f});
  return p;
}

void set_phase(PulseProgram1Q &p, const Mat2 &target) {
  const Complex tr = (target.adjoint() * program_propagator(p)).trace() / 2.;
  p.global_phase = std::abs(tr) > 0 ? tr / std::abs(tr) : Complex(1.);
}

struct Candidate {
  double t_f, t_z, delta;
  int m1, m2, m3;
  double total() const { return t_f + t_z; }
};

bool better(const Candidate &a, const Candidate &b) {
  const double ea = 1e-12 * std::max(1., b.total());
  if (a.total() < b.total() - ea) return true;
  if (a.total() > b.total() + ea) return false;
  return a.t_f < b.t_f;
}

// Choose m3 of the given parity with the smallest t_z = (rhs - 2 m3 pi)/w0
// that is nonnegative.
bool pick_m3(double rhs, double omega0, int parity, int &m3, double &t_z) {
  int m = static_cast<int>(std::floor(rhs / (2 * PI) + 1e-12));
  if (((m % 2) + 2) % 2 != parity) --m;
  m3 = m;
  t_z = std::max(0., (rhs - 2 * m * PI) / omega0);
  return true;
}

std::string no_solution(const char *who, const bloch::EulerZXZ &e) {
  std::ostringstream os;
  os << who << ": no nonnegative solution with |m2| <= " << kMaxWinding
     << " for (theta, phi, gamma) = (" << e.theta << ", " << e.phi << ", "
     << e.gamma << ")";
  return os.str();
}

void check_drive(double omega0, double A, const char *who) {
  if (!(omega0 > 0)) throw ContractViolation(std::string(who) + ": w0 <= 0");
  if (!(A > 0)) throw ContractViolation(std::string(who) + ": A <= 0");
}

std::vector<Candidate> perp_candidates(
    const bloch::EulerZXZ &e, double omega0, double A) {
  std::vector<Candidate> out;
  for (int m2 = 0; m2 <= kMaxWinding; ++m2) {
    const double t_f = 2 * (PI - e.theta + 2 * m2 * PI) / A;
    const double raw = e.phi - PI / 2 - omega0 * t_f;
    const double delta = wrap(raw, 2 * PI);
    const int m1 = static_cast<int>(std::lround((delta - raw) / (2 * PI)));
    Candidate c{t_f, 0., delta, m1, m2, 0};
    const int parity = (((m1 + m2) % 2) + 2) % 2;
    if (!pick_m3(delta + e.gamma, omega0, parity, c.m3, c.t_z)) continue;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), better);
  return out;
}

}  // namespace

double PulseProgram1Q::t_f() const {
  double t = 0;
  for (const auto &s : segments)
    if (s.kind == PulseSegment::Kind::Driven) t += s.duration;
  return t;
}

double PulseProgram1Q::t_z() const {
  double t = 0;
  for (const auto &s : segments)
    if (s.kind == PulseSegment::Kind::FreeZ) t += s.duration;
  return t;
}

double PulseProgram1Q::total_time() const { return t_f() + t_z(); }

Mat2 rwa_propagator_perp(const OscillatingFieldSpec &s, double t_f,
                         double t_z) {
  const Mat2 mid = qmath::expm_hermitian(
      s.A / 4 * qmath::pauli_x() + (s.omega0 - s.omega) / 2 * qmath::pauli_z(),
      t_f);
  return rz(s.omega * t_f + s.delta) * mid * rz(s.omega0 * t_z - s.delta);
}

Mat2 rwa_propagator_rotframe(const OscillatingFieldSpec &s, double t_f,
                             double t_z) {
  return rz(s.delta) * bloch::rx(s.A / 2 * t_f) *
         rz(s.omega0 * t_z - s.delta);
}

Mat2 rwa_propagator_tilted(const OscillatingFieldSpec &s, double t_f,
                           double t_z) {
  const double w0 = s.omega0;
  const double lam2 = s.A * std::cos(s.zeta) *
                      (std::sin(w0 * t_f + s.delta) - std::sin(s.delta)) / w0;
  return rz(w0 * t_f + s.delta) * bloch::rx(-s.A * std::sin(s.zeta) / 2 * t_f) *
         rz(lam2 - s.delta + w0 * t_z);
}

qmath::TimeDependentField lab_field(const OscillatingFieldSpec &s,
                                    Frame frame) {
  const Mat2 Z = qmath::pauli_z(), X = qmath::pauli_x();
  Mat2 Hc = X;
  if (frame == Frame::Tilted) {
    Hc = std::cos(s.zeta) * Z - std::sin(s.zeta) * X;
  }
  return [s, Z, Hc](double t) -> MatX {
    return s.omega0 / 2 * Z + s.A / 2 * std::cos(s.omega * t + s.delta) * Hc;
  };
}

Mat2 exact_propagator(const OscillatingFieldSpec &s, Frame frame, double t_f,
                      double t_z, unsigned steps) {
  const auto field = lab_field(s, frame);
  if (steps == 0) steps = qmath::default_steps(field, t_f);
  Mat2 U = qmath::propagate_timedep(field, t_f, steps) * rz(s.omega0 * t_z);
  if (frame == Frame::Rotating) U = rz(-s.omega0 * t_f) * U;
  return U;
}

Mat2 program_propagator(const PulseProgram1Q &p) {
  switch (p.frame) {
    case Frame::Rotating:
      return rwa_propagator_rotframe(p.field, p.t_f(), p.t_z());
    case Frame::Tilted:
      return rwa_propagator_tilted(p.field, p.t_f(), p.t_z());
    case Frame::Lab:
    default:
      return rwa_propagator_perp(p.field, p.t_f(), p.t_z());
  }
}

PulseProgram1Q design_resonant_perpendicular(const bloch::EulerZXZ &e,
                                             double omega0, double A) {
  check_drive(omega0, A, "design_resonant_perpendicular");
  const auto cands = perp_candidates(e, omega0, A);
  if (cands.empty()) {
    throw SolverFailure(no_solution("design_resonant_perpendicular", e),
                        std::numeric_limits<double>::infinity());
  }
  const Candidate &c = cands.front();
  OscillatingFieldSpec f{omega0, A, omega0, c.delta, PI / 2};
  PulseProgram1Q p = make_program(Frame::Lab, f, c.t_f, c.t_z, c.m1, c.m2, c.m3);
  set_phase(p, bloch::euler_reconstruct(e));
  return p;
}

PulseProgram1Q design_resonant_rotframe(const bloch::EulerZXZ &e,
                                        double omega0, double A) {
  check_drive(omega0, A, "design_resonant_rotframe");
  const double raw = e.phi - PI / 2;
  const double delta = wrap(raw, 2 * PI);
  const int m1 = static_cast<int>(std::lround((delta - raw) / (2 * PI)));
  bool found = false;
  Candidate best{};
  for (int m2 = 0; m2 <= kMaxWinding; ++m2) {
    Candidate c{2 * (PI - e.theta + 2 * m2 * PI) / A, 0., delta, m1, m2, 0};
    const int parity = (((m1 + m2) % 2) + 2) % 2;
    if (!pick_m3(delta + e.gamma, omega0, parity, c.m3, c.t_z)) continue;
    if (!found || better(c, best)) best = c;
    found = true;
  }
  if (!found) {
    throw SolverFailure(no_solution("design_resonant_rotframe", e),
                        std::numeric_limits<double>::infinity());
  }
  OscillatingFieldSpec f{omega0, A, omega0, best.delta, PI / 2};
  PulseProgram1Q p = make_program(
      Frame::Rotating, f, best.t_f, best.t_z, best.m1, best.m2, best.m3);
  set_phase(p, bloch::euler_reconstruct(e));
  return p;
}

PulseProgram1Q design_tilted(const bloch::EulerZXZ &e, double omega0, double A,
                             double zeta) {
  check_drive(omega0, A, "design_tilted");
  const double sz = std::sin(zeta);
  if (std::abs(sz) < 1e-12) {
    throw ContractViolation("design_tilted: sin(zeta) = 0 leaves no drive");
  }
  const double cz = std::cos(zeta);
  bool found = false;
  Candidate best{};
  for (int m2 = -kMaxWinding; m2 <= kMaxWinding; ++m2) {
    const double t_f = -2 * (PI - e.theta + 2 * m2 * PI) / (A * sz);
    if (t_f < -1e-12) continue;
    const double tf = std::max(0., t_f);
    const double raw = e.phi - PI / 2 - omega0 * tf;
    const double delta = wrap(raw, 2 * PI);
    const int m1 = static_cast<int>(std::lround((delta - raw) / (2 * PI)));
    const double lam2 =
        A * cz * (std::sin(omega0 * tf + delta) - std::sin(delta)) / omega0;
    Candidate c{tf, 0., delta, m1, m2, 0};
    const int parity = (((m1 + m2) % 2) + 2) % 2;
    if (!pick_m3(e.gamma + delta - lam2, omega0, parity, c.m3, c.t_z)) continue;
    if (!found || better(c, best)) best = c;
    found = true;
  }
  if (!found) {
    throw SolverFailure(no_solution("design_tilted", e),
                        std::numeric_limits<double>::infinity());
  }
  OscillatingFieldSpec f{omega0, A, omega0, best.delta, zeta};
  PulseProgram1Q p = make_program(
      Frame::Tilted, f, best.t_f, best.t_z, best.m1, best.m2, best.m3);
  set_phase(p, bloch::euler_reconstruct(e));
  return p;
}

double lattice_residual_perp(const PulseProgram1Q &p,
                             const bloch::EulerZXZ &e) {
  return lattice_distance(
      p.field.omega0 * p.total_time() - (e.phi + e.gamma - PI / 2));
}

double lattice_residual_tilted(const PulseProgram1Q &p,
                               const bloch::EulerZXZ &e) {
  const auto &f = p.field;
  const double corr =
      f.A * std::cos(f.zeta) / f.omega0 * (std::cos(e.phi) + std::sin(f.delta));
  return lattice_distance(
      f.omega0 * p.total_time() - (e.phi + e.gamma - PI / 2 + corr));
}

namespace {

struct Qubit2Search {
  Mat2 target;
  double omega0, A_max, D, T;

  // x = (detuning, A, delta, t_f)
  void clamp(Eigen::Vector4d &x) const {
    x(0) = std::clamp(x(0), -D, D);
    x(1) = std::clamp(x(1), 0., A_max);
    x(2) = wrap(x(2), 2 * PI);
    x(3) = std::clamp(x(3), 0., T);
  }

  OscillatingFieldSpec spec(const Eigen::Vector4d &x) const {
    return {omega0, x(1), omega0 - x(0), x(2), PI / 2};
  }

  double infidelity(const Eigen::Vector4d &x) const {
    const Mat2 U = rwa_propagator_perp(spec(x), x(3), T - x(3));
    return 1. - qmath::gate_fidelity(target, U);
  }
};

// Pattern search along each coordinate with step halving.
double coordinate_descent(const Qubit2Search &s, Eigen::Vector4d &x,
                          unsigned &evals, unsigned budget) {
  Eigen::Vector4d step(s.D / 4, s.A_max / 4, PI / 2, s.T / 4);
  double fx = s.infidelity(x);
  ++evals;
  while (evals < budget && step.maxCoeff() > 1e-11 && fx > 1e-15) {
    bool moved = false;
    for (int i = 0; i < 4 && evals < budget; ++i) {
      for (double sgn : {1., -1.}) {
        Eigen::Vector4d y = x;
        y(i) += sgn * step(i);
        s.clamp(y);
        const double fy = s.infidelity(y);
        ++evals;
        if (fy < fx) {
          x = y;
          fx = fy;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return fx;
}

}  // namespace

SimultaneousSchedule schedule_simultaneous(
    const bloch::EulerZXZ &target1, const bloch::EulerZXZ &target2,
    double omega0_1, double omega0_2, double A_max,
    const SimultaneousOptions &opts) {
  check_drive(omega0_1, A_max, "schedule_simultaneous");
  check_drive(omega0_2, A_max, "schedule_simultaneous");
  const Mat2 U1 = bloch::euler_reconstruct(target1);
  const Mat2 U2 = bloch::euler_reconstruct(target2);
  const auto cands = perp_candidates(target1, omega0_1, A_max);
  if (cands.empty()) {
    throw SolverFailure(no_solution("schedule_simultaneous", target1),
                        std::numeric_limits<double>::infinity());
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0., 1.);
  SimultaneousSchedule best;
  double best_inf = std::numeric_limits<double>::infinity();
  const double D = opts.max_detuning > 0 ? opts.max_detuning : A_max;
  const unsigned tries =
      std::min<unsigned>(cands.size(), opts.max_escalations + 1);
  for (unsigned c = 0; c < tries; ++c) {
    const Candidate &q1 = cands[c];
    const double T = q1.total();
    Qubit2Search s{U2, omega0_2, A_max, D, T};
    unsigned evals = 0;
    Eigen::Vector4d xbest = Eigen::Vector4d::Zero();
    double fbest = std::numeric_limits<double>::infinity();
    const unsigned per = std::max(1u, opts.budget / opts.restarts);
    for (unsigned r = 0; r < opts.restarts && fbest > 1e-14; ++r) {
      Eigen::Vector4d x(
          (2 * unit(rng) - 1) * D, unit(rng) * A_max, unit(rng) * 2 * PI,
          unit(rng) * T);
      if (r == 0) x = Eigen::Vector4d(0., A_max, 0., T);
      const double f = coordinate_descent(s, x, evals, evals + per);
      if (f < fbest) {
        fbest = f;
        xbest = x;
      }
    }
    if (fbest < best_inf) {
      best_inf = fbest;
      OscillatingFieldSpec f1{omega0_1, A_max, omega0_1, q1.delta, PI / 2};
      best.qubit1 =
          make_program(Frame::Lab, f1, q1.t_f, q1.t_z, q1.m1, q1.m2, q1.m3);
      set_phase(best.qubit1, U1);
      best.qubit2 = make_program(
          Frame::Lab, s.spec(xbest), xbest(3), T - xbest(3), 0, 0, 0);
      set_phase(best.qubit2, U2);
      best.total_time = T;
      best.fidelity1 =
          qmath::gate_fidelity(U1, program_propagator(best.qubit1));
      best.fidelity2 = 1. - fbest;
      best.escalations = c;
    }
    best.evaluations += evals;
    if (best_inf <= 1e-4) break;
  }
  if (best_inf > 1e-4) {
    std::ostringstream os;
    os << "schedule_simultaneous: qubit 2 fidelity " << (1. - best_inf)
       << " below 1 - 1e-4 at total time " << best.total_time;
    throw SolverFailure(os.str(), best_inf);
  }
  return best;
}

}  // namespace pulse1q
}  // namespace weylsteer
