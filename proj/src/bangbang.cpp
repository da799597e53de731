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

#include "weylsteer/bangbang.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "weylsteer/bloch.hpp"

namespace weylsteer {
namespace bangbang {

using Eigen::Vector3d;
using qmath::wrap;

double SwitchSequence::total_time() const {
  double t = trailing_z;
  for (double d : durations) t += d;
  return t;
}

namespace {

Mat2 traceless(const Mat2 &H) {
  return H - H.trace() / 2. * qmath::pauli_i();
}

}  // namespace

StandardizedPair standardize_pair(const HamiltonianPair &pair) {
  qmath::require_hermitian(pair.H1, "standardize_pair");
  qmath::require_hermitian(pair.H2, "standardize_pair");
  const Mat2 H1 = traceless(pair.H1), H2 = traceless(pair.H2);
  const auto drift = bloch::standardize_drift(H1);
  const Vector3d c = qmath::pauli_coeffs(drift.k * H2 * drift.k.adjoint());
  const double rho = std::hypot(c(0), c(1));
  if (rho <= 1e-12 * std::max(1., c.norm())) {
    throw ContractViolation(
        "standardize_pair: H2 is parallel to H1, the pair does not generate "
        "su(2)");
  }
  StandardizedPair s;
  s.a = drift.a;
  s.gamma_bb = std::atan2(c(1), c(0)) / 2;
  const Mat2 kz = bloch::rz(-2 * s.gamma_bb);  // e^{i gamma Z}
  s.k = kz * drift.k;
  s.b = std::hypot(rho, c(2));
  s.alpha = std::atan2(c(2), rho);
  return s;
}

unsigned max_switches(double alpha) {
  if (!(alpha >= 0 && alpha <= PI)) {
    throw ContractViolation("max_switches: alpha outside [0, pi]");
  }
  const double gap = std::abs(PI / 2 - alpha);
  if (gap < 1e-12) {
    throw ContractViolation("max_switches: alpha = pi/2 gives parallel axes");
  }
  return static_cast<unsigned>(std::ceil(PI / gap - 1e-9));
}

Mat2 compose(const SwitchSequence &seq, const HamiltonianPair &pair) {
  Mat2 U = qmath::expm_hermitian(pair.H1, seq.trailing_z);
  for (std::size_t i = 0; i < seq.durations.size(); ++i) {
    const Mat2 &H = i % 2 == 0 ? pair.H1 : pair.H2;
    U = qmath::expm_hermitian(H, seq.durations[i]) * U;
  }
  return U;
}

namespace {

Vector3d rotate(const Vector3d &v, const Vector3d &n, double ang) {
  return v * std::cos(ang) + n.cross(v) * std::sin(ang) +
         n * n.dot(v) * (1 - std::cos(ang));
}

// Angles b with (rotate(v, n, b))_z = z.
std::vector<double> latitude_hits(const Vector3d &v, const Vector3d &n,
                                  double z) {
  const double A0 = n(2) * n.dot(v);
  const double A1 = v(2) - A0;
  const double A2 = n.cross(v)(2);
  const double R = std::hypot(A1, A2);
  if (R < 1e-12) {
    if (std::abs(z - A0) < 1e-10) return {0.};
    return {};
  }
  const double r = (z - A0) / R;
  if (std::abs(r) > 1 + 1e-10) return {};
  const double b0 = std::atan2(A2, A1);
  const double d = std::acos(std::clamp(r, -1., 1.));
  return {wrap(b0 + d, 2 * PI), wrap(b0 - d, 2 * PI)};
}

double top_angle(const Vector3d &v, const Vector3d &n) {
  const double A0 = n(2) * n.dot(v);
  const double A1 = v(2) - A0;
  const double A2 = n.cross(v)(2);
  return wrap(std::atan2(A2, A1), 2 * PI);
}

double azimuth(const Vector3d &v) { return std::atan2(v(1), v(0)); }

struct Context {
  Mat2 W;  // target in the standardized frame, SU(2)
  double a, b;
  Vector3d n;
  Mat2 H1, H2;  // standardized, traceless
};

// Rotation angles of steering segments (H2 first) to full duration list.
std::optional<SwitchSequence> close_fiber(const Context &c,
                                          const std::vector<double> &angles) {
  SwitchSequence seq;
  seq.durations.push_back(0.);
  Mat2 V = Mat2::Identity();
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const bool h2 = i % 2 == 0;
    const double t = angles[i] / (2 * (h2 ? c.b : c.a));
    seq.durations.push_back(t);
    V = qmath::expm_hermitian(h2 ? c.H2 : c.H1, t) * V;
  }
  const Mat2 D = V.adjoint() * c.W;
  if (std::max(std::abs(D(0, 1)), std::abs(D(1, 0))) > 1e-6) {
    return std::nullopt;
  }
  const double t1 = wrap(-std::arg(D(0, 0) / D(1, 1)) / (2 * c.a), PI / c.a);
  seq.durations[0] = t1;
  V = V * qmath::expm_hermitian(c.H1, t1);
  if (qmath::gate_fidelity(c.W, V) < 1 - 1e-11) return std::nullopt;
  return seq;
}

// Candidate steering angle lists that use exactly k segments after t1.
std::vector<std::vector<double>> steer(const Context &c, unsigned k,
                                       const Vector3d &P) {
  const Vector3d S(0, 0, -1), z(0, 0, 1);
  std::vector<std::vector<double>> out;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  if (k == 1) {
    for (double b : latitude_hits(S, c.n, P(2))) out.push_back({b});
    return out;
  }
  // prefix rotations: greedy climbs, then a grid over the last prefix angle
  const unsigned L = k - 2;
  std::vector<double> greedy;
  Vector3d q = S;
  for (unsigned i = 0; i + 1 < L; ++i) {
    const bool h2 = i % 2 == 0;
    double ang = 0;
    if (h2) {
      ang = top_angle(q, c.n);
    } else {
      // azimuth that gives the following climb the highest reach
      double best = -2;
      for (int s = 0; s < 720; ++s) {
        const double psi = 2 * PI * s / 720;
        const Vector3d r = rotate(q, z, psi);
        const double h = rotate(r, c.n, top_angle(r, c.n))(2);
        if (h > best) {
          best = h;
          ang = psi;
        }
      }
    }
    greedy.push_back(ang);
    q = rotate(q, h2 ? c.n : z, ang);
  }
  std::vector<double> last_grid;
  if (L == 0) {
    last_grid.push_back(std::numeric_limits<double>::quiet_NaN());
  } else {
    const int G = 720;
    for (int s = 0; s < G; ++s) last_grid.push_back(2 * PI * s / G);
  }
  for (double g : last_grid) {
    std::vector<double> pre = greedy;
    Vector3d p = q;
    if (L > 0) {
      const bool h2 = (L - 1) % 2 == 0;
      pre.push_back(g);
      p = rotate(q, h2 ? c.n : z, g);
    }
    if (k % 2 == 0) {
      // ... H2 then H1
      for (double b : latitude_hits(p, c.n, P(2))) {
        const Vector3d r = rotate(p, c.n, b);
        double psi = 0;
        if (std::hypot(P(0), P(1)) > 1e-12 && std::hypot(r(0), r(1)) > 1e-12)
          psi = wrap(azimuth(P) - azimuth(r), 2 * PI);
        auto v = pre;
        v.push_back(b);
        v.push_back(psi);
        out.push_back(v);
      }
    } else {
      // ... H1 then H2: back-propagate P along its H2 circle to p's latitude
      for (double b : latitude_hits(P, c.n, p(2))) {
        const Vector3d r = rotate(P, c.n, b);
        double psi = 0;
        if (std::hypot(p(0), p(1)) > 1e-12 && std::hypot(r(0), r(1)) > 1e-12)
          psi = wrap(azimuth(r) - azimuth(p), 2 * PI);
        auto v = pre;
        v.push_back(psi);
        v.push_back(wrap(-b, 2 * PI));
        out.push_back(v);
      }
    }
  }
  return out;
}

}  // namespace

SwitchSequence synthesize_bangbang(const Mat2 &target,
                                   const HamiltonianPair &pair) {
  qmath::require_unitary(target, "synthesize_bangbang");
  const StandardizedPair sp = standardize_pair(pair);
  const double abs_alpha = std::abs(sp.alpha);
  if (std::abs(PI / 2 - abs_alpha) < 1e-12) {
    throw ContractViolation("synthesize_bangbang: alpha = +-pi/2");
  }
  Context c;
  c.a = sp.a;
  c.b = sp.b;
  c.n = Vector3d(std::cos(sp.alpha), 0, std::sin(sp.alpha));
  c.H1 = sp.a * qmath::pauli_z();
  c.H2 = sp.b * (std::sin(sp.alpha) * qmath::pauli_z() +
                 std::cos(sp.alpha) * qmath::pauli_x());
  c.W = qmath::to_special_unitary(Mat2(sp.k * target * sp.k.adjoint()));
  const Vector3d P = bloch::hopf_map(c.W).vec();
  const unsigned N = max_switches(abs_alpha);
  for (unsigned k = 0; k <= N; ++k) {
    std::optional<SwitchSequence> best;
    for (const auto &angles : steer(c, k, P)) {
      auto seq = close_fiber(c, angles);
      if (seq && (!best || seq->total_time() < best->total_time())) best = seq;
    }
    if (best) {
      const Mat2 V = compose(*best, pair);
      const Complex tr = (target.adjoint() * V).trace() / 2.;
      best->global_phase = tr / std::abs(tr);
      if (qmath::gate_fidelity(target, V) < 1 - 1e-9) {
        std::ostringstream os;
        os << "synthesize_bangbang: composed sequence fidelity "
           << qmath::gate_fidelity(target, V) << " below 1 - 1e-9";
        throw SolverFailure(os.str(), 1 - qmath::gate_fidelity(target, V));
      }
      return *best;
    }
  }
  std::ostringstream os;
  os << "synthesize_bangbang: no sequence with at most " << N + 1
     << " segments reaches the target Bloch point";
  throw SolverFailure(os.str(), std::numeric_limits<double>::infinity());
}

}  // namespace bangbang
}  // namespace weylsteer
