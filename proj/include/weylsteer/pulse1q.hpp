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

#include <cstdint>
#include <vector>

#include "weylsteer/bloch.hpp"
#include "weylsteer/qmath.hpp"

namespace weylsteer {
namespace pulse1q {

// Lab-frame drift w0/2 Z plus drive A/2 cos(w t + delta) H_c.
// Perpendicular designers use H_c = X; tilted ones H_c = cos(zeta) Z -
// sin(zeta) X.
struct OscillatingFieldSpec {
  double omega0 = 1;
  double A = 0;
  double omega = 1;
  double delta = 0;
  double zeta = PI / 2;
};

enum class Frame { Lab, Rotating, Tilted };

struct PulseSegment {
  enum class Kind { Driven, FreeZ };
  Kind kind = Kind::FreeZ;
  double duration = 0;
};

// Segments are listed in time order: free evolution under the drift first,
// then the drive starting with phase delta.
struct PulseProgram1Q {
  Frame frame = Frame::Lab;
  OscillatingFieldSpec field;
  std::vector<PulseSegment> segments;
  Complex global_phase{1., 0.};
  int m1 = 0, m2 = 0, m3 = 0;

  double t_f() const;
  double t_z() const;
  double total_time() const;
};

Mat2 rwa_propagator_perp(const OscillatingFieldSpec &spec, double t_f,
                         double t_z);

// e^{-i delta/2 Z} e^{-i A/4 X t_f} e^{i(delta - w0 t_z)/2 Z}
Mat2 rwa_propagator_rotframe(const OscillatingFieldSpec &spec, double t_f,
                             double t_z);

Mat2 rwa_propagator_tilted(const OscillatingFieldSpec &spec, double t_f,
                           double t_z);

// Lab-frame Hamiltonian of the driven segment; t counts from drive start.
qmath::TimeDependentField lab_field(const OscillatingFieldSpec &spec,
                                    Frame frame);

// Exact lab propagator (free segment, then driven segment integrated).
Mat2 exact_propagator(const OscillatingFieldSpec &spec, Frame frame,
                      double t_f, double t_z, unsigned steps = 0);

// Closed-form propagator of a program in its own frame convention.
Mat2 program_propagator(const PulseProgram1Q &prog);

PulseProgram1Q design_resonant_perpendicular(const bloch::EulerZXZ &target,
                                             double omega0, double A);

PulseProgram1Q design_resonant_rotframe(const bloch::EulerZXZ &target,
                                        double omega0, double A);

PulseProgram1Q design_tilted(const bloch::EulerZXZ &target, double omega0,
                             double A, double zeta);

// Distance of omega0 (t_f + t_z) from the resonant time lattice, in radians
// reduced to [0, pi].
double lattice_residual_perp(const PulseProgram1Q &prog,
                             const bloch::EulerZXZ &target);
double lattice_residual_tilted(const PulseProgram1Q &prog,
                               const bloch::EulerZXZ &target);

struct SimultaneousOptions {
  unsigned restarts = 20;
  unsigned budget = 10000;
  // search range for qubit 2 detuning is [-max_detuning, max_detuning]
  double max_detuning = 0;  // 0 selects A_max
  // additional lattice points of qubit 1 tried when qubit 2 misses
  unsigned max_escalations = 8;
  std::uint64_t seed = 20260101;
};

struct SimultaneousSchedule {
  PulseProgram1Q qubit1;
  PulseProgram1Q qubit2;
  double total_time = 0;
  double fidelity1 = 0;
  double fidelity2 = 0;
  unsigned evaluations = 0;
  unsigned escalations = 0;
};

SimultaneousSchedule schedule_simultaneous(
    const bloch::EulerZXZ &target1, const bloch::EulerZXZ &target2,
    double omega0_1, double omega0_2, double A_max,
    const SimultaneousOptions &opts = {});

}  // namespace pulse1q
}  // namespace weylsteer
