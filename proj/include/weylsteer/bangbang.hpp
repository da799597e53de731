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

#include <vector>

#include "weylsteer/qmath.hpp"

namespace weylsteer {
namespace bangbang {

struct HamiltonianPair {
  Mat2 H1, H2;
};

// k H1 k^dagger = a Z and k H2 k^dagger = b (sin(alpha) Z + cos(alpha) X)
// for the traceless parts of H1, H2.
struct StandardizedPair {
  Mat2 k;
  double a = 0, b = 0, alpha = 0;
  // z-rotation parameter of the second conjugation e^{i gamma Z}
  double gamma_bb = 0;
};

// Durations alternate H1, H2, H1, ... in time order starting with H1.
// trailing_z is extra H1 time on the fiber side of the product; the
// synthesizer folds it into durations[0] and reports 0.
struct SwitchSequence {
  std::vector<double> durations;
  double trailing_z = 0;
  Complex global_phase{1., 0.};

  double total_time() const;
};

StandardizedPair standardize_pair(const HamiltonianPair &pair);

// Upper bound on the number of switchings for inter-axis angle alpha.
unsigned max_switches(double alpha);

// Product e^{-i H_n t_n} ... e^{-i H_1 t_1} of a sequence.
Mat2 compose(const SwitchSequence &seq, const HamiltonianPair &pair);

SwitchSequence synthesize_bangbang(const Mat2 &target,
                                   const HamiltonianPair &pair);

}  // namespace bangbang
}  // namespace weylsteer
