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

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "weylsteer/bloch.hpp"
#include "weylsteer/qmath.hpp"
#include "weylsteer/steer2q.hpp"
#include "weylsteer/weyl.hpp"

namespace weylsteer {
namespace cli {

using json = nlohmann::json;

// Malformed configuration or input file; maps to exit status 1.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plaintext matrix: a dimension header line ("N" or "N N"), then N*N
// row-major entries written as re,im and separated by whitespace.
MatX read_matrix_file(const std::string &path);
std::string format_matrix(const MatX &M);

// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string &path, const std::string &content);

// Value rounded to 12 significant digits.
double round12(double x);
std::string fmt12(double x);

json to_json(const Eigen::Vector3d &v);
json to_json(const Complex &z);

double get_number(const json &j, const std::string &key);
double get_number(const json &j, const std::string &key, double fallback);
Eigen::Vector3d get_vec3(const json &j, const std::string &key);
std::string get_string(const json &j, const std::string &key);

// Targets: a gate name, {"matrix_file": path}, {"matrix": [[[re, im], ...]]},
// {"euler": {"theta", "phi", "gamma"}} or {"weyl": [c1, c2, c3]}.
Mat2 target_1q(const json &t);
Mat4 target_2q(const json &t);

// Hermitian 2x2 from {"pauli": [x, y, z], "identity": c} or a matrix/matrix_file entry.
Mat2 hamiltonian_1q(const json &h);

// {"g1": [..], "g2": [..], "J": [Jx, Jy, Jz] or 3x3 rows}
steer2q::HamiltonianSpec hamiltonian_2q(const json &h);

json load_config(const std::string &path);

}  // namespace cli
}  // namespace weylsteer
