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

#include "cli_io.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

namespace weylsteer {
namespace cli {

namespace {

Complex parse_entry(const std::string &tok, const std::string &path) {
  const auto comma = tok.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(tok), 0.};
    return {std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))};
  } catch (const std::exception &) {
    throw SchemaError(path + ": bad matrix entry '" + tok + "'");
  }
}

MatX matrix_from_json(const json &rows) {
  if (!rows.is_array() || rows.empty()) {
    throw SchemaError("matrix: expected a nonempty array of rows");
  }
  const auto n = rows.size();
  MatX M(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) {
      throw SchemaError("matrix: row " + std::to_string(i) + " has wrong length");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const json &e = rows[i][j];
      if (e.is_number()) {
        M(i, j) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() &&
                 e[1].is_number()) {
        M(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw SchemaError("matrix: entry (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") is not a number or [re, im]");
      }
    }
  }
  return M;
}

MatX matrix_spec(const json &t) {
  if (t.contains("matrix_file")) return read_matrix_file(get_string(t, "matrix_file"));
  if (t.contains("matrix")) return matrix_from_json(t.at("matrix"));
  throw SchemaError("target: expected a name, matrix, matrix_file, euler or weyl");
}

// matrix_file paths in a config are relative to the config's directory
void resolve_paths(json &j, const std::filesystem::path &base) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "matrix_file" && it->is_string()) {
        const std::filesystem::path p(it->get<std::string>());
        if (p.is_relative()) *it = (base / p).string();
      } else {
        resolve_paths(*it, base);
      }
    }
  } else if (j.is_array()) {
    for (auto &e : j) resolve_paths(e, base);
  }
}

std::string lower(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

MatX read_matrix_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open matrix file");
  std::string header;
  if (!std::getline(in, header)) throw SchemaError(path + ": missing dimension line");
  std::istringstream hs(header);
  long n = 0, m = 0;
  if (!(hs >> n) || n <= 0) throw SchemaError(path + ": bad dimension line");
  if (!(hs >> m)) m = n;
  if (m != n) throw SchemaError(path + ": matrix must be square");
  MatX M(n, n);
  std::string tok;
  for (long k = 0; k < n * n; ++k) {
    if (!(in >> tok)) {
      throw SchemaError(path + ": expected " + std::to_string(n * n) +
                        " entries, found " + std::to_string(k));
    }
    M(k / n, k % n) = parse_entry(tok, path);
  }
  if (in >> tok) throw SchemaError(path + ": trailing data after matrix entries");
  return M;
}

std::string format_matrix(const MatX &M) {
  std::ostringstream os;
  os << M.rows() << "\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      os << (j ? " " : "") << fmt12(M(i, j).real()) << "," << fmt12(M(i, j).imag());
    }
    os << "\n";
  }
  return os.str();
}

void write_atomic(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error(path + ": rename failed: " + ec.message());
  }
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0 ? 0. : r;  // no negative zero
}

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", round12(x));
  return buf;
}

json to_json(const Eigen::Vector3d &v) {
  return json::array({round12(v(0)), round12(v(1)), round12(v(2))});
}

json to_json(const Complex &z) {
  return json::array({round12(z.real()), round12(z.imag())});
}

double get_number(const json &j, const std::string &key) {
  if (!j.contains(key)) throw SchemaError("missing field '" + key + "'");
  if (!j.at(key).is_number()) throw SchemaError("field '" + key + "' must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw SchemaError("field '" + key + "' must be finite");
  return v;
}

double get_number(const json &j, const std::string &key, double fallback) {
  return j.contains(key) ? get_number(j, key) : fallback;
}

Eigen::Vector3d get_vec3(const json &j, const std::string &key) {
  if (!j.contains(key)) throw SchemaError("missing field '" + key + "'");
  const json &a = j.at(key);
  if (!a.is_array() || a.size() != 3) {
    throw SchemaError("field '" + key + "' must be an array of 3 numbers");
  }
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!a[i].is_number()) {
      throw SchemaError("field '" + key + "' must be an array of 3 numbers");
    }
    v(i) = a[i].get<double>();
  }
  return v;
}

std::string get_string(const json &j, const std::string &key) {
  if (!j.contains(key)) throw SchemaError("missing field '" + key + "'");
  if (!j.at(key).is_string()) throw SchemaError("field '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

Mat2 target_1q(const json &t) {
  if (t.is_string()) {
    const std::string n = lower(t.get<std::string>());
    Mat2 M;
    if (n == "identity" || n == "i") return Mat2::Identity();
    if (n == "x") return qmath::pauli_x();
    if (n == "y") return qmath::pauli_y();
    if (n == "z") return qmath::pauli_z();
    if (n == "h" || n == "hadamard") {
      M << 1, 1, 1, -1;
      return M / std::sqrt(2.);
    }
    if (n == "s") {
      M << 1, 0, 0, I_;
      return M;
    }
    if (n == "t") {
      M << 1, 0, 0, std::exp(I_ * PI / 4.);
      return M;
    }
    throw SchemaError("unknown single-qubit gate '" + t.get<std::string>() + "'");
  }
  if (!t.is_object()) throw SchemaError("target must be a string or object");
  if (t.contains("euler")) {
    const json &e = t.at("euler");
    return bloch::euler_reconstruct(
        {get_number(e, "theta"), get_number(e, "phi"), get_number(e, "gamma")});
  }
  const MatX M = matrix_spec(t);
  if (M.rows() != 2) throw SchemaError("target: expected a 2x2 matrix");
  if (!qmath::is_unitary(M, 1e-8 * 2)) throw SchemaError("target: matrix is not unitary");
  return M;
}

Mat4 target_2q(const json &t) {
  if (t.is_string()) {
    const std::string n = lower(t.get<std::string>());
    if (n == "cnot" || n == "cx") {
      Mat4 M = Mat4::Zero();
      M(0, 0) = M(1, 1) = M(2, 3) = M(3, 2) = 1;
      return M;
    }
    if (n == "swap") {
      Mat4 M = Mat4::Zero();
      M(0, 0) = M(1, 2) = M(2, 1) = M(3, 3) = 1;
      return M;
    }
    if (n == "b") return weyl::canonical_gate(Eigen::Vector3d(PI / 2, PI / 4, 0));
    if (n == "sqrt_swap") return weyl::canonical_gate(Eigen::Vector3d::Constant(PI / 4));
    if (n == "identity") return Mat4::Identity();
    throw SchemaError("unknown two-qubit gate '" + t.get<std::string>() + "'");
  }
  if (!t.is_object()) throw SchemaError("target must be a string or object");
  if (t.contains("weyl")) return weyl::canonical_gate(get_vec3(t, "weyl"));
  const MatX M = matrix_spec(t);
  if (M.rows() != 4) throw SchemaError("target: expected a 4x4 matrix");
  if (!qmath::is_unitary(M, 1e-8 * 4)) throw SchemaError("target: matrix is not unitary");
  return M;
}

Mat2 hamiltonian_1q(const json &h) {
  if (!h.is_object()) throw SchemaError("hamiltonian must be an object");
  Mat2 H;
  if (h.contains("pauli")) {
    H = qmath::pauli_vec(get_vec3(h, "pauli")) +
        get_number(h, "identity", 0.) * Mat2::Identity();
  } else {
    const MatX M = matrix_spec(h);
    if (M.rows() != 2) throw SchemaError("hamiltonian: expected a 2x2 matrix");
    H = M;
  }
  if (!qmath::is_hermitian(H, 1e-9)) throw SchemaError("hamiltonian is not Hermitian");
  return H;
}

steer2q::HamiltonianSpec hamiltonian_2q(const json &h) {
  if (!h.is_object()) throw SchemaError("hamiltonian must be an object");
  steer2q::HamiltonianSpec s;
  s.g1 = h.contains("g1") ? get_vec3(h, "g1") : Eigen::Vector3d::Zero();
  s.g2 = h.contains("g2") ? get_vec3(h, "g2") : Eigen::Vector3d::Zero();
  if (!h.contains("J")) throw SchemaError("missing field 'J'");
  const json &J = h.at("J");
  if (J.is_array() && J.size() == 3 && J[0].is_number()) {
    s.J = get_vec3(h, "J").asDiagonal();
  } else if (J.is_array() && J.size() == 3) {
    for (int r = 0; r < 3; ++r) {
      if (!J[r].is_array() || J[r].size() != 3) {
        throw SchemaError("field 'J' must be 3 numbers or 3 rows of 3");
      }
      for (int c = 0; c < 3; ++c) {
        if (!J[r][c].is_number()) throw SchemaError("field 'J' has a non-number");
        s.J(r, c) = J[r][c].get<double>();
      }
    }
  } else {
    throw SchemaError("field 'J' must be 3 numbers or 3 rows of 3");
  }
  return s;
}

json load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open config");
  try {
    json j = json::parse(in, nullptr, true, true);
    resolve_paths(j, std::filesystem::path(path).parent_path());
    return j;
  } catch (const json::parse_error &e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace cli
}  // namespace weylsteer
