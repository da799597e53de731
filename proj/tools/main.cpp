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

#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_io.hpp"
#include "weylsteer/bangbang.hpp"
#include "weylsteer/bloch.hpp"
#include "weylsteer/pulse1q.hpp"
#include "weylsteer/qmath.hpp"
#include "weylsteer/steer2q.hpp"
#include "weylsteer/weyl.hpp"

namespace weylsteer {
namespace cli {
namespace {

constexpr double kThreshold1Q = 1 - 1e-9;
constexpr double kThresholdSchedule = 1 - 1e-4;

struct Context {
  std::string out;
  bool dry_run = false;
};

// invariants and coordinates below this magnitude print as 0
double clean(double x) { return std::abs(x) < 1e-12 ? 0. : round12(x); }

json clean_json(const Eigen::Vector3d &v) {
  return json::array({clean(v(0)), clean(v(1)), clean(v(2))});
}

json matrix_json(const MatX &M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(to_json(M(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json euler_json(const bloch::EulerZXZ &e) {
  return {{"theta", round12(e.theta)}, {"phi", round12(e.phi)},
          {"gamma", round12(e.gamma)}};
}

void emit(const Context &ctx, const std::string &text) {
  if (ctx.out.empty()) {
    std::cout << text;
  } else {
    write_atomic(ctx.out, text);
  }
}

void emit_json(const Context &ctx, const json &j) { emit(ctx, j.dump(2) + "\n"); }

void verify(const std::string &what, double fidelity, double threshold) {
  if (!(fidelity >= threshold)) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": fidelity " << fidelity << " below threshold " << threshold;
    throw VerificationFailure(os.str());
  }
}

const json &field(const json &cfg, const std::string &key) {
  if (!cfg.contains(key)) throw SchemaError("missing field '" + key + "'");
  return cfg.at(key);
}

std::uint64_t seed_from(const json &cfg, std::uint64_t fallback) {
  std::uint64_t seed = fallback;
  if (cfg.contains("seed")) {
    if (!cfg.at("seed").is_number_unsigned()) {
      throw SchemaError("field 'seed' must be a nonnegative integer");
    }
    seed = cfg.at("seed").get<std::uint64_t>();
  }
  if (const char *env = std::getenv("WEYLSTEER_SEED")) {
    try {
      std::size_t pos = 0;
      seed = std::stoull(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception &) {
      throw SchemaError(std::string("WEYLSTEER_SEED is not an integer: ") + env);
    }
  }
  return seed;
}

json pulse_report(const pulse1q::PulseProgram1Q &prog, const Mat2 &target) {
  json seg = json::array(), dur = json::array();
  for (const auto &s : prog.segments) {
    const bool driven = s.kind == pulse1q::PulseSegment::Kind::Driven;
    seg.push_back({{"kind", driven ? "driven" : "free_z"},
                   {"duration", round12(s.duration)}});
    dur.push_back(round12(s.duration));
  }
  const char *frame = prog.frame == pulse1q::Frame::Lab        ? "lab"
                      : prog.frame == pulse1q::Frame::Rotating ? "rotating"
                                                               : "tilted";
  const Mat2 U = pulse1q::program_propagator(prog);
  json r;
  r["segments"] = seg;
  r["durations"] = dur;
  r["parameters"] = {{"frame", frame},
                     {"omega0", round12(prog.field.omega0)},
                     {"A", round12(prog.field.A)},
                     {"omega", round12(prog.field.omega)},
                     {"delta", round12(prog.field.delta)},
                     {"zeta", round12(prog.field.zeta)},
                     {"m1", prog.m1},
                     {"m2", prog.m2},
                     {"m3", prog.m3},
                     {"total_time", round12(prog.total_time())}};
  r["predicted_endpoint"] = euler_json(bloch::euler_zxz(target));
  r["simulated_endpoint"] = euler_json(bloch::euler_zxz(U));
  r["fidelity"] = round12(qmath::gate_fidelity(U, target));
  return r;
}

pulse1q::PulseProgram1Q design(const std::string &frame, const Mat2 &target,
                               double omega0, double A, double zeta) {
  const auto e = bloch::euler_zxz(target);
  if (frame == "perpendicular") return pulse1q::design_resonant_perpendicular(e, omega0, A);
  if (frame == "rotating") return pulse1q::design_resonant_rotframe(e, omega0, A);
  if (frame == "tilted") return pulse1q::design_tilted(e, omega0, A, zeta);
  throw SchemaError("field 'frame' must be perpendicular, rotating or tilted");
}

int cmd_design1q(const json &cfg, const Context &ctx) {
  const Mat2 target = target_1q(field(cfg, "target"));
  const json &f = field(cfg, "field");
  const double omega0 = get_number(f, "omega0");
  const double A = get_number(f, "A");
  const double zeta = get_number(f, "zeta", PI / 2);
  const std::string frame =
      cfg.contains("frame") ? get_string(cfg, "frame") : std::string("perpendicular");
  if (frame != "perpendicular" && frame != "rotating" && frame != "tilted") {
    throw SchemaError("field 'frame' must be perpendicular, rotating or tilted");
  }
  if (ctx.dry_run) return 0;
  const auto prog = design(frame, target, omega0, A, zeta);
  const json r = pulse_report(prog, target);
  verify("design1q", r["fidelity"].get<double>(), kThreshold1Q);
  emit_json(ctx, r);
  return 0;
}

int cmd_schedule2local(const json &cfg, const Context &ctx) {
  const json &targets = field(cfg, "targets");
  if (!targets.is_array() || targets.size() != 2) {
    throw SchemaError("field 'targets' must hold two single-qubit targets");
  }
  const Mat2 T1 = target_1q(targets[0]), T2 = target_1q(targets[1]);
  const json &w = field(cfg, "omega0");
  if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
    throw SchemaError("field 'omega0' must be two numbers");
  }
  const double A_max = get_number(cfg, "A_max");
  pulse1q::SimultaneousOptions opts;
  opts.seed = seed_from(cfg, opts.seed);
  if (cfg.contains("restarts")) opts.restarts = static_cast<unsigned>(get_number(cfg, "restarts"));
  if (cfg.contains("budget")) opts.budget = static_cast<unsigned>(get_number(cfg, "budget"));
  opts.max_detuning = get_number(cfg, "max_detuning", opts.max_detuning);
  if (ctx.dry_run) return 0;
  const auto s = pulse1q::schedule_simultaneous(
      bloch::euler_zxz(T1), bloch::euler_zxz(T2), w[0].get<double>(),
      w[1].get<double>(), A_max, opts);
  json q1 = pulse_report(s.qubit1, T1);
  json q2 = pulse_report(s.qubit2, T2);
  // the second program is detuned; its fidelity comes from the scheduler
  q2["fidelity"] = round12(s.fidelity2);
  json r;
  r["segments"] = {q1["segments"], q2["segments"]};
  r["durations"] = {q1["durations"], q2["durations"]};
  r["parameters"] = {{"qubit1", q1["parameters"]},
                     {"qubit2", q2["parameters"]},
                     {"seed", opts.seed},
                     {"evaluations", s.evaluations},
                     {"escalations", s.escalations},
                     {"total_time", round12(s.total_time)}};
  r["predicted_endpoint"] = {q1["predicted_endpoint"], q2["predicted_endpoint"]};
  r["simulated_endpoint"] = {q1["simulated_endpoint"], q2["simulated_endpoint"]};
  r["fidelity"] = round12(std::min(s.fidelity1, s.fidelity2));
  verify("schedule2local", std::min(s.fidelity1, s.fidelity2), kThresholdSchedule);
  emit_json(ctx, r);
  return 0;
}

int cmd_bangbang(const json &cfg, const Context &ctx) {
  const json &h = field(cfg, "hamiltonians");
  const bangbang::HamiltonianPair pair{hamiltonian_1q(field(h, "H1")),
                                       hamiltonian_1q(field(h, "H2"))};
  const Mat2 target = target_1q(field(cfg, "target"));
  if (ctx.dry_run) return 0;
  const auto sp = bangbang::standardize_pair(pair);
  const auto seq = bangbang::synthesize_bangbang(target, pair);
  const Mat2 U = bangbang::compose(seq, pair);
  json seg = json::array(), dur = json::array();
  for (std::size_t i = 0; i < seq.durations.size(); ++i) {
    seg.push_back({{"hamiltonian", i % 2 ? "H2" : "H1"},
                   {"duration", round12(seq.durations[i])}});
    dur.push_back(round12(seq.durations[i]));
  }
  json r;
  r["segments"] = seg;
  r["durations"] = dur;
  r["parameters"] = {{"a", round12(sp.a)},
                     {"b", round12(sp.b)},
                     {"alpha", round12(sp.alpha)},
                     {"max_switches", bangbang::max_switches(sp.alpha)},
                     {"total_time", round12(seq.total_time())}};
  r["predicted_endpoint"] = euler_json(bloch::euler_zxz(target));
  r["simulated_endpoint"] = euler_json(bloch::euler_zxz(U));
  const double fid = qmath::gate_fidelity(U, target);
  r["fidelity"] = round12(fid);
  verify("bangbang", fid, kThreshold1Q);
  emit_json(ctx, r);
  return 0;
}

int cmd_invariants(const json &cfg, const Context &ctx) {
  const Mat4 U = target_2q(field(cfg, "target"));
  if (ctx.dry_run) return 0;
  const auto inv = weyl::invariants_from_unitary(U);
  const json m = clean_json(inv.makhlin);
  std::cout << fmt12(m[0].get<double>()) << ", " << fmt12(m[1].get<double>())
            << ", " << fmt12(m[2].get<double>()) << "\n";
  if (!ctx.out.empty()) {
    emit_json(ctx, {{"makhlin", m}, {"chamber", clean_json(inv.chamber)}});
  }
  return 0;
}

int cmd_weyl(const json &cfg, const Context &ctx) {
  const Mat4 U = target_2q(field(cfg, "target"));
  if (ctx.dry_run) return 0;
  const json c = clean_json(weyl::weyl_coordinates(U).vec());
  std::cout << fmt12(c[0].get<double>()) << ", " << fmt12(c[1].get<double>())
            << ", " << fmt12(c[2].get<double>()) << "\n";
  if (!ctx.out.empty()) emit_json(ctx, {{"weyl", c}});
  return 0;
}

int cmd_equiv(const json &cfg, const Context &ctx) {
  const Mat4 A = target_2q(field(cfg, "a"));
  const Mat4 B = target_2q(field(cfg, "b"));
  const double eps = get_number(cfg, "eps", tol::physics);
  if (ctx.dry_run) return 0;
  const bool eq = weyl::is_locally_equivalent(A, B, eps);
  std::cout << (eq ? "true" : "false") << "\n";
  if (!ctx.out.empty()) {
    emit_json(ctx, {{"equivalent", eq},
                    {"a", clean_json(weyl::weyl_coordinates(A).vec())},
                    {"b", clean_json(weyl::weyl_coordinates(B).vec())}});
  }
  if (!eq) {
    std::cerr << "equiv: invariant triples differ by more than " << eps << "\n";
    return 3;
  }
  return 0;
}

steer2q::SteeringPlan build_plan(const json &cfg, bool dry_run, bool *built) {
  const std::string s = get_string(cfg, "strategy");
  *built = false;
  auto finish = [&](auto &&make) {
    if (dry_run) return steer2q::SteeringPlan{};
    *built = true;
    return make();
  };
  if (s == "isotropic_equal") {
    const auto g = get_vec3(cfg, "g");
    const double J = get_number(cfg, "J");
    return finish([&] { return steer2q::plan_isotropic_equal(g, J); });
  }
  if (s == "isotropic_ratio") {
    const auto g2 = get_vec3(cfg, "g2");
    const double J = get_number(cfg, "J");
    const double m = get_number(cfg, "m");
    if (m != std::floor(m)) throw SchemaError("field 'm' must be an integer");
    std::string root = cfg.contains("root") ? get_string(cfg, "root") : "below";
    if (root != "below" && root != "above") {
      throw SchemaError("field 'root' must be below or above");
    }
    return finish([&] {
      return steer2q::plan_isotropic_ratio(
          g2, J, static_cast<int>(m),
          root == "below" ? steer2q::LambdaRoot::Below : steer2q::LambdaRoot::Above);
    });
  }
  if (s == "yy") {
    const std::string gate = get_string(cfg, "gate");
    if (gate != "B" && gate != "CNOT") throw SchemaError("field 'gate' must be B or CNOT");
    const double J = get_number(cfg, "J", 1.);
    return finish([&] {
      return steer2q::solve_yy_gate(
          gate == "B" ? steer2q::YYTarget::B : steer2q::YYTarget::CNOT, J);
    });
  }
  if (s == "weak_cnot") {
    const auto Jd = get_vec3(cfg, "J");
    const auto d1 = get_vec3(cfg, "d1");
    const auto d2 = get_vec3(cfg, "d2");
    const double m = get_number(cfg, "m");
    if (m != std::floor(m)) throw SchemaError("field 'm' must be an integer");
    return finish(
        [&] { return steer2q::plan_weak_cnot(Jd, d1, d2, static_cast<int>(m)); });
  }
  if (s == "polyline") {
    const auto c = get_vec3(cfg, "target");
    const auto Jd = get_vec3(cfg, "J");
    return finish([&] {
      return steer2q::plan_nonlocal_polyline(weyl::WeylPoint::from_vec(c), Jd);
    });
  }
  throw SchemaError("field 'strategy' must be isotropic_equal, isotropic_ratio, "
                    "yy, weak_cnot or polyline");
}

json hamiltonian_json(const steer2q::HamiltonianSpec &H) {
  json J = json::array();
  for (int r = 0; r < 3; ++r) {
    J.push_back({round12(H.J(r, 0)), round12(H.J(r, 1)), round12(H.J(r, 2))});
  }
  return {{"g1", to_json(H.g1)}, {"g2", to_json(H.g2)}, {"J", J}};
}

int cmd_steer2q(const json &cfg, const Context &ctx) {
  bool built = false;
  const auto plan = build_plan(cfg, ctx.dry_run, &built);
  if (!built) return 0;
  json seg = json::array(), dur = json::array();
  for (const auto &s : plan.segments) {
    if (s.kind == steer2q::PlanSegment::Kind::Evolution) {
      seg.push_back({{"kind", "evolution"},
                     {"duration", round12(s.duration)},
                     {"hamiltonian", hamiltonian_json(s.hamiltonian)}});
    } else {
      seg.push_back({{"kind", "local"},
                     {"duration", 0.},
                     {"matrix", matrix_json(s.local)}});
    }
    dur.push_back(round12(s.duration));
  }
  const Mat4 U = steer2q::simulate_plan(plan);
  const auto sim = weyl::weyl_coordinates(U);
  const double residual = steer2q::plan_residual(plan);
  json params = json::object();
  for (const auto &[k, v] : plan.parameters) params[k] = round12(v);
  params["strategy"] = plan.strategy;
  params["sign_convention"] = plan.sign_convention;
  params["coupling_time"] = round12(plan.coupling_time());
  json r;
  r["segments"] = seg;
  r["durations"] = dur;
  r["parameters"] = params;
  r["predicted_endpoint"] = clean_json(plan.predicted_endpoint.vec());
  r["simulated_endpoint"] = clean_json(sim.vec());
  r["target_class"] = clean_json(plan.target_class.vec());
  r["fidelity"] = round12(qmath::gate_fidelity(weyl::canonical_gate(sim),
                                               weyl::canonical_gate(plan.target_class)));
  r["invariant_residual"] = round12(residual);
  r["tolerance"] = round12(plan.tolerance);
  if (!(residual <= plan.tolerance)) {
    std::ostringstream os;
    os.precision(12);
    os << "steer2q: invariant residual " << residual << " exceeds plan tolerance "
       << plan.tolerance;
    throw VerificationFailure(os.str());
  }
  emit_json(ctx, r);
  return 0;
}

std::vector<double> time_grid(const json &cfg, double default_stop) {
  std::vector<double> t;
  if (cfg.contains("times")) {
    const json &a = cfg.at("times");
    if (!a.is_array()) throw SchemaError("field 'times' must be an array");
    for (const auto &x : a) {
      if (!x.is_number()) throw SchemaError("field 'times' must hold numbers");
      t.push_back(x.get<double>());
    }
    return t;
  }
  const json g = cfg.contains("grid") ? cfg.at("grid") : json::object();
  const double start = get_number(g, "start", 0.);
  const double stop = g.contains("stop") ? get_number(g, "stop") : default_stop;
  if (!std::isfinite(stop)) throw SchemaError("missing field 'grid.stop'");
  const double steps = get_number(g, "steps", 200.);
  if (steps < 1 || steps != std::floor(steps) || steps > 1e7) {
    throw SchemaError("field 'grid.steps' must be a positive integer");
  }
  if (!(stop > start)) throw SchemaError("grid.stop must exceed grid.start");
  const auto n = static_cast<long>(steps);
  for (long k = 0; k <= n; ++k) t.push_back(start + (stop - start) * k / n);
  return t;
}

int cmd_traj(const json &cfg, const Context &ctx) {
  steer2q::HamiltonianSpec H;
  int sign = 1;
  double stop = std::numeric_limits<double>::quiet_NaN();
  bool from_plan = false;
  json plan_cfg;
  if (cfg.contains("plan")) {
    plan_cfg = cfg.at("plan");
    bool built = false;
    build_plan(plan_cfg, true, &built);
    from_plan = true;
  } else {
    H = hamiltonian_2q(field(cfg, "hamiltonian"));
    const double s = get_number(cfg, "sign", 1.);
    if (s != 1 && s != -1) throw SchemaError("field 'sign' must be 1 or -1");
    sign = static_cast<int>(s);
  }
  if (!from_plan) time_grid(cfg, 1.);  // schema check only
  if (ctx.dry_run) return 0;
  if (from_plan) {
    bool built = false;
    const auto plan = build_plan(plan_cfg, false, &built);
    const steer2q::PlanSegment *evo = nullptr;
    for (const auto &s : plan.segments) {
      if (s.kind == steer2q::PlanSegment::Kind::Evolution) {
        if (evo) throw SchemaError("traj: plan has more than one evolution segment");
        evo = &s;
      }
    }
    if (!evo) throw SchemaError("traj: plan has no evolution segment");
    H = evo->hamiltonian;
    sign = plan.sign_convention;
    stop = evo->duration;
  }
  const auto grid = time_grid(cfg, stop);
  const auto tr = steer2q::weyl_trajectory(H, grid, sign);
  std::string csv = "t,c1,c2,c3,G1_re,G1_im,G2\n";
  for (const auto &s : tr.samples) {
    const double row[] = {s.t,
                          clean(s.point.c1),
                          clean(s.point.c2),
                          clean(s.point.c3),
                          clean(s.invariants.makhlin(0)),
                          clean(s.invariants.makhlin(1)),
                          clean(s.invariants.makhlin(2))};
    for (int i = 0; i < 7; ++i) {
      csv += (i ? "," : "") + fmt12(row[i]);
    }
    csv += "\n";
  }
  emit(ctx, csv);
  return 0;
}

using Command = int (*)(const json &, const Context &);

Command lookup(const std::string &name) {
  if (name == "design1q") return cmd_design1q;
  if (name == "schedule2local") return cmd_schedule2local;
  if (name == "bangbang") return cmd_bangbang;
  if (name == "invariants") return cmd_invariants;
  if (name == "weyl") return cmd_weyl;
  if (name == "equiv") return cmd_equiv;
  if (name == "traj") return cmd_traj;
  if (name == "steer2q") return cmd_steer2q;
  return nullptr;
}

int run_guarded(const std::function<int()> &body) {
  try {
    return body();
  } catch (const SchemaError &e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception &e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 1;
  } catch (const ContractViolation &e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 1;
  } catch (const SolverFailure &e) {
    std::cerr << "solver failure: " << e.what() << " (residual " << e.residual()
              << ")\n";
    return 2;
  } catch (const VerificationFailure &e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace
}  // namespace cli
}  // namespace weylsteer

int main(int argc, char **argv) {
  using namespace weylsteer::cli;
  CLI::App app{"weylsteer: single- and two-qubit pulse and steering synthesis"};
  app.require_subcommand(0, 1);

  std::string config, out, matrix, gate;
  app.add_option("--config", config, "JSON config whose 'command' field selects the run");
  app.add_option("--out", out, "output path (written atomically)");

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"design1q", "design a resonant single-qubit pulse program"},
      {"schedule2local", "schedule two single-qubit targets in parallel"},
      {"bangbang", "bang-bang switching sequence for a target"},
      {"invariants", "Makhlin invariants of a two-qubit gate"},
      {"weyl", "Weyl chamber coordinates of a two-qubit gate"},
      {"equiv", "test local equivalence of two gates"},
      {"traj", "export a Weyl chamber trajectory as CSV"},
      {"steer2q", "plan a two-qubit steering strategy"},
      {"validate", "check a config without running it"},
  };
  for (const auto &[name, help] : subs) {
    auto *sc = app.add_subcommand(name, help);
    sc->add_option("--config", config, "JSON config")->check(CLI::ExistingFile);
    sc->add_option("--out", out, "output path (written atomically)");
    if (name == "invariants" || name == "weyl") {
      sc->add_option("--matrix", matrix, "matrix file target")->check(CLI::ExistingFile);
      sc->add_option("--gate", gate, "named gate target (CNOT, SWAP, B, identity)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string name;
  if (!app.get_subcommands().empty()) name = app.get_subcommands().front()->get_name();

  return run_guarded([&]() -> int {
    json cfg = json::object();
    if (!config.empty()) cfg = load_config(config);
    if (!cfg.is_object()) throw SchemaError("config must be a JSON object");
    if (!matrix.empty()) cfg["target"] = {{"matrix_file", matrix}};
    if (!gate.empty()) cfg["target"] = gate;

    Context ctx;
    ctx.out = out;
    if (ctx.out.empty() && cfg.contains("output")) {
      const json &o = cfg.at("output");
      ctx.out = o.is_string() ? o.get<std::string>() : get_string(o, "path");
    }

    std::string command = name;
    if (command.empty() || command == "validate") {
      if (name == "validate" && config.empty()) {
        throw SchemaError("validate needs --config");
      }
      if (!cfg.contains("command")) {
        throw SchemaError(name.empty() ? "no subcommand given and config has no 'command'"
                                       : "missing field 'command'");
      }
      const std::string c = get_string(cfg, "command");
      ctx.dry_run = name == "validate";
      command = c;
    } else if (cfg.contains("command") && get_string(cfg, "command") != command) {
      throw SchemaError("config 'command' is '" + get_string(cfg, "command") +
                        "' but subcommand is '" + command + "'");
    }
    const Command cmd = lookup(command);
    if (!cmd) throw SchemaError("unknown command '" + command + "'");
    const int rc = cmd(cfg, ctx);
    if (ctx.dry_run) std::cout << "ok: " << command << "\n";
    return rc;
  });
}
