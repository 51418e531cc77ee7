#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "ridgechev/certification.hpp"
#include "ridgechev/errors.hpp"
#include "ridgechev/geometry.hpp"
#include "ridgechev/instance.hpp"
#include "ridgechev/json_writer.hpp"
#include "ridgechev/ridge_space.hpp"
#include "ridgechev/solver.hpp"
#include "ridgechev/version.hpp"

namespace ridgechev {

struct RunOptions {
  bool oracle = false;
  int max_sweeps = 2000;
  std::optional<double> tau;
  std::optional<double> eps_ext;
  std::optional<double> tol_bound;
};

struct RunResult {
  Json report = Json::null();
  int exit_code = 0;
};

namespace detail {

inline Json path_json(const Path& q) {
  Json j = Json::object();
  j.set("start_type", Json::integer(q.start_type));
  j.set("indices", Json::integer_array(q.indices));
  return j;
}

inline Json certificate_json(const Certificate& c, bool verified) {
  Json j = Json::object();
  j.set("path", path_json(c.path));
  j.set("deviation", Json::number(c.deviation));
  j.set("sign_pattern", Json::integer(c.sign_pattern));
  j.set("verified", Json::boolean(verified));
  return j;
}

inline Json verify_json(const VerifyReport& v) {
  Json j = Json::object();
  j.set("ok", Json::boolean(v.ok));
  j.set("marginal", Json::boolean(v.marginal));
  j.set("reason", Json::string(v.reason));
  j.set("lhs", Json::number(v.lhs));
  j.set("rhs", Json::number(v.rhs));
  return j;
}

inline Json g0_json(const RidgeSum& g) {
  Json j = Json::object();
  j.set("u", Json::number_array(g.u));
  j.set("v", Json::number_array(g.v));
  return j;
}

inline Json lower_bound_json(const LowerBoundResult& lb) {
  Json j = Json::object();
  j.set("bound", Json::number(lb.bound));
  j.set("path", lb.best_path.indices.empty() ? Json::null() : path_json(lb.best_path));
  j.set("iterations", Json::integer(lb.iterations));
  return j;
}

inline Json instance_json(const PointSet& ps, const LevelStructure& L, bool parallel) {
  Json j = Json::object();
  j.set("points", Json::integer(static_cast<std::int64_t>(ps.size())));
  j.set("dimension", Json::integer(static_cast<std::int64_t>(ps.dimension)));
  j.set("levels1", Json::integer(static_cast<std::int64_t>(L.levels1.size())));
  j.set("levels2", Json::integer(static_cast<std::int64_t>(L.levels2.size())));
  j.set("parallel_directions", Json::boolean(parallel));
  j.set("width_warning_1", Json::boolean(L.width_warning1));
  j.set("width_warning_2", Json::boolean(L.width_warning2));
  return j;
}

inline Json report_head(const char* command, const PointSet& ps, const LevelStructure& L,
                        bool parallel) {
  Json j = Json::object();
  j.set("tool", Json::string(tool_name));
  j.set("version", Json::string(tool_version));
  j.set("command", Json::string(command));
  j.set("instance", instance_json(ps, L, parallel));
  return j;
}

inline double value_spread(const PointSet& ps) {
  const auto [mn, mx] = std::minmax_element(ps.values.begin(), ps.values.end());
  return *mx - *mn;
}

// The tolerance echo must reproduce the value the search actually used, so
// this mirrors the default expression in max_mean_alternating_cycle.
inline double tol_bound_used(const PointSet& ps, const std::optional<double>& flag) {
  return flag ? *flag : 1e-9 * (1.0 + value_spread(ps));
}

inline double eps_ext_used(const InstanceFile& inst, const RunOptions& opts, double norm) {
  if (opts.eps_ext) return *opts.eps_ext;
  if (inst.eps_ext) return *inst.eps_ext;
  return default_eps_ext(norm);
}

inline LevelStructure levels_for(const InstanceFile& inst, const RunOptions& opts) {
  return build_levels(inst.ps, inst.dirs, opts.tau ? opts.tau : inst.tau);
}

} // namespace detail

// Full pipeline: LP solve, dual-derived certificate, verification, closed-path
// lower bound, duality-gap check, alternating-descent diagnostics, and an
// optional brute-force cross-check.
inline RunResult run_solve(const InstanceFile& inst, const RunOptions& opts = {}) {
  const PointSet& ps = inst.ps;
  const LevelStructure L = detail::levels_for(inst, opts);
  const bool parallel = detect_parallel(inst.dirs);

  SolveOptions sopts;
  sopts.collapse_direction2 = parallel;
  const MinimaxSolution sol = solve_minimax(ps, L, sopts);
  const Residual res = residual(ps, sol.g0, L);
  const double eps = detail::eps_ext_used(inst, opts, sol.error);

  Json jcert = Json::null();
  if (!sol.dual.interpolation) {
    const Certificate cert = certificate_from_dual(sol.dual, res, L, eps);
    const VerifyReport vrep = verify_certificate(cert, res, L, eps);
    if (!vrep.ok)
      throw internal_error("dual-derived certificate failed verification: " + vrep.reason);
    jcert = detail::certificate_json(cert, true);
  }

  const LowerBoundResult lb = max_mean_alternating_cycle(ps, L, opts.tol_bound);
  const double gap = sol.error - lb.bound;
  if (gap < -1e-9)
    throw internal_error("lower bound exceeds the optimal error: gap = " + std::to_string(gap));

  const AlternatingResult alt = alternating_solver(ps, L, opts.max_sweeps);

  Json j = detail::report_head("solve", ps, L, parallel);
  Json jtol = Json::object();
  jtol.set("tau1", Json::number(L.tau1));
  jtol.set("tau2", Json::number(L.tau2));
  jtol.set("eps_ext", Json::number(eps));
  jtol.set("tol_bound", Json::number(detail::tol_bound_used(ps, opts.tol_bound)));
  j.set("tolerances", jtol);
  j.set("error", Json::number(sol.error));
  j.set("g0", detail::g0_json(sol.g0));
  Json jdual = Json::object();
  jdual.set("interpolation", Json::boolean(sol.dual.interpolation));
  jdual.set("weights", Json::number_array(sol.dual.weights));
  j.set("dual", jdual);
  j.set("certificate", std::move(jcert));
  j.set("lower_bound", detail::lower_bound_json(lb));
  j.set("gap", Json::number(gap));
  Json jdiag = Json::object();
  jdiag.set("pivots", Json::integer(sol.pivots));
  jdiag.set("sweeps", Json::integer(alt.sweeps));
  jdiag.set("alternating_error", Json::number(alt.error));
  j.set("diagnostics", jdiag);
  if (opts.oracle) {
    const double ov = brute_force_oracle(ps, L);
    Json joracle = Json::object();
    joracle.set("error", Json::number(ov));
    joracle.set("difference", Json::number(sol.error - ov));
    j.set("oracle", joracle);
  } else {
    j.set("oracle", Json::null());
  }
  return RunResult{std::move(j), 0};
}

// Certifies user-supplied tables: computes their residual and searches the
// extremal state graph for a closed path alternating at the deviation.
inline RunResult run_certify(const InstanceFile& inst, const RidgeSum& g0,
                             const RunOptions& opts = {}) {
  const PointSet& ps = inst.ps;
  const LevelStructure L = detail::levels_for(inst, opts);
  const bool parallel = detect_parallel(inst.dirs);
  const Residual res = residual(ps, g0, L);
  const double eps = detail::eps_ext_used(inst, opts, res.norm);

  const auto cert = find_extremal_closed_path(res, L, eps);
  if (!cert)
    throw verification_error("no closed extremal path exists for the supplied tables");
  const VerifyReport vrep = verify_certificate(*cert, res, L, eps);
  if (!vrep.ok)
    throw internal_error("extremal-path certificate failed verification: " + vrep.reason);

  Json j = detail::report_head("certify", ps, L, parallel);
  Json jtol = Json::object();
  jtol.set("tau1", Json::number(L.tau1));
  jtol.set("tau2", Json::number(L.tau2));
  jtol.set("eps_ext", Json::number(eps));
  j.set("tolerances", jtol);
  j.set("error", Json::number(res.norm));
  j.set("g0", detail::g0_json(g0));
  j.set("certificate", detail::certificate_json(*cert, true));
  j.set("verify", detail::verify_json(vrep));
  return RunResult{std::move(j), 0};
}

// Lower bound only: the max-mean alternating-cycle search.
inline RunResult run_bound(const InstanceFile& inst, const RunOptions& opts = {}) {
  const PointSet& ps = inst.ps;
  const LevelStructure L = detail::levels_for(inst, opts);
  const bool parallel = detect_parallel(inst.dirs);
  const LowerBoundResult lb = max_mean_alternating_cycle(ps, L, opts.tol_bound);

  Json j = detail::report_head("bound", ps, L, parallel);
  Json jtol = Json::object();
  jtol.set("tau1", Json::number(L.tau1));
  jtol.set("tau2", Json::number(L.tau2));
  jtol.set("tol_bound", Json::number(detail::tol_bound_used(ps, opts.tol_bound)));
  j.set("tolerances", jtol);
  j.set("lower_bound", detail::lower_bound_json(lb));
  return RunResult{std::move(j), 0};
}

// Checks a user-supplied certificate against the residual of user-supplied
// tables. A failed check still produces a full report, with exit code 3.
inline RunResult run_verify(const InstanceFile& inst, const RidgeSum& g0, const Certificate& cert,
                            const RunOptions& opts = {}) {
  const PointSet& ps = inst.ps;
  const LevelStructure L = detail::levels_for(inst, opts);
  const bool parallel = detect_parallel(inst.dirs);
  const Residual res = residual(ps, g0, L);
  const double eps = detail::eps_ext_used(inst, opts, res.norm);
  const VerifyReport vrep = verify_certificate(cert, res, L, eps);

  Json j = detail::report_head("verify", ps, L, parallel);
  Json jtol = Json::object();
  jtol.set("tau1", Json::number(L.tau1));
  jtol.set("tau2", Json::number(L.tau2));
  jtol.set("eps_ext", Json::number(eps));
  j.set("tolerances", jtol);
  j.set("error", Json::number(res.norm));
  j.set("g0", detail::g0_json(g0));
  j.set("certificate", detail::certificate_json(cert, vrep.ok));
  j.set("verify", detail::verify_json(vrep));
  return RunResult{std::move(j), vrep.ok ? 0 : 3};
}

// Structured error payload; every failure path of the CLI funnels through
// this so scripts always get parseable output.
inline Json error_report(const std::string& command, const std::string& type,
                         const std::string& message) {
  Json j = Json::object();
  j.set("tool", Json::string(tool_name));
  j.set("version", Json::string(tool_version));
  j.set("command", Json::string(command));
  Json e = Json::object();
  e.set("type", Json::string(type));
  e.set("message", Json::string(message));
  j.set("error", std::move(e));
  return j;
}

inline std::string error_json(const std::string& command, const std::string& type,
                              const std::string& message) {
  return error_report(command, type, message).dump();
}

} // namespace ridgechev
