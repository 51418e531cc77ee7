#include <glob.h>

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ridgechev/instance.hpp"
#include "ridgechev/report.hpp"

namespace {

using namespace ridgechev;

struct Flags {
  std::string input;
  std::string format;
  std::string a1;
  std::string a2;
  std::string g0_path;
  std::string certificate_path;
  std::optional<double> tau;
  std::optional<double> eps_ext;
  std::optional<double> tol_bound;
  int max_sweeps = 2000;
  bool oracle = false;
  bool use_glob = false;
};

RunOptions options_from(const Flags& f) {
  RunOptions opts;
  opts.oracle = f.oracle;
  opts.max_sweeps = f.max_sweeps;
  opts.tau = f.tau;
  opts.eps_ext = f.eps_ext;
  opts.tol_bound = f.tol_bound;
  return opts;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("input", f.input, "instance file, CSV or JSON")->required();
  cmd->add_option("--format", f.format, "input format: csv or json (default: file extension)");
  cmd->add_option("--a1", f.a1, "direction 1 as comma-separated reals (required for CSV)");
  cmd->add_option("--a2", f.a2, "direction 2 as comma-separated reals (required for CSV)");
  cmd->add_option("--tau", f.tau, "projection clustering tolerance (default: 1e-9 * spread)");
}

RunResult dispatch(const std::string& command, const Flags& f, const std::string& path) {
  const RunOptions opts = options_from(f);
  if (command == "solve") return run_solve(ingest(path, f.format, f.a1, f.a2), opts);
  if (command == "bound") return run_bound(ingest(path, f.format, f.a1, f.a2), opts);
  if (command == "certify")
    return run_certify(ingest(path, f.format, f.a1, f.a2), load_g0(f.g0_path), opts);
  return run_verify(ingest(path, f.format, f.a1, f.a2), load_g0(f.g0_path),
                    load_certificate(f.certificate_path), opts);
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = glob(pattern.c_str(), 0, nullptr, &g);
  if (rc == GLOB_NOMATCH) {
    globfree(&g);
    throw input_error("no files match '" + pattern + "'");
  }
  if (rc != 0) {
    globfree(&g);
    throw internal_error("glob failed on '" + pattern + "'");
  }
  std::vector<std::string> paths(g.gl_pathv, g.gl_pathv + g.gl_pathc);
  globfree(&g);
  std::sort(paths.begin(), paths.end());
  return paths;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const input_error*>(&e)) return 2;
  if (dynamic_cast<const verification_error*>(&e)) return 3;
  return 4;
}

std::string type_for(const std::exception& e) {
  if (dynamic_cast<const input_error*>(&e)) return "input_error";
  if (dynamic_cast<const verification_error*>(&e)) return "verification_error";
  return "internal_error";
}

// One JSONL line per matched file; failures become error reports on their
// line and the process exit code is the worst per-file code.
int run_batch(const std::string& command, const Flags& f) {
  if (command != "solve" && command != "bound")
    throw input_error("--glob supports solve and bound only");
  int worst = 0;
  for (const auto& path : expand_glob(f.input)) {
    Json line = Json::object();
    line.set("file", Json::string(path));
    try {
      RunResult r = dispatch(command, f, path);
      line.set("report", std::move(r.report));
      worst = std::max(worst, r.exit_code);
    } catch (const std::exception& e) {
      line.set("report", error_report(command, type_for(e), e.what()));
      worst = std::max(worst, exit_code_for(e));
    }
    std::cout << line.dump() << "\n";
  }
  return worst;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"best uniform approximation by sums of two fixed-direction ridge functions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ridgechev::tool_version));

  Flags f;
  CLI::App* solve = app.add_subcommand("solve", "solve the minimax problem and certify the result");
  add_common(solve, f);
  solve->add_option("--eps-ext", f.eps_ext, "extremal-point tolerance (default: 1e-7 * max(1, error))");
  solve->add_option("--tol-bound", f.tol_bound, "bound search tolerance (default: 1e-9 * (1 + spread))");
  solve->add_option("--max-sweeps", f.max_sweeps, "alternating-descent sweep cap");
  solve->add_flag("--oracle", f.oracle, "cross-check against the brute-force oracle (small instances)");
  solve->add_flag("--glob", f.use_glob, "treat input as a glob pattern; one JSONL line per file");

  CLI::App* certify = app.add_subcommand("certify", "find a certificate for user-supplied tables");
  add_common(certify, f);
  certify->add_option("--g0", f.g0_path, "JSON file with tables {\"u\": [...], \"v\": [...]}")
      ->required();
  certify->add_option("--eps-ext", f.eps_ext, "extremal-point tolerance");

  CLI::App* bound = app.add_subcommand("bound", "compute the closed-path lower bound only");
  add_common(bound, f);
  bound->add_option("--tol-bound", f.tol_bound, "bound search tolerance");
  bound->add_flag("--glob", f.use_glob, "treat input as a glob pattern; one JSONL line per file");

  CLI::App* verify = app.add_subcommand("verify", "check a user-supplied certificate");
  add_common(verify, f);
  verify->add_option("--g0", f.g0_path, "JSON file with tables {\"u\": [...], \"v\": [...]}")
      ->required();
  verify->add_option("--certificate", f.certificate_path, "certificate JSON file")->required();
  verify->add_option("--eps-ext", f.eps_ext, "extremal-point tolerance");

  std::string command = "cli";
  try {
    app.parse(argc, argv);
    command = app.get_subcommands().front()->get_name();
    if (f.use_glob) return run_batch(command, f);
    RunResult r = dispatch(command, f, f.input);
    std::cout << r.report.dump() << "\n";
    return r.exit_code;
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help() << "\n";
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << ridgechev::tool_version << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();
    std::cout << ridgechev::error_json(command, "input_error", e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << ridgechev::error_json(command, type_for(e), e.what()) << "\n";
    return exit_code_for(e);
  }
}
