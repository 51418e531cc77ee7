#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace {

struct RunOutput {
  std::string text;
  int exit_code = -1;
};

std::string binary() {
  const char* bin = std::getenv("RIDGECHEV_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

RunOutput run(const std::string& args) {
  const std::string cmd = binary() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunOutput out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.text.append(buf, n);
  const int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  out.exit_code = WEXITSTATUS(status);
  return out;
}

void write_file(const std::string& name, const std::string& content) {
  std::ofstream f(name, std::ios::binary);
  f << content;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string::npos) pos = text.size();
    if (pos > start) lines.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return lines;
}

const char* square_csv =
    "x1,x2,f\n"
    "0,0,0\n"
    "0,1,1\n"
    "1,0,1\n"
    "1,1,0\n";

} // namespace

TEST_CASE("solve on the worked square emits the full certified report") {
  write_file("cli_square.csv", square_csv);
  const RunOutput out = run("solve cli_square.csv --a1 1,0 --a2 0,1");
  CHECK(out.exit_code == 0);
  const auto j = nlohmann::json::parse(out.text);
  CHECK(j["error"] == 0.5);
  CHECK(j["certificate"]["verified"] == true);
  CHECK(j["lower_bound"]["bound"] == 0.5);
  CHECK(j["gap"] == 0.0);

  const RunOutput again = run("solve cli_square.csv --a1 1,0 --a2 0,1");
  CHECK(out.text == again.text);
}

TEST_CASE("json instances solve identically to their csv form") {
  write_file("cli_square.json",
             R"({"points": [[0,0],[0,1],[1,0],[1,1]], "values": [0,1,1,0], "a1": [1,0], "a2": [0,1]})");
  write_file("cli_square.csv", square_csv);
  const RunOutput csv = run("solve cli_square.csv --a1 1,0 --a2 0,1");
  const RunOutput json = run("solve cli_square.json");
  CHECK(csv.exit_code == 0);
  CHECK(json.exit_code == 0);
  const auto a = nlohmann::json::parse(csv.text);
  const auto b = nlohmann::json::parse(json.text);
  CHECK(a["error"] == b["error"]);
  CHECK(a["g0"] == b["g0"]);
  CHECK(a["certificate"] == b["certificate"]);
}

TEST_CASE("a solve report feeds certify and verify back through files") {
  write_file("cli_square.csv", square_csv);
  const RunOutput solved = run("solve cli_square.csv --a1 1,0 --a2 0,1");
  REQUIRE(solved.exit_code == 0);
  write_file("cli_report.json", solved.text);

  const RunOutput certified = run("certify cli_square.csv --a1 1,0 --a2 0,1 --g0 cli_report.json");
  CHECK(certified.exit_code == 0);
  const auto jc = nlohmann::json::parse(certified.text);
  CHECK(jc["error"] == nlohmann::json::parse(solved.text)["error"]);
  CHECK(jc["certificate"]["verified"] == true);

  const RunOutput verified = run(
      "verify cli_square.csv --a1 1,0 --a2 0,1 --g0 cli_report.json --certificate cli_report.json");
  CHECK(verified.exit_code == 0);
  CHECK(nlohmann::json::parse(verified.text)["verify"]["ok"] == true);
}

TEST_CASE("a tampered certificate fails verification with exit code 3") {
  write_file("cli_shadow.csv",
             "x1,x2,x3,f\n"
             "0,0,0,0\n"
             "0,1,0,1\n"
             "1,0,0,1\n"
             "1,1,0,0\n"
             "1,1,7,0.3\n");
  write_file("cli_g0.json", R"({"u": [0.5, 0.5], "v": [0, 0]})");
  write_file("cli_cert_good.json",
             R"({"path": {"start_type": 2, "indices": [0,2,3,1]}, "deviation": 0.5, "sign_pattern": -1})");
  write_file("cli_cert_bad.json",
             R"({"path": {"start_type": 2, "indices": [0,2,4,1]}, "deviation": 0.5, "sign_pattern": -1})");

  const std::string base = "verify cli_shadow.csv --a1 1,0,0 --a2 0,1,0 --g0 cli_g0.json";
  const RunOutput good = run(base + " --certificate cli_cert_good.json");
  CHECK(good.exit_code == 0);

  const RunOutput bad = run(base + " --certificate cli_cert_bad.json");
  CHECK(bad.exit_code == 3);
  const auto j = nlohmann::json::parse(bad.text);
  CHECK(j["verify"]["ok"] == false);
  CHECK(j["verify"]["reason"].get<std::string>().find("alternation violated") != std::string::npos);
}

TEST_CASE("input failures produce structured error json with exit code 2") {
  const RunOutput missing = run("solve cli_no_such_file.csv --a1 1,0 --a2 0,1");
  CHECK(missing.exit_code == 2);
  const auto j = nlohmann::json::parse(missing.text);
  CHECK(j["error"]["type"] == "input_error");

  const RunOutput badflag = run("solve cli_square.csv --no-such-flag");
  CHECK(badflag.exit_code == 2);
  CHECK(nlohmann::json::parse(badflag.text)["error"]["type"] == "input_error");

  write_file("cli_nan.csv", "x1,x2,f\n0,0,0\n0,1,NaN\n");
  const RunOutput nan = run("solve cli_nan.csv --a1 1,0 --a2 0,1");
  CHECK(nan.exit_code == 2);
}

TEST_CASE("glob mode emits one sorted jsonl line per file and the worst exit code") {
  write_file("cli_batch_a.csv", square_csv);
  write_file("cli_batch_b.csv", "x1,x2,f\n0,0,zero\n");
  const RunOutput out = run("solve 'cli_batch_*.csv' --a1 1,0 --a2 0,1 --glob");
  CHECK(out.exit_code == 2);
  const auto lines = lines_of(out.text);
  REQUIRE(lines.size() == 2);
  const auto first = nlohmann::json::parse(lines[0]);
  const auto second = nlohmann::json::parse(lines[1]);
  CHECK(first["file"] == "cli_batch_a.csv");
  CHECK(first["report"]["error"] == 0.5);
  CHECK(second["file"] == "cli_batch_b.csv");
  CHECK(second["report"]["error"]["type"] == "input_error");

  const RunOutput none = run("solve 'cli_zzz_*.csv' --a1 1,0 --a2 0,1 --glob");
  CHECK(none.exit_code == 2);
}

TEST_CASE("bound alone reports zero for representable data") {
  write_file("cli_ridge.csv", "x1,x2,f\n0,0,0\n0,1,1\n1,0,1\n1,1,2\n");
  const RunOutput out = run("bound cli_ridge.csv --a1 1,0 --a2 0,1");
  CHECK(out.exit_code == 0);
  const auto j = nlohmann::json::parse(out.text);
  CHECK(j["lower_bound"]["bound"] == 0.0);
  CHECK(j["lower_bound"]["path"].is_null());
}
