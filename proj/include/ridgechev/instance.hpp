#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ridgechev/certification.hpp"
#include "ridgechev/errors.hpp"
#include "ridgechev/geometry.hpp"
#include "ridgechev/ridge_space.hpp"

namespace ridgechev {

// A parsed problem: sample set, directions, and any tolerances the file or
// flags carried. Everything downstream works off this.
struct InstanceFile {
  PointSet ps;
  DirectionPair dirs;
  std::optional<double> tau;
  std::optional<double> eps_ext;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string trim(std::string s) {
  const char* ws = " \t\r";
  const auto a = s.find_first_not_of(ws);
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_number(const std::string& field, const std::string& where) {
  const std::string t = trim(field);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc{} || r.ptr != last)
    throw input_error(where + ": cannot parse '" + t + "' as a number");
  if (!std::isfinite(v)) throw input_error(where + ": non-finite value '" + t + "'");
  return v;
}

// Flags like --a1 take "0.5,-1,2".
inline std::vector<double> parse_reals(const std::string& csv, const std::string& flag) {
  if (trim(csv).empty()) throw input_error(flag + " must list comma-separated reals");
  std::vector<double> out;
  for (const auto& f : split(csv, ',')) out.push_back(parse_number(f, flag));
  return out;
}

inline void check_duplicate_rows(const std::vector<Point>& pts,
                                 const std::vector<std::string>& labels) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pts[a].coords < pts[b].coords; });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (pts[order[k - 1]].coords == pts[order[k]].coords) {
      const auto a = std::min(order[k - 1], order[k]);
      const auto b = std::max(order[k - 1], order[k]);
      throw input_error(labels[a] + " and " + labels[b] + " contain the same point");
    }
}

} // namespace detail

// CSV: header "x1,...,xd,f", one point per row; directions come from the
// --a1/--a2 flags. Errors carry 1-based line numbers.
inline InstanceFile ingest_csv(const std::string& path, const std::string& a1_flag,
                               const std::string& a2_flag) {
  const std::string text = detail::read_file(path);
  std::vector<std::string> lines = detail::split(text, '\n');
  while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw input_error(path + ": empty file");

  const auto header = detail::split(lines[0], ',');
  if (header.size() < 2 || detail::trim(header.back()) != "f")
    throw input_error(path + ":1: header must be x1,...,xd,f");
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j)
    if (detail::trim(header[j]) != "x" + std::to_string(j + 1))
      throw input_error(path + ":1: header must be x1,...,xd,f");

  std::vector<Point> pts;
  std::vector<double> values;
  std::vector<std::string> labels;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string where = path + ":" + std::to_string(li + 1);
    const auto fields = detail::split(lines[li], ',');
    if (fields.size() != d + 1)
      throw input_error(where + ": expected " + std::to_string(d + 1) + " fields, got " +
                        std::to_string(fields.size()));
    Point p{std::vector<double>(d)};
    for (std::size_t j = 0; j < d; ++j)
      p.coords[j] = detail::parse_number(fields[j], where + ": field " + std::to_string(j + 1));
    pts.push_back(std::move(p));
    values.push_back(
        detail::parse_number(fields[d], where + ": field " + std::to_string(d + 1)));
    labels.push_back(where);
  }
  if (pts.empty()) throw input_error(path + ": no data rows");
  detail::check_duplicate_rows(pts, labels);

  if (a1_flag.empty() || a2_flag.empty())
    throw input_error("csv input needs both --a1 and --a2");
  auto a1 = detail::parse_reals(a1_flag, "--a1");
  auto a2 = detail::parse_reals(a2_flag, "--a2");
  if (a1.size() != d || a2.size() != d)
    throw input_error("directions have " + std::to_string(a1.size()) + "/" +
                      std::to_string(a2.size()) + " components but the points have dimension " +
                      std::to_string(d));

  InstanceFile inst{PointSet::create(std::move(pts), std::move(values)),
                    DirectionPair::create(std::move(a1), std::move(a2)),
                    std::nullopt,
                    std::nullopt};
  return inst;
}

namespace detail {

inline nlohmann::json parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(path + ": " + e.what());
  }
}

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* name,
                                           const std::string& path) {
  auto it = j.find(name);
  if (it == j.end()) throw input_error(path + ": missing field \"" + std::string(name) + "\"");
  return *it;
}

inline std::vector<double> number_list(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw input_error(where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw input_error(where + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

} // namespace detail

// JSON: {"points": [[...]], "values": [...], "a1": [...], "a2": [...]} with
// optional "tau" and "eps_ext". Flag-provided directions take precedence.
inline InstanceFile ingest_json(const std::string& path, const std::string& a1_flag,
                                const std::string& a2_flag) {
  const nlohmann::json j = detail::parse_json_file(path);
  if (!j.is_object()) throw input_error(path + ": top level must be an object");

  const auto& jpoints = detail::require_field(j, "points", path);
  if (!jpoints.is_array() || jpoints.empty())
    throw input_error(path + ": \"points\" must be a non-empty array");
  std::vector<Point> pts;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < jpoints.size(); ++i) {
    pts.push_back(Point{detail::number_list(
        jpoints[i], path + ": points[" + std::to_string(i) + "]")});
    labels.push_back(path + ": points[" + std::to_string(i) + "]");
  }
  detail::check_duplicate_rows(pts, labels);
  auto values = detail::number_list(detail::require_field(j, "values", path), path + ": values");

  std::vector<double> a1, a2;
  if (!a1_flag.empty())
    a1 = detail::parse_reals(a1_flag, "--a1");
  else
    a1 = detail::number_list(detail::require_field(j, "a1", path), path + ": a1");
  if (!a2_flag.empty())
    a2 = detail::parse_reals(a2_flag, "--a2");
  else
    a2 = detail::number_list(detail::require_field(j, "a2", path), path + ": a2");
  if (a1.size() != pts[0].coords.size() || a2.size() != pts[0].coords.size())
    throw input_error(path + ": directions do not match the point dimension");

  InstanceFile inst{PointSet::create(std::move(pts), std::move(values)),
                    DirectionPair::create(std::move(a1), std::move(a2)),
                    std::nullopt,
                    std::nullopt};
  if (auto it = j.find("tau"); it != j.end()) {
    if (!it->is_number() || it->get<double>() < 0.0)
      throw input_error(path + ": \"tau\" must be a number >= 0");
    inst.tau = it->get<double>();
  }
  if (auto it = j.find("eps_ext"); it != j.end()) {
    if (!it->is_number() || it->get<double>() <= 0.0)
      throw input_error(path + ": \"eps_ext\" must be a number > 0");
    inst.eps_ext = it->get<double>();
  }
  return inst;
}

// Dispatch on an explicit format flag, else on the file extension.
inline InstanceFile ingest(const std::string& path, const std::string& format,
                           const std::string& a1_flag, const std::string& a2_flag) {
  std::string fmt = format;
  if (fmt.empty()) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
      fmt = "csv";
    else if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
      fmt = "json";
    else
      throw input_error("cannot infer the format of " + path + "; pass --format csv|json");
  }
  if (fmt == "csv") return ingest_csv(path, a1_flag, a2_flag);
  if (fmt == "json") return ingest_json(path, a1_flag, a2_flag);
  throw input_error("unknown format '" + fmt + "' (expected csv or json)");
}

// G0 tables: {"u": [...], "v": [...]}, or any solve report carrying "g0".
inline RidgeSum load_g0(const std::string& path) {
  nlohmann::json j = detail::parse_json_file(path);
  if (j.is_object() && j.contains("g0")) j = j["g0"];
  if (!j.is_object()) throw input_error(path + ": expected an object with \"u\" and \"v\"");
  auto u = detail::number_list(detail::require_field(j, "u", path), path + ": u");
  auto v = detail::number_list(detail::require_field(j, "v", path), path + ": v");
  return RidgeSum::create(std::move(u), std::move(v));
}

// Certificate JSON as emitted in reports; also accepts a whole report.
inline Certificate load_certificate(const std::string& path) {
  nlohmann::json j = detail::parse_json_file(path);
  if (j.is_object() && j.contains("certificate")) j = j["certificate"];
  if (j.is_null()) throw input_error(path + ": the report carries no certificate");
  if (!j.is_object()) throw input_error(path + ": expected a certificate object");
  const auto& jpath = detail::require_field(j, "path", path);
  Certificate c;
  const auto& st = detail::require_field(jpath, "start_type", path);
  if (!st.is_number_integer()) throw input_error(path + ": start_type must be 1 or 2");
  c.path.start_type = st.get<int>();
  const auto& idx = detail::require_field(jpath, "indices", path);
  if (!idx.is_array()) throw input_error(path + ": indices must be an array");
  for (const auto& x : idx) {
    if (!x.is_number_integer()) throw input_error(path + ": indices must be integers");
    c.path.indices.push_back(x.get<int>());
  }
  const auto& dev = detail::require_field(j, "deviation", path);
  if (!dev.is_number()) throw input_error(path + ": deviation must be a number");
  c.deviation = dev.get<double>();
  const auto& sp = detail::require_field(j, "sign_pattern", path);
  if (!sp.is_number_integer()) throw input_error(path + ": sign_pattern must be +-1");
  c.sign_pattern = sp.get<int>();
  return c;
}

} // namespace ridgechev
