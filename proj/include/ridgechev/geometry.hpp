#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ridgechev/errors.hpp"

namespace ridgechev {

struct Point {
  std::vector<double> coords;
};

// A finite sample set Q together with the function values f attached to it.
// Points are pairwise distinct under exact coordinate equality.
struct PointSet {
  std::vector<Point> points;
  std::vector<double> values;
  std::size_t dimension = 0;

  std::size_t size() const { return points.size(); }

  static PointSet create(std::vector<Point> points, std::vector<double> values);
};

// Two fixed, nonzero direction vectors of matching dimension.
struct DirectionPair {
  std::vector<double> a1;
  std::vector<double> a2;

  static DirectionPair create(std::vector<double> a1, std::vector<double> a2);
};

// Dot product with left-to-right summation. The summation order is part of
// the determinism contract: identical inputs give bit-identical projections.
inline double project(const Point& p, std::span<const double> a) {
  if (p.coords.size() != a.size())
    throw input_error("project: dimension mismatch (point has " +
                      std::to_string(p.coords.size()) + " coordinates, direction has " +
                      std::to_string(a.size()) + ")");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * p.coords[j];
  return s;
}

inline PointSet PointSet::create(std::vector<Point> points, std::vector<double> values) {
  if (points.empty()) throw input_error("point set must contain at least one point");
  if (points.size() != values.size())
    throw input_error("point/value count mismatch: " + std::to_string(points.size()) +
                      " points vs " + std::to_string(values.size()) + " values");
  const std::size_t d = points.front().coords.size();
  if (d == 0) throw input_error("points must have dimension >= 1");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].coords.size() != d)
      throw input_error("point " + std::to_string(i) + " has dimension " +
                        std::to_string(points[i].coords.size()) + ", expected " +
                        std::to_string(d));
    for (double c : points[i].coords)
      if (!std::isfinite(c))
        throw input_error("point " + std::to_string(i) + " has a non-finite coordinate");
    if (!std::isfinite(values[i]))
      throw input_error("value at point " + std::to_string(i) + " is not finite");
  }
  // Duplicate detection via lexicographic sort; reports both offenders.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].coords != points[b].coords) return points[a].coords < points[b].coords;
    return a < b;
  });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (points[order[k - 1]].coords == points[order[k]].coords)
      throw input_error("duplicate points at indices " +
                        std::to_string(std::min(order[k - 1], order[k])) + " and " +
                        std::to_string(std::max(order[k - 1], order[k])));
  PointSet ps;
  ps.points = std::move(points);
  ps.values = std::move(values);
  ps.dimension = d;
  return ps;
}

inline DirectionPair DirectionPair::create(std::vector<double> a1, std::vector<double> a2) {
  if (a1.empty() || a1.size() != a2.size())
    throw input_error("directions must be non-empty and of equal dimension");
  auto check = [](const std::vector<double>& a, const char* name) {
    double maxabs = 0.0;
    for (double c : a) {
      if (!std::isfinite(c)) throw input_error(std::string(name) + " has a non-finite component");
      maxabs = std::max(maxabs, std::fabs(c));
    }
    if (maxabs == 0.0) throw input_error(std::string(name) + " is the zero vector");
  };
  check(a1, "a1");
  check(a2, "a2");
  return DirectionPair{std::move(a1), std::move(a2)};
}

// The quotient of Q by the two projections: sorted level representatives per
// direction, a level-index pair per point, and the fibers (points per level).
// Immutable after construction.
struct LevelStructure {
  std::vector<double> levels1;  // strictly increasing, gaps > tau1
  std::vector<double> levels2;
  std::vector<std::pair<int, int>> assignment;  // per point: (level idx dir 1, level idx dir 2)
  std::vector<std::vector<int>> fibers1;  // point indices per level, ascending
  std::vector<std::vector<int>> fibers2;
  double tau1 = 0.0, tau2 = 0.0;          // gap thresholds actually used
  double width1 = 0.0, width2 = 0.0;      // widest cluster seen per direction
  bool width_warning1 = false, width_warning2 = false;  // width > 10*tau

  std::size_t point_count() const { return assignment.size(); }
  int level1(int i) const { return assignment[static_cast<std::size_t>(i)].first; }
  int level2(int i) const { return assignment[static_cast<std::size_t>(i)].second; }
  int level_of(int i, int direction) const { return direction == 1 ? level1(i) : level2(i); }
  const std::vector<std::vector<int>>& fibers(int direction) const {
    return direction == 1 ? fibers1 : fibers2;
  }
};

namespace detail {

struct Clustering {
  std::vector<double> reps;
  std::vector<int> assign;
  double width = 0.0;
};

// Single linkage on the sorted projection sequence: consecutive projections
// with gap <= tau fall into one cluster. Representative = midpoint of the
// cluster's min/max, so adjacent representatives always differ by more
// than tau.
inline Clustering cluster_projections(const std::vector<double>& proj, double tau) {
  const std::size_t n = proj.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (proj[a] != proj[b]) return proj[a] < proj[b];
    return a < b;
  });
  Clustering out;
  out.assign.assign(n, -1);
  std::size_t k = 0;
  while (k < n) {
    const std::size_t start = k;
    double lo = proj[order[k]], hi = lo;
    ++k;
    while (k < n && proj[order[k]] - hi <= tau) {
      hi = proj[order[k]];
      ++k;
    }
    const int idx = static_cast<int>(out.reps.size());
    out.reps.push_back((lo + hi) / 2.0);
    out.width = std::max(out.width, hi - lo);
    for (std::size_t t = start; t < k; ++t) out.assign[order[t]] = idx;
  }
  return out;
}

} // namespace detail

// Builds the level quotient. With no explicit tau, each direction uses
// 1e-9 * (max projection - min projection).
inline LevelStructure build_levels(const PointSet& ps, const DirectionPair& dirs,
                                   std::optional<double> tau = std::nullopt) {
  if (tau && *tau < 0.0) throw input_error("tau must be >= 0");
  if (dirs.a1.size() != ps.dimension)
    throw input_error("direction dimension " + std::to_string(dirs.a1.size()) +
                      " does not match point dimension " + std::to_string(ps.dimension));
  const std::size_t n = ps.size();
  LevelStructure L;
  L.assignment.resize(n);

  for (int direction = 1; direction <= 2; ++direction) {
    const std::vector<double>& a = direction == 1 ? dirs.a1 : dirs.a2;
    std::vector<double> proj(n);
    for (std::size_t i = 0; i < n; ++i) proj[i] = project(ps.points[i], a);
    double used_tau;
    if (tau) {
      used_tau = *tau;
    } else {
      auto [mn, mx] = std::minmax_element(proj.begin(), proj.end());
      used_tau = 1e-9 * (*mx - *mn);
    }
    auto c = detail::cluster_projections(proj, used_tau);
    auto& fibers = direction == 1 ? L.fibers1 : L.fibers2;
    fibers.assign(c.reps.size(), {});
    for (std::size_t i = 0; i < n; ++i) {
      (direction == 1 ? L.assignment[i].first : L.assignment[i].second) = c.assign[i];
      fibers[static_cast<std::size_t>(c.assign[i])].push_back(static_cast<int>(i));
    }
    if (direction == 1) {
      L.levels1 = std::move(c.reps);
      L.tau1 = used_tau;
      L.width1 = c.width;
      L.width_warning1 = c.width > 10.0 * used_tau;
    } else {
      L.levels2 = std::move(c.reps);
      L.tau2 = used_tau;
      L.width2 = c.width;
      L.width_warning2 = c.width > 10.0 * used_tau;
    }
  }
  return L;
}

// True iff the directions are parallel or antiparallel within tau_angle:
// |a1.a2| >= (1 - tau_angle) * |a1| |a2|. Not an error condition; the solver
// collapses to a one-direction problem in that case.
inline bool detect_parallel(const DirectionPair& dirs, double tau_angle = 1e-9) {
  double dot = 0.0, n1 = 0.0, n2 = 0.0;
  for (std::size_t j = 0; j < dirs.a1.size(); ++j) {
    dot += dirs.a1[j] * dirs.a2[j];
    n1 += dirs.a1[j] * dirs.a1[j];
    n2 += dirs.a2[j] * dirs.a2[j];
  }
  return std::fabs(dot) >= (1.0 - tau_angle) * std::sqrt(n1) * std::sqrt(n2);
}

} // namespace ridgechev
