#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ridgechev/errors.hpp"
#include "ridgechev/geometry.hpp"
#include "ridgechev/ridge_space.hpp"

namespace ridgechev {

// An ordered walk q_1, ..., q_n over point indices whose edges alternate
// between the two directions. Edge e (0-based) links indices[e] and
// indices[e+1] and has type startType when e is even, 3 - startType when odd.
// Consecutive points must differ; revisits at distance >= 2 are allowed.
struct Path {
  int start_type = 1;
  std::vector<int> indices;

  std::size_t length() const { return indices.size(); }
  int edge_type(std::size_t e) const { return e % 2 == 0 ? start_type : 3 - start_type; }
};

// Why a candidate walk is not a path: the first offending edge (0-based;
// -1 when the problem is not tied to an edge) and a human-readable reason.
struct PathViolation {
  std::string reason;
  int edge = -1;
};

// Checks Definition-2.1 validity: alternating edge types, equal level index
// in the edge's direction, consecutive points distinct. Level equality means
// identical level index, so tau-clustering decides borderline ties.
inline std::variant<Path, PathViolation> validate_path(std::vector<int> indices, int start_type,
                                                       const LevelStructure& L) {
  if (start_type != 1 && start_type != 2)
    throw input_error("start_type must be 1 or 2, got " + std::to_string(start_type));
  if (indices.empty()) return PathViolation{"path must contain at least one point", -1};
  const int n_points = static_cast<int>(L.point_count());
  for (int idx : indices)
    if (idx < 0 || idx >= n_points)
      throw input_error("path index " + std::to_string(idx) + " out of range [0, " +
                        std::to_string(n_points) + ")");
  Path q{start_type, std::move(indices)};
  for (std::size_t e = 0; e + 1 < q.indices.size(); ++e) {
    const int a = q.indices[e], b = q.indices[e + 1];
    if (a == b)
      return PathViolation{"edge " + std::to_string(e) + " joins a point to itself",
                           static_cast<int>(e)};
    const int t = q.edge_type(e);
    if (L.level_of(a, t) != L.level_of(b, t))
      return PathViolation{"edge " + std::to_string(e) + " (type " + std::to_string(t) +
                               ") joins points " + std::to_string(a) + " and " +
                               std::to_string(b) + " on different direction-" +
                               std::to_string(t) + " levels",
                           static_cast<int>(e)};
  }
  return q;
}

// True iff the path closes into a cycle: even length and the wrap-around
// edge (last -> first) is itself a valid edge of the continuing type.
inline bool is_closed(const Path& q, const LevelStructure& L) {
  const std::size_t n = q.length();
  if (n < 2 || n % 2 != 0) return false;
  const int a = q.indices[n - 1], b = q.indices[0];
  if (a == b) return false;
  const int t = q.edge_type(n - 1);
  return L.level_of(a, t) == L.level_of(b, t);
}

// l_q(F) = (1/n) sum_{i=1..n} (-1)^i F(q_i), 1-based: the first point enters
// with a minus sign.
inline double path_functional(const Path& q, std::span<const double> point_values) {
  double s = 0.0;
  for (std::size_t k = 0; k < q.indices.size(); ++k) {
    const double v = point_values[static_cast<std::size_t>(q.indices[k])];
    s += (k % 2 == 0) ? -v : v;
  }
  return s / static_cast<double>(q.indices.size());
}

// ||l_q|| = (1/n) sum over distinct points of |#plus positions - #minus
// positions|. Equals 1 exactly when no point occurs with both signs.
inline double functional_norm(const Path& q) {
  std::map<int, int> net;  // signed multiplicity per point index
  for (std::size_t k = 0; k < q.indices.size(); ++k) net[q.indices[k]] += (k % 2 == 0) ? -1 : 1;
  double s = 0.0;
  for (auto& [idx, m] : net) s += std::abs(m);
  return s / static_cast<double>(q.indices.size());
}

// Inequality (2.1): |l_q(G)| <= (2/n)(||g1|| + ||g2||) for every path, with
// exact zero on closed paths. Returns both sides for inspection.
inline std::pair<double, double> near_annihilation_bound(const Path& q, const RidgeSum& g,
                                                         const LevelStructure& L) {
  const std::vector<double> gv = evaluate(g, L);
  const double lhs = std::fabs(path_functional(q, gv));
  const SupNormParts parts = sup_norm_parts(g, L);
  const double rhs = 2.0 / static_cast<double>(q.indices.size()) * (parts.g1 + parts.g2);
  return {lhs, rhs};
}

} // namespace ridgechev
