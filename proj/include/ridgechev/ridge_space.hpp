#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ridgechev/errors.hpp"
#include "ridgechev/geometry.hpp"

namespace ridgechev {

// An element of the approximating space: G(x) = u[level1(x)] + v[level2(x)].
// The tables are indexed by the level indices of a LevelStructure, so a
// RidgeSum is only meaningful together with the structure it was built for.
struct RidgeSum {
  std::vector<double> u;  // one entry per level of direction 1
  std::vector<double> v;  // one entry per level of direction 2

  static RidgeSum create(std::vector<double> u, std::vector<double> v) {
    if (u.empty() || v.empty()) throw input_error("ridge sum tables must be non-empty");
    for (double x : u)
      if (!std::isfinite(x)) throw input_error("ridge sum table u has a non-finite entry");
    for (double x : v)
      if (!std::isfinite(x)) throw input_error("ridge sum table v has a non-finite entry");
    return RidgeSum{std::move(u), std::move(v)};
  }

  static RidgeSum zeros(const LevelStructure& L) {
    return RidgeSum{std::vector<double>(L.levels1.size(), 0.0),
                    std::vector<double>(L.levels2.size(), 0.0)};
  }
};

inline void check_compatible(const RidgeSum& g, const LevelStructure& L) {
  if (g.u.size() != L.levels1.size() || g.v.size() != L.levels2.size())
    throw input_error("ridge sum table sizes (" + std::to_string(g.u.size()) + ", " +
                      std::to_string(g.v.size()) + ") do not match level counts (" +
                      std::to_string(L.levels1.size()) + ", " +
                      std::to_string(L.levels2.size()) + ")");
}

// G evaluated at every sample point, in point order.
inline std::vector<double> evaluate(const RidgeSum& g, const LevelStructure& L) {
  check_compatible(g, L);
  std::vector<double> out(L.point_count());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = g.u[static_cast<std::size_t>(L.assignment[i].first)] +
             g.v[static_cast<std::size_t>(L.assignment[i].second)];
  return out;
}

// r = f - G on Q, with its sup norm and the first index attaining it.
struct Residual {
  std::vector<double> r;
  double norm = 0.0;
  int argmax = 0;
};

inline Residual residual(const PointSet& ps, const RidgeSum& g, const LevelStructure& L) {
  check_compatible(g, L);
  if (ps.size() != L.point_count())
    throw input_error("point set and level structure disagree on point count");
  Residual res;
  res.r.resize(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    res.r[i] = ps.values[i] - g.u[static_cast<std::size_t>(L.assignment[i].first)] -
               g.v[static_cast<std::size_t>(L.assignment[i].second)];
    if (std::fabs(res.r[i]) > res.norm) {
      res.norm = std::fabs(res.r[i]);
      res.argmax = static_cast<int>(i);
    }
  }
  return res;
}

// Sup norms of the two summands over Q, i.e. over the occupied levels only.
struct SupNormParts {
  double g1 = 0.0;
  double g2 = 0.0;
};

inline SupNormParts sup_norm_parts(const RidgeSum& g, const LevelStructure& L) {
  check_compatible(g, L);
  SupNormParts s;
  for (double x : g.u) s.g1 = std::max(s.g1, std::fabs(x));
  for (double x : g.v) s.g2 = std::max(s.g2, std::fabs(x));
  return s;
}

// Default tolerance for deciding which residuals count as extremal.
inline double default_eps_ext(double norm) { return 1e-7 * std::max(1.0, norm); }

// Indices where |r_i| is within eps of the residual norm. Empty only when
// the norm itself is zero and eps > 0 covers nothing (never in practice:
// norm zero makes every point extremal).
inline std::vector<int> extremal_points(const Residual& res, double eps) {
  std::vector<int> out;
  for (std::size_t i = 0; i < res.r.size(); ++i)
    if (std::fabs(res.r[i]) >= res.norm - eps) out.push_back(static_cast<int>(i));
  return out;
}

// Resolves the constant-shift ambiguity (u + c, v - c) by pushing v so its
// minimum is exactly zero. Evaluations are unchanged up to rounding.
inline RidgeSum normalize_shift(RidgeSum g) {
  const double c = *std::min_element(g.v.begin(), g.v.end());
  for (double& x : g.v) x -= c;
  for (double& x : g.u) x += c;
  return g;
}

} // namespace ridgechev
