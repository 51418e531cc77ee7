#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "ridgechev/errors.hpp"
#include "ridgechev/geometry.hpp"
#include "ridgechev/ridge_space.hpp"
#include "ridgechev/simplex.hpp"

namespace ridgechev {

// Signed point weights lambda realizing the optimal error as sum(lambda f):
// total variation 1, zero sum on every fiber of both directions, signs
// aligned with the extremal residual. Empty in the interpolation case
// (error ~ 0), where no normalized witness exists.
struct DualWitness {
  std::vector<double> weights;
  std::vector<int> support_pos;
  std::vector<int> support_neg;
  bool interpolation = false;
};

struct MinimaxSolution {
  RidgeSum g0;
  double error = 0.0;
  DualWitness dual;
  int pivots = 0;
};

struct SolveOptions {
  // Treat direction 2 as a copy of direction 1: its table is pinned to zero
  // and only direction-1 levels carry variables.
  bool collapse_direction2 = false;
};

// Best uniform approximation by u[level1] + v[level2] via the LP dual in
// standard form:
//
//   min sum_i (-f_i alpha_i + f_i beta_i)
//   s.t. sum_i (alpha_i + beta_i) = 1                      (row T)
//        sum_{i in fiber1_j} (alpha_i - beta_i) = 0        (rows U_j)
//        sum_{i in fiber2_k} (alpha_i - beta_i) = 0        (rows V_k)
//        alpha, beta >= 0
//
// The simplex row multipliers recover the primal tables: u = -pi_U,
// v = -pi_V, error = -pi_T; the primal variables give lambda = alpha - beta.
inline MinimaxSolution solve_minimax(const PointSet& ps, const LevelStructure& L,
                                     const SolveOptions& opts = {}) {
  const std::size_t N = ps.size();
  const std::size_t L1 = L.levels1.size();
  const std::size_t L2 = opts.collapse_direction2 ? 0 : L.levels2.size();
  const std::size_t m = 1 + L1 + L2;
  const std::size_t n = 2 * N;

  SimplexProblem lp;
  lp.rows = m;
  lp.cols = n;
  lp.A.assign(m * n, 0.0);
  lp.b.assign(m, 0.0);
  lp.c.assign(n, 0.0);
  lp.b[0] = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t ca = 2 * i, cb = 2 * i + 1;  // alpha_i, beta_i columns
    lp.c[ca] = -ps.values[i];
    lp.c[cb] = ps.values[i];
    lp.A[0 * n + ca] = 1.0;
    lp.A[0 * n + cb] = 1.0;
    const std::size_t rowU = 1 + static_cast<std::size_t>(L.level1(static_cast<int>(i)));
    lp.A[rowU * n + ca] = 1.0;
    lp.A[rowU * n + cb] = -1.0;
    if (!opts.collapse_direction2) {
      const std::size_t rowV = 1 + L1 + static_cast<std::size_t>(L.level2(static_cast<int>(i)));
      lp.A[rowV * n + ca] = 1.0;
      lp.A[rowV * n + cb] = -1.0;
    }
  }

  SimplexResult sr = simplex_solve(lp);
  if (sr.status != SimplexStatus::optimal)
    throw internal_error("minimax LP reported infeasible/unbounded; it is feasible and bounded "
                         "by construction");

  MinimaxSolution sol;
  sol.pivots = sr.pivots;
  sol.error = std::max(0.0, -sr.y[0]);
  sol.g0.u.resize(L.levels1.size());
  sol.g0.v.assign(L.levels2.size(), 0.0);
  for (std::size_t j = 0; j < L1; ++j) sol.g0.u[j] = -sr.y[1 + j];
  for (std::size_t k = 0; k < L2; ++k) sol.g0.v[k] = -sr.y[1 + L1 + k];
  sol.g0 = normalize_shift(std::move(sol.g0));

  double fmax = 0.0;
  for (double v : ps.values) fmax = std::max(fmax, std::fabs(v));
  if (sol.error <= 1e-12 * (1.0 + fmax)) {
    sol.dual.interpolation = true;
    return sol;
  }

  // lambda = alpha - beta, with sub-roundoff entries dropped and the rest
  // rescaled to total variation exactly 1.
  sol.dual.weights.assign(N, 0.0);
  double tv = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double l = sr.x[2 * i] - sr.x[2 * i + 1];
    if (std::fabs(l) <= 1e-12) l = 0.0;
    sol.dual.weights[i] = l;
    tv += std::fabs(l);
  }
  if (tv <= 0.0) throw internal_error("dual witness vanished despite positive error");
  for (std::size_t i = 0; i < N; ++i) {
    sol.dual.weights[i] /= tv;
    if (sol.dual.weights[i] > 0.0) sol.dual.support_pos.push_back(static_cast<int>(i));
    if (sol.dual.weights[i] < 0.0) sol.dual.support_neg.push_back(static_cast<int>(i));
  }
  return sol;
}

struct AlternatingResult {
  RidgeSum g;
  double error = 0.0;
  int sweeps = 0;
};

// Diliberto-Straus-style alternating heuristic. One sweep handles one
// direction (odd sweeps direction 1, even sweeps direction 2), adding each
// fiber's Chebyshev center (max+min)/2 of the current residual to that
// direction's table. Upper bound on the optimum only; no optimality claim.
inline AlternatingResult alternating_solver(const PointSet& ps, const LevelStructure& L,
                                            int max_sweeps = 2000, double tol = 1e-15) {
  if (max_sweeps < 1) throw input_error("max_sweeps must be >= 1");
  AlternatingResult out;
  out.g = RidgeSum::zeros(L);
  double prev = std::numeric_limits<double>::infinity();
  for (int s = 1; s <= max_sweeps; ++s) {
    const int direction = (s % 2 == 1) ? 1 : 2;
    const Residual res = residual(ps, out.g, L);
    auto& table = direction == 1 ? out.g.u : out.g.v;
    const auto& fibers = L.fibers(direction);
    for (std::size_t lvl = 0; lvl < fibers.size(); ++lvl) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int i : fibers[lvl]) {
        lo = std::min(lo, res.r[static_cast<std::size_t>(i)]);
        hi = std::max(hi, res.r[static_cast<std::size_t>(i)]);
      }
      table[lvl] += (lo + hi) / 2.0;
    }
    out.error = residual(ps, out.g, L).norm;
    out.sweeps = s;
    if (out.error == 0.0) break;
    if (prev - out.error < tol && s >= 2) break;
    prev = out.error;
  }
  return out;
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

// Depth-first enumeration of all linearly independent D-subsets of the
// constraint pool, carrying a Gaussian elimination of the chosen prefix so
// dependent branches are cut before they fan out.
class VertexEnumerator {
 public:
  VertexEnumerator(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs,
                   std::size_t dim)
      : rows_(rows), rhs_(rhs), dim_(dim) {}

  // Invokes visit(solution) for every nonsingular D-subset's solution.
  template <typename Visit>
  void enumerate(Visit&& visit) {
    elim_.clear();
    pivot_col_.clear();
    chosen_rhs_.clear();
    recurse(0, visit);
  }

 private:
  template <typename Visit>
  void recurse(std::size_t next, Visit& visit) {
    if (elim_.size() == dim_) {
      visit(back_substitute());
      return;
    }
    const std::size_t need = dim_ - elim_.size();
    for (std::size_t idx = next; idx + need <= rows_.size(); ++idx) {
      std::vector<double> row = rows_[idx];
      double rhs = rhs_[idx];
      for (std::size_t e = 0; e < elim_.size(); ++e) {
        const double factor = row[pivot_col_[e]];
        if (factor == 0.0) continue;
        for (std::size_t c = 0; c < dim_; ++c) row[c] -= factor * elim_[e][c];
        rhs -= factor * chosen_rhs_[e];
        row[pivot_col_[e]] = 0.0;
      }
      std::size_t piv = dim_;
      double best = 1e-9;
      for (std::size_t c = 0; c < dim_; ++c)
        if (std::fabs(row[c]) > best) best = std::fabs(row[c]), piv = c;
      if (piv == dim_) continue;  // dependent on the chosen prefix
      const double scale = row[piv];
      for (double& v : row) v /= scale;
      row[piv] = 1.0;
      elim_.push_back(std::move(row));
      chosen_rhs_.push_back(rhs / scale);
      pivot_col_.push_back(piv);
      recurse(idx + 1, visit);
      elim_.pop_back();
      chosen_rhs_.pop_back();
      pivot_col_.pop_back();
    }
  }

  std::vector<double> back_substitute() const {
    std::vector<double> x(dim_, 0.0);
    for (std::size_t e = elim_.size(); e-- > 0;) {
      double v = chosen_rhs_[e];
      for (std::size_t c = 0; c < dim_; ++c)
        if (c != pivot_col_[e]) v -= elim_[e][c] * x[c];
      x[pivot_col_[e]] = v;
    }
    return x;
  }

  const std::vector<std::vector<double>>& rows_;
  const std::vector<double>& rhs_;
  std::size_t dim_;
  std::vector<std::vector<double>> elim_;
  std::vector<double> chosen_rhs_;
  std::vector<std::size_t> pivot_col_;
};

} // namespace detail

// Exact minimax error by candidate-vertex enumeration, deliberately sharing
// no code path with the simplex solver. Desk scale only: refuses instances
// beyond (levels1 + levels2) <= 12 or |Q| > 14.
//
// Per occupied cell (j,k) only two constraints can bind: u_j + v_k + t >=
// max f and u_j + v_k - t <= min f over the cell. The shift freedom
// (u + c, v - c) per connected component of the occupied-cell graph is
// removed by pinning the smallest direction-2 level of each component to 0;
// the remaining polytope has vertices, and the optimum sits on one of them.
inline double brute_force_oracle(const PointSet& ps, const LevelStructure& L) {
  const std::size_t L1 = L.levels1.size(), L2 = L.levels2.size();
  if (L1 + L2 > 12)
    throw input_error("brute_force_oracle: refusing instance with " + std::to_string(L1 + L2) +
                      " levels (cap: levels1 + levels2 <= 12)");
  if (ps.size() > 14)
    throw input_error("brute_force_oracle: refusing instance with " + std::to_string(ps.size()) +
                      " points (cap: 14)");

  // Occupied cells with their value envelopes.
  struct Cell {
    int j, k;
    double fmin, fmax;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const int j = L.level1(static_cast<int>(i)), k = L.level2(static_cast<int>(i));
    auto it = std::find_if(cells.begin(), cells.end(),
                           [&](const Cell& c) { return c.j == j && c.k == k; });
    if (it == cells.end())
      cells.push_back({j, k, ps.values[i], ps.values[i]});
    else {
      it->fmin = std::min(it->fmin, ps.values[i]);
      it->fmax = std::max(it->fmax, ps.values[i]);
    }
  }

  // Components of the bipartite level graph; pin one v per component.
  detail::UnionFind uf(L1 + L2);
  for (const Cell& c : cells)
    uf.unite(c.j, static_cast<int>(L1) + c.k);
  std::vector<int> pinned;  // direction-2 levels fixed to 0
  {
    std::vector<bool> seen(L1 + L2, false);
    for (std::size_t k = 0; k < L2; ++k) {
      const int root = uf.find(static_cast<int>(L1 + k));
      if (!seen[static_cast<std::size_t>(root)]) {
        seen[static_cast<std::size_t>(root)] = true;
        pinned.push_back(static_cast<int>(k));
      }
    }
  }
  // Variable layout: u_0..u_{L1-1}, unpinned v's, then t.
  std::vector<int> vcol(L2, -1);
  std::size_t nv = 0;
  for (std::size_t k = 0; k < L2; ++k)
    if (!std::binary_search(pinned.begin(), pinned.end(), static_cast<int>(k)))
      vcol[k] = static_cast<int>(L1 + nv++);
  const std::size_t dim = L1 + nv + 1;
  const std::size_t tcol = dim - 1;

  // Constraint pool, each written as row.x = rhs when active:
  //   hi: u_j + v_k + t = fmax;  lo: u_j + v_k - t = fmin.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (const Cell& c : cells) {
    for (int side = 0; side < 2; ++side) {
      std::vector<double> row(dim, 0.0);
      row[static_cast<std::size_t>(c.j)] = 1.0;
      if (vcol[static_cast<std::size_t>(c.k)] >= 0)
        row[static_cast<std::size_t>(vcol[static_cast<std::size_t>(c.k)])] = 1.0;
      row[tcol] = side == 0 ? 1.0 : -1.0;
      rows.push_back(std::move(row));
      rhs.push_back(side == 0 ? c.fmax : c.fmin);
    }
  }

  double fscale = 0.0;
  for (double v : ps.values) fscale = std::max(fscale, std::fabs(v));
  const double feas_tol = 1e-9 * (1.0 + fscale);
  double best = std::numeric_limits<double>::infinity();
  detail::VertexEnumerator en(rows, rhs, dim);
  en.enumerate([&](const std::vector<double>& x) {
    const double t = x[tcol];
    if (t >= best) return;
    for (const Cell& c : cells) {
      const double uv = x[static_cast<std::size_t>(c.j)] +
                        (vcol[static_cast<std::size_t>(c.k)] >= 0
                             ? x[static_cast<std::size_t>(vcol[static_cast<std::size_t>(c.k)])]
                             : 0.0);
      if (uv + t < c.fmax - feas_tol || uv - t > c.fmin + feas_tol) return;
    }
    best = t;
  });
  if (!std::isfinite(best))
    throw internal_error("brute_force_oracle: no feasible vertex found");
  return std::max(0.0, best);
}

} // namespace ridgechev
