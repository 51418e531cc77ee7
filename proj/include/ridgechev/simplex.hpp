#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ridgechev/errors.hpp"

namespace ridgechev {

// min c.x  subject to  A x = b, x >= 0.  Dense row-major A (rows x cols).
struct SimplexProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> A;
  std::vector<double> b;
  std::vector<double> c;
};

enum class SimplexStatus { optimal, infeasible, unbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::optimal;
  double objective = 0.0;
  std::vector<double> x;        // primal solution, size cols
  std::vector<double> y;        // row multipliers (c_B B^-1), 0 on redundant rows
  std::vector<bool> redundant;  // rows found linearly dependent in phase 1
  int pivots = 0;
};

namespace detail {

// Two-phase dense tableau simplex with Bland's least-index anti-cycling rule.
// Artificial columns stay in the tableau through phase 2 (banned from the
// basis) so the optimal row multipliers can be read off their reduced costs.
class SimplexTableau {
 public:
  explicit SimplexTableau(const SimplexProblem& p)
      : m_(p.rows), n_(p.cols), width_(p.cols + p.rows + 1) {
    if (p.A.size() != m_ * n_ || p.b.size() != m_ || p.c.size() != n_)
      throw internal_error("simplex: inconsistent problem dimensions");
    T_.assign(m_ * width_, 0.0);
    basis_.resize(m_);
    flip_.assign(m_, 1.0);
    dead_.assign(m_, false);
    for (std::size_t r = 0; r < m_; ++r) {
      const double s = p.b[r] < 0.0 ? -1.0 : 1.0;
      flip_[r] = s;
      for (std::size_t j = 0; j < n_; ++j) at(r, j) = s * p.A[r * n_ + j];
      at(r, n_ + r) = 1.0;
      at(r, width_ - 1) = s * p.b[r];
      basis_[r] = static_cast<int>(n_ + r);
    }
  }

  SimplexResult solve(const std::vector<double>& cost) {
    SimplexResult res;
    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1(n_ + m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) phase1[n_ + r] = 1.0;
    rebuild_cost_row(phase1);
    if (!run(/*entering_limit=*/n_)) throw internal_error("simplex: phase 1 unbounded");
    double infeas = 0.0;
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] >= static_cast<int>(n_)) infeas += at(r, width_ - 1);
    double bmax = 0.0;
    for (std::size_t r = 0; r < m_; ++r) bmax = std::max(bmax, std::fabs(at(r, width_ - 1)));
    if (infeas > 1e-8 * (1.0 + bmax)) {
      res.status = SimplexStatus::infeasible;
      res.pivots = pivots_;
      return res;
    }
    drive_out_artificials();

    // Phase 2: real costs; artificial columns keep cost 0 and never enter.
    std::vector<double> phase2(n_ + m_, 0.0);
    std::copy(cost.begin(), cost.end(), phase2.begin());
    rebuild_cost_row(phase2);
    if (!run(/*entering_limit=*/n_)) {
      res.status = SimplexStatus::unbounded;
      res.pivots = pivots_;
      return res;
    }

    res.status = SimplexStatus::optimal;
    res.pivots = pivots_;
    res.x.assign(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < static_cast<int>(n_))
        res.x[static_cast<std::size_t>(basis_[r])] = at(r, width_ - 1);
    res.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) res.objective += cost[j] * res.x[j];
    // Multiplier of row r = -reduced cost of its artificial column, undoing
    // any sign flip applied to make b nonnegative.
    res.y.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) res.y[r] = flip_[r] * -cost_[n_ + r];
    res.redundant.assign(dead_.begin(), dead_.end());
    return res;
  }

 private:
  double& at(std::size_t r, std::size_t col) { return T_[r * width_ + col]; }
  double at(std::size_t r, std::size_t col) const { return T_[r * width_ + col]; }

  void rebuild_cost_row(const std::vector<double>& cost) {
    cost_.assign(width_, 0.0);
    std::copy(cost.begin(), cost.end(), cost_.begin());
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost[static_cast<std::size_t>(basis_[r])];
      if (cb == 0.0) continue;
      for (std::size_t col = 0; col < width_; ++col) cost_[col] -= cb * at(r, col);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const double piv = at(row, col);
    for (std::size_t k = 0; k < width_; ++k) at(row, k) /= piv;
    at(row, col) = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == row) continue;
      const double factor = at(r, col);
      if (factor == 0.0) continue;
      for (std::size_t k = 0; k < width_; ++k) at(r, k) -= factor * at(row, k);
      at(r, col) = 0.0;
    }
    const double cf = cost_[col];
    if (cf != 0.0) {
      for (std::size_t k = 0; k < width_; ++k) cost_[k] -= cf * at(row, k);
      cost_[col] = 0.0;
    }
    basis_[row] = static_cast<int>(col);
    ++pivots_;
  }

  // Bland's rule; only columns < entering_limit may enter. Returns false on
  // an unbounded ray.
  bool run(std::size_t entering_limit) {
    const int cap = 20000 + 50 * static_cast<int>(m_ + n_);
    for (;;) {
      if (pivots_ > cap) throw internal_error("simplex: pivot cap exceeded (cycling?)");
      std::size_t enter = width_;
      for (std::size_t j = 0; j < entering_limit; ++j)
        if (cost_[j] < -1e-9) {
          enter = j;
          break;
        }
      if (enter == width_) return true;  // optimal
      std::size_t leave = m_;
      double best_ratio = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        if (dead_[r]) continue;
        const double a = at(r, enter);
        if (a <= 1e-9) continue;
        const double ratio = at(r, width_ - 1) / a;
        if (leave == m_ || ratio < best_ratio - 1e-12 ||
            (std::fabs(ratio - best_ratio) <= 1e-12 && basis_[r] < basis_[leave]))
          leave = r, best_ratio = ratio;
      }
      if (leave == m_) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  // After phase 1: swap basic artificials for structural columns where
  // possible; rows that admit no such pivot are dependent on the others and
  // are frozen (their residual entries are pure roundoff).
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < static_cast<int>(n_)) continue;
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (std::fabs(at(r, j)) > 1e-7) {
          col = j;
          break;
        }
      if (col < n_) {
        pivot(r, col);
      } else {
        for (std::size_t j = 0; j < n_; ++j) at(r, j) = 0.0;
        at(r, width_ - 1) = 0.0;
        dead_[r] = true;
      }
    }
  }

  std::size_t m_, n_, width_;
  std::vector<double> T_;
  std::vector<double> cost_;
  std::vector<int> basis_;
  std::vector<double> flip_;
  std::vector<bool> dead_;
  int pivots_ = 0;
};

} // namespace detail

inline SimplexResult simplex_solve(const SimplexProblem& p) {
  detail::SimplexTableau tab(p);
  return tab.solve(p.c);
}

} // namespace ridgechev
