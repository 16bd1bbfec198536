#include "ivreg/active_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ivreg {

namespace {

// Solve the equality-constrained system: coordinates in `active` pinned to
// zero, the rest solved from the reduced normal equations.
Vector solve_reduced(const Matrix& xtx, const Vector& xty,
                     const std::vector<bool>& active) {
  const std::size_t k = xty.size();
  std::vector<std::size_t> free_idx;
  free_idx.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!active[i]) free_idx.push_back(i);
  }
  Vector b(k, 0.0);
  if (free_idx.empty()) return b;

  Matrix sub(free_idx.size(), free_idx.size());
  Vector rhs(free_idx.size());
  for (std::size_t r = 0; r < free_idx.size(); ++r) {
    rhs[r] = xty[free_idx[r]];
    for (std::size_t c = 0; c < free_idx.size(); ++c) {
      sub(r, c) = xtx(free_idx[r], free_idx[c]);
    }
  }
  const Vector x = solve_spd(sub, rhs);
  for (std::size_t r = 0; r < free_idx.size(); ++r) b[free_idx[r]] = x[r];
  return b;
}

Vector objective_gradient(const Matrix& xtx, const Vector& xty,
                          const Vector& b) {
  Vector g = matvec(xtx, b);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2.0 * (g[i] - xty[i]);
  return g;
}

}  // namespace

BoundedLsResult solve_bounded_ls(const Matrix& xtx, const Vector& xty,
                                 const std::vector<bool>& bounded,
                                 std::size_t max_iter) {
  const std::size_t k = xty.size();
  if (xtx.rows() != k || xtx.cols() != k || bounded.size() != k) {
    throw std::invalid_argument("solve_bounded_ls: dimension mismatch");
  }

  double scale = 1.0;
  for (double v : xty) scale = std::max(scale, std::abs(v));
  const double tol = 1e-10 * scale;

  std::vector<bool> active(k, false);
  BoundedLsResult res;
  res.solution = solve_reduced(xtx, xty, active);

  for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
    // Pin every violated bound.
    bool added = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (bounded[i] && !active[i] && res.solution[i] < 0.0) {
        active[i] = true;
        added = true;
      }
    }
    if (added) {
      res.solution = solve_reduced(xtx, xty, active);
      continue;
    }

    // Feasible; release the active bound with the most negative multiplier.
    res.gradient = objective_gradient(xtx, xty, res.solution);
    std::size_t worst = k;
    double worst_val = -tol;
    for (std::size_t i = 0; i < k; ++i) {
      if (active[i] && res.gradient[i] < worst_val) {
        worst_val = res.gradient[i];
        worst = i;
      }
    }
    if (worst == k) {
      res.kkt_ok = true;
      return res;
    }
    active[worst] = false;
    res.solution = solve_reduced(xtx, xty, active);
  }

  res.gradient = objective_gradient(xtx, xty, res.solution);
  return res;  // kkt_ok stays false; callers decide how to fail
}

}  // namespace ivreg
