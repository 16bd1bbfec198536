#pragma once

#include <cstddef>
#include <vector>

#include "ivreg/linalg.hpp"

namespace ivreg {

struct BoundedLsResult {
  Vector solution;
  Vector gradient;  // of ||y - X b||^2, i.e. 2*(XtX b - Xty)
  std::size_t iterations = 0;
  bool kkt_ok = false;
};

// Minimize ||y - X b||^2 subject to b_i >= 0 for every i with bounded[i],
// given the normal-equation data XtX and Xty. Active-set scheme: start from
// the unconstrained solution, pin violated bounds to zero, re-solve the
// reduced system, and release active bounds with negative multipliers until
// the KKT conditions hold. Finite for this strictly convex QP; `max_iter`
// guards against tolerance-induced cycling.
BoundedLsResult solve_bounded_ls(const Matrix& xtx, const Vector& xty,
                                 const std::vector<bool>& bounded,
                                 std::size_t max_iter);

}  // namespace ivreg
