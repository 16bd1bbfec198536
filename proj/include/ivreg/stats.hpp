#pragma once

#include <cstddef>

namespace ivreg {

// Regularized incomplete beta function I_x(a, b).
double betainc_reg(double a, double b, double x);

// Two-sided p-value of the t statistic for a sample correlation r on n pairs
// (df = n - 2). Returns 1 for degenerate inputs, 0 for |r| >= 1.
double correlation_pvalue(double r, std::size_t n);

}  // namespace ivreg
