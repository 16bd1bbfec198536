#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "ivreg/interval.hpp"
#include "ivreg/linalg.hpp"

namespace ivreg {

// Stacked design of the joint lower/upper model.
//   x1: n x (2p+1), columns (1, x1^L, x1^U, ..., xp^L, xp^U)
//   x2: n x (p+1),  columns (1, x1^R, ..., xp^R)
//   x_stacked: [[x1, 0], [x1, x2]], 2n x (3p+2)
//   y_stacked: (Y^L ... , Y^U ...)
// Coefficient order throughout: (eta, a1, b1, ..., ap, bp, theta, g1, ..., gp).
struct DesignMatrices {
  Matrix x1;
  Matrix x2;
  Matrix x_stacked;
  Vector y_stacked;
};

DesignMatrices build_design(const IntervalDataset& data);

struct FittedModel {
  std::size_t p = 0;
  double eta = 0.0;
  Vector alpha;  // length p
  Vector beta;   // length p
  double theta = 0.0;
  Vector gamma;  // length p
  double sigma2_hat = 0.0;
  Matrix covariance;  // (3p+2) x (3p+2)
  bool constrained = false;
  Vector residuals_lower;  // Y^L - fitted^L
  Vector residuals_upper;
  bool ill_conditioned = false;  // normal-equations condition estimate > 1e12

  // Full coefficient vector in design order.
  Vector coefficients() const;
  static FittedModel from_coefficients(const Vector& coeffs, std::size_t p);
};

// Unconstrained least squares via the stacked normal equations. sigma2_hat
// uses the divisor 2n - 3p - 2; covariance is (X^T X)^{-1} sigma2_hat.
// gamma/theta are reported as-is even when negative.
FittedModel fit_unconstrained(const IntervalDataset& data);

// Same objective subject to theta >= 0 and gamma_j >= 0 (eta, alpha, beta
// free), solved by the active-set scheme capped at 10*(p+1) iterations.
FittedModel fit_constrained(const IntervalDataset& data);

struct PositivityDiagnostics {
  Matrix range_cov_matrix;   // p x p, entries S_{k,j} (1/n divisor)
  Vector range_cross_cov;    // length p, entries S_k
  Vector gamma_from_ranges;  // solution of range_cov_matrix * g = cross_cov
  double theta_from_ranges = 0.0;
  bool assumption1_ok = false;  // off-diagonal range correlations: p > 0.05
  bool assumption2_ok = false;  // every S_k > 0
  Vector negative_range_bound;  // 2*sigma2_hat / (Y_i^R)^2, +inf when Y_i^R=0
};

// The range-covariance route to (gamma, theta); agrees with the stacked LS
// estimates for full-rank designs. Throws SingularMatrixError when the
// predictor ranges are collinear.
PositivityDiagnostics positivity_diagnostics(const IntervalDataset& data,
                                             const FittedModel& fit);

struct Prediction {
  Interval value;
  bool clamped = false;  // predicted upper fell below predicted lower
};

Prediction predict(const FittedModel& fit,
                   std::span<const Interval> predictors);

// Sum of squared lower and upper residuals of a coefficient vector.
double lse_objective(const IntervalDataset& data, const Vector& coeffs);

struct RangeRssComparison {
  double constrained_rss = 0.0;  // sum (Y^R - fitted^R)^2 under the bound
  double constant_rss = 0.0;     // sum (Y^R - mean Y^R)^2
  bool holds = false;            // constrained_rss >= constant_rss - 1e-9
};

// Univariate check that forcing gamma >= 0 cannot beat the constant range
// model when the unconstrained gamma estimate is negative. Returns nullopt
// when the unconstrained gamma is already nonnegative; throws for p != 1.
std::optional<RangeRssComparison> check_constrained_range_rss(
    const IntervalDataset& data);

}  // namespace ivreg
