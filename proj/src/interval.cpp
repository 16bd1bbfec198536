#include "ivreg/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ivreg {

Interval::Interval(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper)) {
    throw std::domain_error("interval bounds must be finite");
  }
  if (lower > upper) {
    if (lower - upper <= kSnapTolerance) {
      // Floating-point noise from ingestion; snap to the midpoint.
      lower_ = upper_ = 0.5 * (lower + upper);
    } else {
      throw std::domain_error("interval lower bound exceeds upper bound");
    }
  }
}

Interval Interval::from_center_range(double center, double range) {
  if (!std::isfinite(center) || !std::isfinite(range)) {
    throw std::domain_error("center/range must be finite");
  }
  if (range < 0.0) {
    throw std::domain_error("interval range must be nonnegative");
  }
  return Interval(center - 0.5 * range, center + 0.5 * range);
}

double delta(const Interval& a, const Interval& b) {
  const double dl = a.lower() - b.lower();
  const double du = a.upper() - b.upper();
  return std::sqrt(0.5 * dl * dl + 0.5 * du * du);
}

CollinearityResult is_collinear(std::span<const Interval> points,
                                double tolerance) {
  if (points.size() < 2) {
    throw std::domain_error("collinearity needs at least two intervals");
  }
  if (!(tolerance > 0.0)) {
    throw std::domain_error("collinearity tolerance must be positive");
  }

  const std::size_t n = points.size();
  double lmin = points[0].lower(), lmax = points[0].lower();
  double lmean = 0.0, umean = 0.0;
  for (const Interval& x : points) {
    lmin = std::min(lmin, x.lower());
    lmax = std::max(lmax, x.lower());
    lmean += x.lower();
    umean += x.upper();
  }
  lmean /= static_cast<double>(n);
  umean /= static_cast<double>(n);

  CollinearityResult res;

  if (lmax - lmin <= tolerance) {
    // Vertical ray L = const. In center/range form: R = 2C - 2L.
    res.collinear = true;
    res.vertical = true;
    res.a = std::numeric_limits<double>::quiet_NaN();
    res.b = std::numeric_limits<double>::quiet_NaN();
    res.c = 2.0;
    res.d = -2.0 * lmean;
    res.max_residual = lmax - lmin;
    return res;
  }

  double sxx = 0.0, sxy = 0.0;
  for (const Interval& x : points) {
    sxx += (x.lower() - lmean) * (x.lower() - lmean);
    sxy += (x.lower() - lmean) * (x.upper() - umean);
  }
  const double a = sxy / sxx;
  const double b = umean - a * lmean;

  double max_res = 0.0;
  for (const Interval& x : points) {
    max_res = std::max(max_res, std::abs(x.upper() - (a * x.lower() + b)));
  }

  // Side condition: every sample point stays in the cone on the fitted ray,
  // a*L + b >= L. Equivalent to the slope-cased bounds (L >= -b/(a-1) for
  // a > 1 and so on) but uniform in a.
  bool side_ok = true;
  for (const Interval& x : points) {
    if (a * x.lower() + b < x.lower() - tolerance) side_ok = false;
  }

  res.collinear = max_res <= tolerance && side_ok;
  res.a = a;
  res.b = b;
  res.max_residual = max_res;
  if (std::abs(a + 1.0) > 1e-12) {
    res.c = 2.0 * (a - 1.0) / (a + 1.0);
    res.d = 2.0 * b / (a + 1.0);
  } else {
    res.c = std::numeric_limits<double>::quiet_NaN();
    res.d = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

IntervalDataset::IntervalDataset(std::size_t n, std::size_t p,
                                 std::vector<Interval> predictors,
                                 std::vector<Interval> outcome,
                                 std::vector<std::string> predictor_names)
    : n_(n),
      p_(p),
      predictors_(std::move(predictors)),
      outcome_(std::move(outcome)),
      predictor_names_(std::move(predictor_names)) {
  if (n_ < 1 || p_ < 1) {
    throw std::invalid_argument("dataset needs n >= 1 and p >= 1");
  }
  if (predictors_.size() != n_ * p_) {
    throw std::invalid_argument("predictor grid size must be n*p");
  }
  if (outcome_.size() != n_) {
    throw std::invalid_argument("outcome length must be n");
  }
  if (predictor_names_.empty()) {
    predictor_names_.reserve(p_);
    for (std::size_t j = 0; j < p_; ++j) {
      predictor_names_.push_back("x" + std::to_string(j + 1));
    }
  } else if (predictor_names_.size() != p_) {
    throw std::invalid_argument("predictor_names length must be p");
  }
}

}  // namespace ivreg
