#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ivreg {

// Closed bounded interval [lower, upper], kept valid (lower <= upper) at all
// times. Degenerate intervals (range 0) are allowed. Construction from bounds
// inverted by at most 1e-12 snaps to the midpoint; larger inversions throw.
class Interval {
public:
  static constexpr double kSnapTolerance = 1e-12;

  Interval() : lower_(0.0), upper_(0.0) {}
  Interval(double lower, double upper);

  static Interval from_center_range(double center, double range);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double center() const noexcept { return 0.5 * (upper_ + lower_); }
  double range() const noexcept { return upper_ - lower_; }

  bool operator==(const Interval&) const = default;

private:
  double lower_;
  double upper_;
};

// L2-type distance sqrt(0.5*(dL)^2 + 0.5*(dU)^2).
double delta(const Interval& a, const Interval& b);

struct CollinearityResult {
  bool collinear = false;
  // All lower bounds coincide; the ray is vertical in (L,U) coordinates and
  // (a, b) is undefined.
  bool vertical = false;
  double a = 0.0;  // U = a*L + b
  double b = 0.0;
  double c = 0.0;  // equivalent center/range form R = c*C + d
  double d = 0.0;
  double max_residual = 0.0;
};

// Least-squares line of U against L; collinear iff the maximum residual is
// within `tolerance` and the points satisfy the cone-side conditions for the
// fitted slope.
CollinearityResult is_collinear(std::span<const Interval> points,
                                double tolerance);

// n observations of p predictor intervals plus one outcome interval.
// Immutable after construction.
class IntervalDataset {
public:
  IntervalDataset(std::size_t n, std::size_t p,
                  std::vector<Interval> predictors,
                  std::vector<Interval> outcome,
                  std::vector<std::string> predictor_names = {});

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }

  const Interval& predictor(std::size_t i, std::size_t j) const {
    return predictors_[i * p_ + j];
  }
  const Interval& outcome(std::size_t i) const { return outcome_[i]; }

  const std::vector<std::string>& predictor_names() const {
    return predictor_names_;
  }

private:
  std::size_t n_;
  std::size_t p_;
  std::vector<Interval> predictors_;  // row-major n*p
  std::vector<Interval> outcome_;
  std::vector<std::string> predictor_names_;
};

}  // namespace ivreg
