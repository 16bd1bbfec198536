#include "ivreg/affine.hpp"

#include <cmath>
#include <stdexcept>

#include "ivreg/errors.hpp"

namespace ivreg {

AffineOperator::AffineOperator(double alpha, double beta, double gamma,
                               double eta, double theta)
    : alpha_(alpha), beta_(beta), gamma_(gamma), eta_(eta), theta_(theta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma) ||
      !std::isfinite(eta) || !std::isfinite(theta)) {
    throw std::domain_error("operator parameters must be finite");
  }
  if (gamma < 0.0 || theta < 0.0) {
    throw std::domain_error("gamma and theta must be nonnegative");
  }
}

Interval AffineOperator::apply(const Interval& x) const {
  const double lo = alpha_ * x.lower() + beta_ * x.upper() + eta_;
  const double hi = (alpha_ - gamma_) * x.lower() +
                    (beta_ + gamma_) * x.upper() + eta_ + theta_;
  // hi - lo = gamma*range + theta >= 0 algebraically; the Interval snap
  // absorbs any last-ulp inversion.
  return Interval(lo, hi);
}

Ray map_ray(const AffineOperator& t, double a, double b) {
  const double denom = t.alpha() + t.beta() * a;
  const double scale =
      std::max({1.0, std::abs(t.alpha()), std::abs(t.beta() * a)});
  if (std::abs(denom) <= 1e-14 * scale) {
    throw SingularRayError(denom);
  }
  const double k = t.gamma() * (a - 1.0) / denom;
  Ray ray;
  ray.slope = 1.0 + k;
  ray.intercept = t.gamma() * b + t.theta() - k * (t.beta() * b + t.eta());
  return ray;
}

}  // namespace ivreg
