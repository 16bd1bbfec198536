#pragma once

#include "ivreg/interval.hpp"

namespace ivreg {

// Affine map of the cone C = {(x,y) : x <= y} into itself:
//   L' = alpha*L + beta*U + eta
//   U' = (alpha-gamma)*L + (beta+gamma)*U + eta + theta
// gamma >= 0 and theta >= 0 are exactly what make T(C) a subset of C.
class AffineOperator {
public:
  AffineOperator(double alpha, double beta, double gamma, double eta,
                 double theta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  double eta() const noexcept { return eta_; }
  double theta() const noexcept { return theta_; }

  Interval apply(const Interval& x) const;

private:
  double alpha_, beta_, gamma_, eta_, theta_;
};

inline Interval apply(const AffineOperator& t, const Interval& x) {
  return t.apply(x);
}

struct Ray {
  double slope = 0.0;
  double intercept = 0.0;
};

// Image of the ray U = a*L + b under T, in (L,U) coordinates. Throws
// SingularRayError when alpha + beta*a vanishes (vertical image).
Ray map_ray(const AffineOperator& t, double a, double b);

}  // namespace ivreg
