#pragma once

#include <span>

#include "ivreg/interval.hpp"
#include "ivreg/linalg.hpp"
#include "ivreg/regression.hpp"

namespace ivreg {

// Constrained center-and-range method: ordinary LS on centers, LS on ranges
// with every range coefficient (intercept included) restricted to be
// nonnegative.
struct CcrmFit {
  double beta0_c = 0.0;
  Vector beta1_c;  // length p
  double beta0_r = 0.0;
  Vector beta1_r;  // length p, all >= 0
  double resid_var_c = 0.0;
  double resid_var_r = 0.0;
};

CcrmFit fit_ccrm(const IntervalDataset& data);

// Univariate mid/spread baseline: center line by ordinary LS, spread line
// with slope and intercept (the mean spread error) restricted nonnegative.
struct MModelFit {
  double slope_c = 0.0;
  double intercept_c = 0.0;
  double abs_slope_r = 0.0;
  double spr_eps_mean = 0.0;
};

MModelFit fit_m_model(const IntervalDataset& data);

Prediction predict_baseline(const CcrmFit& fit,
                            std::span<const Interval> predictors);
Prediction predict_baseline(const MModelFit& fit, const Interval& predictor);

// A CCRM fit re-expressed in lower/upper coordinates as a point of the
// cone-affine parameter space (satisfies alpha = beta + gamma exactly).
Vector ccrm_as_cone_coefficients(const CcrmFit& fit);

}  // namespace ivreg
