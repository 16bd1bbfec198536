#include "ivreg/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "ivreg/active_set.hpp"
#include "ivreg/errors.hpp"

namespace ivreg {

namespace {

struct CenterRangeDesign {
  Matrix x;  // n x (p+1): column of ones, then one column per predictor
  Vector yc;
  Vector yr;
};

CenterRangeDesign center_range_design(const IntervalDataset& data,
                                      bool use_ranges_as_regressors) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  CenterRangeDesign d;
  d.x = Matrix(n, p + 1);
  d.yc.resize(n);
  d.yr.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.x(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      const Interval& v = data.predictor(i, j);
      d.x(i, 1 + j) = use_ranges_as_regressors ? v.range() : v.center();
    }
    d.yc[i] = data.outcome(i).center();
    d.yr[i] = data.outcome(i).range();
  }
  return d;
}

struct OlsResult {
  Vector coeffs;
  double resid_var = 0.0;
};

OlsResult ols(const Matrix& x, const Vector& y) {
  const Matrix xt = transpose(x);
  const Matrix xtx = matmul(xt, x);
  if (!rank_full(xtx)) {
    throw SingularMatrixError("baseline design is rank deficient", 0);
  }
  OlsResult r;
  r.coeffs = solve_spd(xtx, matvec(xt, y));
  const Vector fitted = matvec(x, r.coeffs);
  double rss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    rss += (y[i] - fitted[i]) * (y[i] - fitted[i]);
  }
  const std::size_t df = y.size() - x.cols();
  r.resid_var = df > 0 ? rss / static_cast<double>(df) : 0.0;
  return r;
}

OlsResult nonneg_ls(const Matrix& x, const Vector& y) {
  const Matrix xt = transpose(x);
  const Matrix xtx = matmul(xt, x);
  if (!rank_full(xtx)) {
    throw SingularMatrixError("baseline design is rank deficient", 0);
  }
  std::vector<bool> bounded(x.cols(), true);
  const BoundedLsResult b =
      solve_bounded_ls(xtx, matvec(xt, y), bounded, 10 * x.cols());
  if (!b.kkt_ok) {
    throw std::runtime_error("baseline range fit: active-set cap hit");
  }
  OlsResult r;
  r.coeffs = b.solution;
  const Vector fitted = matvec(x, r.coeffs);
  double rss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    rss += (y[i] - fitted[i]) * (y[i] - fitted[i]);
  }
  const std::size_t df = y.size() - x.cols();
  r.resid_var = df > 0 ? rss / static_cast<double>(df) : 0.0;
  return r;
}

Prediction recombine(double yc, double yr) {
  Prediction out;
  if (yr < 0.0) {
    // Cannot occur with nonnegative coefficients on valid data; kept for
    // symmetry with the primary model's clamping rule.
    out.value = Interval(yc, yc);
    out.clamped = true;
  } else {
    out.value = Interval(yc - 0.5 * yr, yc + 0.5 * yr);
  }
  return out;
}

}  // namespace

CcrmFit fit_ccrm(const IntervalDataset& data) {
  if (data.n() < data.p() + 2) {
    throw std::invalid_argument("CCRM needs n >= p + 2");
  }
  const CenterRangeDesign dc = center_range_design(data, false);
  const CenterRangeDesign dr = center_range_design(data, true);

  const OlsResult center = ols(dc.x, dc.yc);
  const OlsResult range = nonneg_ls(dr.x, dr.yr);

  CcrmFit fit;
  fit.beta0_c = center.coeffs[0];
  fit.beta1_c.assign(center.coeffs.begin() + 1, center.coeffs.end());
  fit.beta0_r = range.coeffs[0];
  fit.beta1_r.assign(range.coeffs.begin() + 1, range.coeffs.end());
  fit.resid_var_c = center.resid_var;
  fit.resid_var_r = range.resid_var;
  return fit;
}

MModelFit fit_m_model(const IntervalDataset& data) {
  if (data.p() != 1) {
    throw std::invalid_argument("the M model is univariate only");
  }
  const CcrmFit c = fit_ccrm(data);
  MModelFit fit;
  fit.slope_c = c.beta1_c[0];
  fit.intercept_c = c.beta0_c;
  fit.abs_slope_r = c.beta1_r[0];
  fit.spr_eps_mean = c.beta0_r;
  return fit;
}

Prediction predict_baseline(const CcrmFit& fit,
                            std::span<const Interval> predictors) {
  if (predictors.size() != fit.beta1_c.size()) {
    throw std::invalid_argument("predict: wrong number of predictors");
  }
  double yc = fit.beta0_c;
  double yr = fit.beta0_r;
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    yc += fit.beta1_c[j] * predictors[j].center();
    yr += fit.beta1_r[j] * predictors[j].range();
  }
  return recombine(yc, yr);
}

Prediction predict_baseline(const MModelFit& fit, const Interval& predictor) {
  const double yc = fit.slope_c * predictor.center() + fit.intercept_c;
  const double yr = fit.abs_slope_r * predictor.range() + fit.spr_eps_mean;
  return recombine(yc, yr);
}

Vector ccrm_as_cone_coefficients(const CcrmFit& fit) {
  const std::size_t p = fit.beta1_c.size();
  Vector b(3 * p + 2, 0.0);
  b[0] = fit.beta0_c - 0.5 * fit.beta0_r;  // eta
  b[2 * p + 1] = fit.beta0_r;              // theta
  for (std::size_t j = 0; j < p; ++j) {
    const double beta = 0.5 * (fit.beta1_c[j] - fit.beta1_r[j]);
    const double gamma = fit.beta1_r[j];
    b[2 + 2 * j] = beta;
    b[2 * p + 2 + j] = gamma;
    b[1 + 2 * j] = beta + gamma;  // alpha; keeps alpha = beta + gamma bitwise
  }
  return b;
}

}  // namespace ivreg
