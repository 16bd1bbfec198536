#include "ivreg/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ivreg/active_set.hpp"
#include "ivreg/errors.hpp"
#include "ivreg/stats.hpp"

namespace ivreg {

DesignMatrices build_design(const IntervalDataset& data) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  if (n < 2) {
    throw std::invalid_argument("design needs at least two observations");
  }

  DesignMatrices d;
  d.x1 = Matrix(n, 2 * p + 1);
  d.x2 = Matrix(n, p + 1);
  for (std::size_t i = 0; i < n; ++i) {
    d.x1(i, 0) = 1.0;
    d.x2(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      const Interval& x = data.predictor(i, j);
      d.x1(i, 1 + 2 * j) = x.lower();
      d.x1(i, 2 + 2 * j) = x.upper();
      d.x2(i, 1 + j) = x.range();
    }
  }

  const std::size_t k = 3 * p + 2;
  d.x_stacked = Matrix(2 * n, k);
  d.y_stacked.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 2 * p + 1; ++j) {
      d.x_stacked(i, j) = d.x1(i, j);
      d.x_stacked(n + i, j) = d.x1(i, j);
    }
    for (std::size_t j = 0; j < p + 1; ++j) {
      d.x_stacked(n + i, 2 * p + 1 + j) = d.x2(i, j);
    }
    d.y_stacked[i] = data.outcome(i).lower();
    d.y_stacked[n + i] = data.outcome(i).upper();
  }
  return d;
}

Vector FittedModel::coefficients() const {
  Vector b(3 * p + 2);
  b[0] = eta;
  for (std::size_t j = 0; j < p; ++j) {
    b[1 + 2 * j] = alpha[j];
    b[2 + 2 * j] = beta[j];
  }
  b[2 * p + 1] = theta;
  for (std::size_t j = 0; j < p; ++j) b[2 * p + 2 + j] = gamma[j];
  return b;
}

FittedModel FittedModel::from_coefficients(const Vector& coeffs,
                                           std::size_t p) {
  if (coeffs.size() != 3 * p + 2) {
    throw std::invalid_argument("coefficient vector has wrong length");
  }
  FittedModel m;
  m.p = p;
  m.eta = coeffs[0];
  m.alpha.resize(p);
  m.beta.resize(p);
  m.gamma.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    m.alpha[j] = coeffs[1 + 2 * j];
    m.beta[j] = coeffs[2 + 2 * j];
    m.gamma[j] = coeffs[2 * p + 2 + j];
  }
  m.theta = coeffs[2 * p + 1];
  return m;
}

namespace {

void predict_bounds(const Vector& b, std::size_t p,
                    std::span<const Interval> x, double& yl, double& yu) {
  const double eta = b[0];
  const double theta = b[2 * p + 1];
  yl = eta;
  yu = eta + theta;
  for (std::size_t j = 0; j < p; ++j) {
    const double a = b[1 + 2 * j];
    const double bb = b[2 + 2 * j];
    const double g = b[2 * p + 2 + j];
    yl += a * x[j].lower() + bb * x[j].upper();
    yu += (a - g) * x[j].lower() + (bb + g) * x[j].upper();
  }
}

void fill_residuals(FittedModel& m, const IntervalDataset& data) {
  const std::size_t n = data.n();
  const Vector b = m.coefficients();
  m.residuals_lower.resize(n);
  m.residuals_upper.resize(n);
  std::vector<Interval> row(m.p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m.p; ++j) row[j] = data.predictor(i, j);
    double yl, yu;
    predict_bounds(b, m.p, row, yl, yu);
    m.residuals_lower[i] = data.outcome(i).lower() - yl;
    m.residuals_upper[i] = data.outcome(i).upper() - yu;
  }
}

double residual_sum_of_squares(const FittedModel& m) {
  double rss = 0.0;
  for (double r : m.residuals_lower) rss += r * r;
  for (double r : m.residuals_upper) rss += r * r;
  return rss;
}

struct NormalEquations {
  Matrix xtx;
  Vector xty;
  std::size_t df;
};

NormalEquations normal_equations(const IntervalDataset& data,
                                 const DesignMatrices& d) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  if (2 * n < 3 * p + 3) {
    throw std::invalid_argument(
        "insufficient degrees of freedom: need 2n - 3p - 2 >= 1");
  }
  NormalEquations ne;
  const Matrix xt = transpose(d.x_stacked);
  ne.xtx = matmul(xt, d.x_stacked);
  ne.xty = matvec(xt, d.y_stacked);
  ne.df = 2 * n - 3 * p - 2;
  if (!rank_full(ne.xtx)) {
    throw SingularMatrixError("stacked design matrix is rank deficient", 0);
  }
  return ne;
}

FittedModel finalize_fit(const IntervalDataset& data, const NormalEquations& ne,
                         const Vector& coeffs, bool constrained) {
  FittedModel m = FittedModel::from_coefficients(coeffs, data.p());
  m.constrained = constrained;
  fill_residuals(m, data);
  m.sigma2_hat = residual_sum_of_squares(m) / static_cast<double>(ne.df);
  Matrix cov = inverse_spd(ne.xtx);
  for (std::size_t i = 0; i < cov.rows(); ++i) {
    cov(i, i) *= m.sigma2_hat;
    for (std::size_t j = i + 1; j < cov.cols(); ++j) {
      // symmetrize away the solve's rounding noise
      const double v = 0.5 * (cov(i, j) + cov(j, i)) * m.sigma2_hat;
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  m.covariance = std::move(cov);
  m.ill_conditioned = spd_condition_estimate(ne.xtx) > 1e12;
  return m;
}

}  // namespace

FittedModel fit_unconstrained(const IntervalDataset& data) {
  const DesignMatrices d = build_design(data);
  const NormalEquations ne = normal_equations(data, d);
  const Vector coeffs = solve_spd(ne.xtx, ne.xty);
  return finalize_fit(data, ne, coeffs, /*constrained=*/false);
}

FittedModel fit_constrained(const IntervalDataset& data) {
  const DesignMatrices d = build_design(data);
  const NormalEquations ne = normal_equations(data, d);

  const std::size_t p = data.p();
  std::vector<bool> bounded(3 * p + 2, false);
  bounded[2 * p + 1] = true;  // theta
  for (std::size_t j = 0; j < p; ++j) bounded[2 * p + 2 + j] = true;

  const BoundedLsResult r =
      solve_bounded_ls(ne.xtx, ne.xty, bounded, 10 * (p + 1));
  if (!r.kkt_ok) {
    throw std::runtime_error("constrained fit: active-set iteration cap hit");
  }
  return finalize_fit(data, ne, r.solution, /*constrained=*/true);
}

PositivityDiagnostics positivity_diagnostics(const IntervalDataset& data,
                                             const FittedModel& fit) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  if (fit.p != p) {
    throw std::invalid_argument("fit and dataset disagree on p");
  }

  Vector rmean(p, 0.0);
  double ymean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) rmean[j] += data.predictor(i, j).range();
    ymean += data.outcome(i).range();
  }
  for (double& v : rmean) v /= static_cast<double>(n);
  ymean /= static_cast<double>(n);

  PositivityDiagnostics diag;
  diag.range_cov_matrix = Matrix(p, p);
  diag.range_cross_cov.assign(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double yr = data.outcome(i).range() - ymean;
    for (std::size_t k = 0; k < p; ++k) {
      const double xk = data.predictor(i, k).range() - rmean[k];
      diag.range_cross_cov[k] += xk * yr;
      for (std::size_t j = k; j < p; ++j) {
        diag.range_cov_matrix(k, j) +=
            xk * (data.predictor(i, j).range() - rmean[j]);
      }
    }
  }
  for (std::size_t k = 0; k < p; ++k) {
    diag.range_cross_cov[k] /= static_cast<double>(n);
    for (std::size_t j = k; j < p; ++j) {
      diag.range_cov_matrix(k, j) /= static_cast<double>(n);
      diag.range_cov_matrix(j, k) = diag.range_cov_matrix(k, j);
    }
  }

  try {
    diag.gamma_from_ranges =
        solve_spd(diag.range_cov_matrix, diag.range_cross_cov);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("predictor ranges are collinear", 0);
  }
  diag.theta_from_ranges = ymean;
  for (std::size_t j = 0; j < p; ++j) {
    diag.theta_from_ranges -= diag.gamma_from_ranges[j] * rmean[j];
  }

  diag.assumption1_ok = true;
  for (std::size_t k = 0; k < p && diag.assumption1_ok; ++k) {
    for (std::size_t j = k + 1; j < p; ++j) {
      const double denom = std::sqrt(diag.range_cov_matrix(k, k) *
                                     diag.range_cov_matrix(j, j));
      const double r = denom > 0.0 ? diag.range_cov_matrix(k, j) / denom : 0.0;
      if (correlation_pvalue(r, n) <= 0.05) {
        diag.assumption1_ok = false;
        break;
      }
    }
  }

  diag.assumption2_ok = true;
  for (double s : diag.range_cross_cov) {
    if (!(s > 0.0)) diag.assumption2_ok = false;
  }

  diag.negative_range_bound.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double yr = data.outcome(i).range();
    diag.negative_range_bound[i] =
        yr == 0.0 ? std::numeric_limits<double>::infinity()
                  : 2.0 * fit.sigma2_hat / (yr * yr);
  }
  return diag;
}

Prediction predict(const FittedModel& fit,
                   std::span<const Interval> predictors) {
  if (predictors.size() != fit.p) {
    throw std::invalid_argument("predict: wrong number of predictors");
  }
  double yl, yu;
  predict_bounds(fit.coefficients(), fit.p, predictors, yl, yu);
  Prediction out;
  if (yu < yl) {
    const double mid = 0.5 * (yl + yu);
    out.value = Interval(mid, mid);
    out.clamped = true;
  } else {
    out.value = Interval(yl, yu);
  }
  return out;
}

double lse_objective(const IntervalDataset& data, const Vector& coeffs) {
  const std::size_t p = data.p();
  if (coeffs.size() != 3 * p + 2) {
    throw std::invalid_argument("coefficient vector has wrong length");
  }
  double obj = 0.0;
  std::vector<Interval> row(p);
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < p; ++j) row[j] = data.predictor(i, j);
    double yl, yu;
    predict_bounds(coeffs, p, row, yl, yu);
    const double rl = data.outcome(i).lower() - yl;
    const double ru = data.outcome(i).upper() - yu;
    obj += rl * rl + ru * ru;
  }
  return obj;
}

std::optional<RangeRssComparison> check_constrained_range_rss(
    const IntervalDataset& data) {
  if (data.p() != 1) {
    throw std::invalid_argument("range RSS check is univariate only");
  }
  const FittedModel unconstrained = fit_unconstrained(data);
  if (unconstrained.gamma[0] >= 0.0) return std::nullopt;

  const FittedModel tilde = fit_constrained(data);
  const std::size_t n = data.n();
  double ymean = 0.0;
  for (std::size_t i = 0; i < n; ++i) ymean += data.outcome(i).range();
  ymean /= static_cast<double>(n);

  RangeRssComparison cmp;
  for (std::size_t i = 0; i < n; ++i) {
    const double yr = data.outcome(i).range();
    const double fitted =
        tilde.gamma[0] * data.predictor(i, 0).range() + tilde.theta;
    cmp.constrained_rss += (yr - fitted) * (yr - fitted);
    cmp.constant_rss += (yr - ymean) * (yr - ymean);
  }
  cmp.holds = cmp.constrained_rss >= cmp.constant_rss - 1e-9;
  return cmp;
}

}  // namespace ivreg
