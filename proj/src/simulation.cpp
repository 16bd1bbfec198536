#include "ivreg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

#include "ivreg/errors.hpp"
#include "ivreg/metrics.hpp"
#include "ivreg/regression.hpp"
#include "ivreg/baselines.hpp"

namespace ivreg {

void SimulationConfig::validate() const {
  if (n < 10) throw std::invalid_argument("simulation needs n >= 10");
  if (reps < 1) throw std::invalid_argument("simulation needs reps >= 1");
  if (!(center_low < center_high) || !(range_low < range_high) ||
      range_low < 0.0) {
    throw std::invalid_argument("invalid predictor law bounds");
  }
  if (forced_sigma && *forced_sigma < 0.0) {
    throw std::invalid_argument("forced sigma must be nonnegative");
  }
}

std::string to_string(ModelConfig c) {
  switch (c) {
    case ModelConfig::I: return "I";
    case ModelConfig::II: return "II";
    default: return "III";
  }
}

std::string to_string(ErrorLaw law) {
  switch (law) {
    case ErrorLaw::ZeroMeanUniform: return "zero-mean";
    case ErrorLaw::LiteralUniform: return "literal";
    default: return "shifted";
  }
}

TrueModel draw_model(const SimulationConfig& config, SplitMix64& rng) {
  const std::size_t p = config.p();
  double lo = 0.0, hi = 4.0;
  if (config.config_id == ModelConfig::II) {
    lo = -4.0;
    hi = 0.0;
  } else if (config.config_id == ModelConfig::III) {
    lo = -4.0;
    hi = 4.0;
  }

  TrueModel m;
  m.coefficients.assign(3 * p + 2, 0.0);
  m.coefficients[0] = rng.uniform(lo, hi);  // eta
  for (std::size_t j = 0; j < p; ++j) {
    m.coefficients[1 + 2 * j] = rng.uniform(lo, hi);  // alpha_j
    m.coefficients[2 + 2 * j] = rng.uniform(lo, hi);  // beta_j
  }
  m.coefficients[2 * p + 1] = rng.uniform(1.0, 3.0);  // theta
  for (std::size_t j = 0; j < p; ++j) {
    m.coefficients[2 * p + 2 + j] = rng.uniform(1.0, 3.0);  // gamma_j
  }
  m.sigma = config.forced_sigma ? *config.forced_sigma : rng.uniform(2.0, 4.0);
  return m;
}

GeneratedData generate_from(const SimulationConfig& config,
                            const TrueModel& model, SplitMix64& rng) {
  const std::size_t n = config.n;
  const std::size_t p = config.p();
  const Vector& b = model.coefficients;
  const double sigma = model.sigma;

  std::vector<Interval> predictors;
  predictors.reserve(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double c = rng.uniform(config.center_low, config.center_high);
      const double r = rng.uniform(config.range_low, config.range_high);
      predictors.push_back(Interval::from_center_range(c, r));
    }
  }

  double err_lo = 0.0, err_hi = 0.0, var_eps = 0.0;
  switch (config.error_law) {
    case ErrorLaw::ZeroMeanUniform: {
      const double a = std::sqrt(3.0) * sigma;
      err_lo = -a;
      err_hi = a;
      var_eps = sigma * sigma;
      break;
    }
    case ErrorLaw::LiteralUniform:
      err_lo = 0.0;
      err_hi = sigma * sigma;
      var_eps = sigma * sigma * sigma * sigma / 12.0;
      break;
    case ErrorLaw::ShiftedUniform:
      err_lo = -0.5 * sigma * sigma;
      err_hi = 0.5 * sigma * sigma;
      var_eps = sigma * sigma * sigma * sigma / 12.0;
      break;
  }

  std::vector<Interval> outcome;
  outcome.reserve(n);
  std::size_t swapped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double el = sigma == 0.0 ? 0.0 : rng.uniform(err_lo, err_hi);
    const double eu = sigma == 0.0 ? 0.0 : rng.uniform(err_lo, err_hi);
    double yl = b[0] + el;
    double yu = b[0] + b[2 * p + 1] + eu;
    for (std::size_t j = 0; j < p; ++j) {
      const Interval& x = predictors[i * p + j];
      const double a = b[1 + 2 * j];
      const double bb = b[2 + 2 * j];
      const double g = b[2 * p + 2 + j];
      yl += a * x.lower() + bb * x.upper();
      yu += (a - g) * x.lower() + (bb + g) * x.upper();
    }
    if (yl > yu) {
      std::swap(yl, yu);
      ++swapped;
    }
    outcome.emplace_back(yl, yu);
  }

  return GeneratedData{
      IntervalDataset(n, p, std::move(predictors), std::move(outcome)),
      model.coefficients, var_eps, swapped};
}

GeneratedData generate_dataset(const SimulationConfig& config,
                               std::uint64_t rep_index) {
  config.validate();
  SplitMix64 rng = SplitMix64::substream(config.seed, rep_index);
  const TrueModel model = draw_model(config, rng);
  return generate_from(config, model, rng);
}

std::size_t simulation_thread_cap() {
  if (const char* env = std::getenv("CONE_REG_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min(simulation_thread_cap(), count);
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t k = t; k < count; k += threads) fn(k);
    });
  }
  for (std::thread& th : pool) th.join();
}

// Sample cross-covariances of predictor ranges with the outcome range; the
// fallback policy checks their signs before choosing the estimator.
bool all_range_cross_cov_positive(const IntervalDataset& data) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  Vector rmean(p, 0.0);
  double ymean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) rmean[j] += data.predictor(i, j).range();
    ymean += data.outcome(i).range();
  }
  for (double& v : rmean) v /= static_cast<double>(n);
  ymean /= static_cast<double>(n);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += (data.predictor(i, j).range() - rmean[j]) *
           (data.outcome(i).range() - ymean);
    }
    if (!(s > 0.0)) return false;
  }
  return true;
}

struct RepOutcome {
  RepetitionResult result;
  Vector estimated_variances;  // diagonal of the covariance estimate
  bool ok = false;
};

RepOutcome run_repetition(const SimulationConfig& config,
                          const std::optional<TrueModel>& fixed,
                          std::uint64_t rep_index) {
  SplitMix64 rng = SplitMix64::substream(config.seed, rep_index);
  TrueModel model = fixed ? *fixed : draw_model(config, rng);
  if (fixed && config.forced_sigma) model.sigma = *config.forced_sigma;
  const GeneratedData gen = generate_from(config, model, rng);

  RepOutcome out;
  out.result.true_params = gen.true_coefficients;
  out.result.sigma2_true = gen.sigma2_true;
  out.result.swapped = gen.swapped;
  try {
    const bool assumption2 = all_range_cross_cov_positive(gen.data);
    const FittedModel fit =
        assumption2 ? fit_unconstrained(gen.data) : fit_constrained(gen.data);
    out.result.estimate = fit.coefficients();
    out.result.sigma2_hat = fit.sigma2_hat;
    out.result.used_constrained = fit.constrained;
    out.estimated_variances.resize(fit.covariance.rows());
    for (std::size_t i = 0; i < fit.covariance.rows(); ++i) {
      out.estimated_variances[i] = fit.covariance(i, i);
    }
    out.ok = true;
  } catch (const SingularMatrixError&) {
    out.ok = false;
  } catch (const std::runtime_error&) {
    out.ok = false;
  }
  return out;
}

double norm2(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<std::string> coefficient_names(std::size_t p) {
  std::vector<std::string> names;
  names.push_back("eta");
  for (std::size_t j = 0; j < p; ++j) {
    names.push_back("alpha_" + std::to_string(j + 1));
    names.push_back("beta_" + std::to_string(j + 1));
  }
  names.push_back("theta");
  for (std::size_t j = 0; j < p; ++j) {
    names.push_back("gamma_" + std::to_string(j + 1));
  }
  return names;
}

}  // namespace

Table1Summary run_table1(const SimulationConfig& config) {
  config.validate();
  std::vector<RepOutcome> reps(config.reps);
  parallel_for(config.reps, [&](std::size_t k) {
    reps[k] = run_repetition(config, std::nullopt, k);
  });

  Table1Summary s;
  std::size_t used = 0;
  for (const RepOutcome& r : reps) {
    s.swapped_rows += r.result.swapped;
    if (!r.ok) {
      ++s.skipped;
      continue;
    }
    ++used;
    if (r.result.used_constrained) {
      ++s.count_constrained;
    } else {
      ++s.count_unconstrained;
    }
    Vector diff = r.result.estimate;
    for (std::size_t i = 0; i < diff.size(); ++i) {
      diff[i] -= r.result.true_params[i];
    }
    s.mre_beta += norm2(diff) / norm2(r.result.true_params);
    if (r.result.sigma2_true > 0.0) {
      s.mre_sigma2 += std::abs(r.result.sigma2_hat - r.result.sigma2_true) /
                      r.result.sigma2_true;
    } else {
      s.mre_sigma2 += std::abs(r.result.sigma2_hat);
    }
  }
  if (used > 0) {
    s.mre_beta /= static_cast<double>(used);
    s.mre_sigma2 /= static_cast<double>(used);
  }
  return s;
}

Table2Summary run_table2(const SimulationConfig& config,
                         std::optional<TrueModel> fixed) {
  config.validate();
  Table2Summary summary;
  if (fixed) {
    if (fixed->coefficients.size() != 3 * config.p() + 2) {
      throw std::invalid_argument(
          "fixed model has the wrong number of coefficients for this config");
    }
    summary.model = *fixed;
  } else {
    // Dedicated substream outside the repetition index range.
    SplitMix64 rng = SplitMix64::substream(config.seed, ~0ull);
    summary.model = draw_model(config, rng);
  }

  std::vector<RepOutcome> reps(config.reps);
  parallel_for(config.reps, [&](std::size_t k) {
    reps[k] = run_repetition(config, summary.model, k);
  });

  const std::size_t dim = summary.model.coefficients.size();
  Vector mean_est(dim, 0.0), mean_var(dim, 0.0);
  std::vector<Vector> estimates;
  estimates.reserve(config.reps);
  for (const RepOutcome& r : reps) {
    if (!r.ok) {
      ++summary.skipped;
      continue;
    }
    estimates.push_back(r.result.estimate);
    for (std::size_t i = 0; i < dim; ++i) {
      mean_est[i] += r.result.estimate[i];
      mean_var[i] += r.estimated_variances[i];
    }
  }
  const std::size_t used = estimates.size();
  if (used == 0) return summary;
  for (std::size_t i = 0; i < dim; ++i) {
    mean_est[i] /= static_cast<double>(used);
    mean_var[i] /= static_cast<double>(used);
  }

  const std::vector<std::string> names = coefficient_names(config.p());
  summary.rows.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double var = 0.0;
    for (const Vector& e : estimates) {
      var += (e[i] - mean_est[i]) * (e[i] - mean_est[i]);
    }
    var = used > 1 ? var / static_cast<double>(used - 1) : 0.0;
    summary.rows[i] = {names[i], summary.model.coefficients[i], mean_est[i],
                       mean_var[i], var};
  }
  return summary;
}

Table3Summary run_table3(const SimulationConfig& config, std::size_t train_n) {
  if (train_n < 20 || train_n % 4 != 0) {
    throw std::invalid_argument("train_n must be >= 20 and divisible by 4");
  }
  SimulationConfig train_cfg = config;
  train_cfg.n = train_n;
  train_cfg.validate();
  const bool with_m = config.p() == 1;

  struct RepMse {
    MseTriple cone, ccrm, m;
    bool ok = false;
  };
  std::vector<RepMse> reps(config.reps);

  parallel_for(config.reps, [&](std::size_t k) {
    SplitMix64 rng = SplitMix64::substream(config.seed, k);
    const TrueModel model = draw_model(train_cfg, rng);
    const GeneratedData train = generate_from(train_cfg, model, rng);
    SimulationConfig holdout_cfg = train_cfg;
    holdout_cfg.n = train_n / 4;
    const GeneratedData holdout = generate_from(holdout_cfg, model, rng);

    RepMse rm;
    try {
      const bool assumption2 = all_range_cross_cov_positive(train.data);
      const FittedModel cone = assumption2 ? fit_unconstrained(train.data)
                                           : fit_constrained(train.data);
      const CcrmFit ccrm = fit_ccrm(train.data);
      MModelFit m;
      if (with_m) m = fit_m_model(train.data);

      const std::size_t hn = holdout.data.n();
      const std::size_t p = holdout.data.p();
      std::vector<Interval> actual(hn);
      std::vector<Interval> pc(hn), pr(hn), pm(hn);
      std::vector<Interval> row(p);
      for (std::size_t i = 0; i < hn; ++i) {
        actual[i] = holdout.data.outcome(i);
        for (std::size_t j = 0; j < p; ++j) row[j] = holdout.data.predictor(i, j);
        pc[i] = predict(cone, row).value;
        pr[i] = predict_baseline(ccrm, row).value;
        if (with_m) pm[i] = predict_baseline(m, row[0]).value;
      }
      rm.cone = interval_mse(pc, actual);
      rm.ccrm = interval_mse(pr, actual);
      if (with_m) rm.m = interval_mse(pm, actual);
      rm.ok = true;
    } catch (const SingularMatrixError&) {
    } catch (const std::runtime_error&) {
    }
    reps[k] = rm;
  });

  Table3Summary s;
  MseTriple cone, ccrm, m;
  std::size_t used = 0;
  for (const RepMse& r : reps) {
    if (!r.ok) {
      ++s.skipped;
      continue;
    }
    ++used;
    cone.msec += r.cone.msec; cone.mser += r.cone.mser; cone.msei += r.cone.msei;
    ccrm.msec += r.ccrm.msec; ccrm.mser += r.ccrm.mser; ccrm.msei += r.ccrm.msei;
    if (with_m) {
      m.msec += r.m.msec; m.mser += r.m.mser; m.msei += r.m.msei;
    }
  }
  const double denom = used > 0 ? static_cast<double>(used) : 1.0;
  if (with_m) {
    s.rows.push_back({"m", m.msec / denom, m.mser / denom, m.msei / denom});
  }
  s.rows.push_back(
      {"ccrm", ccrm.msec / denom, ccrm.mser / denom, ccrm.msei / denom});
  s.rows.push_back(
      {"cone", cone.msec / denom, cone.mser / denom, cone.msei / denom});
  return s;
}

}  // namespace ivreg
