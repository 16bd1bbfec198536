#include "ivreg/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ivreg {

using nlohmann::json;

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Cone: return "cone";
    case ModelKind::Ccrm: return "ccrm";
    default: return "m";
  }
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "cone") return ModelKind::Cone;
  if (s == "ccrm") return ModelKind::Ccrm;
  if (s == "m") return ModelKind::MModel;
  throw std::invalid_argument("unknown model kind '" + s + "'");
}

std::string ModelReport::to_json_string() const {
  json j;
  j["model"] = to_string(kind);
  j["n"] = n;
  j["p"] = p;
  j["predictor_names"] = predictor_names;
  if (kind == ModelKind::Cone && cone) {
    json c;
    c["eta"] = cone->eta;
    c["alpha"] = cone->alpha;
    c["beta"] = cone->beta;
    c["theta"] = cone->theta;
    c["gamma"] = cone->gamma;
    j["coefficients"] = c;
    j["sigma2_hat"] = cone->sigma2_hat;
    j["std_errors"] = std_errors;
    j["constrained"] = cone->constrained;
    j["policy"] = policy;
    json d;
    d["assumption1_ok"] = assumption1_ok;
    d["assumption2_ok"] = assumption2_ok;
    d["range_bound_min"] = range_bound_min;
    d["range_bound_max_finite"] = range_bound_max_finite;
    d["range_bound_infinite_rows"] = range_bound_infinite;
    d["ill_conditioned"] = cone->ill_conditioned;
    j["diagnostics"] = d;
  } else if (kind == ModelKind::Ccrm && ccrm) {
    json c;
    c["beta0_center"] = ccrm->beta0_c;
    c["beta1_center"] = ccrm->beta1_c;
    c["beta0_range"] = ccrm->beta0_r;
    c["beta1_range"] = ccrm->beta1_r;
    j["coefficients"] = c;
    j["resid_var_center"] = ccrm->resid_var_c;
    j["resid_var_range"] = ccrm->resid_var_r;
  } else if (kind == ModelKind::MModel && m_model) {
    json c;
    c["slope_center"] = m_model->slope_c;
    c["intercept_center"] = m_model->intercept_c;
    c["abs_slope_range"] = m_model->abs_slope_r;
    c["spr_eps_mean"] = m_model->spr_eps_mean;
    j["coefficients"] = c;
  }
  json fitj;
  fitj["msec"] = in_sample.msec;
  fitj["mser"] = in_sample.mser;
  fitj["msei"] = in_sample.msei;
  j["in_sample"] = fitj;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

ModelReport ModelReport::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ModelReport r;
  r.kind = model_kind_from_string(j.at("model").get<std::string>());
  r.n = j.at("n").get<std::size_t>();
  r.p = j.at("p").get<std::size_t>();
  r.predictor_names = j.at("predictor_names").get<std::vector<std::string>>();
  const json& c = j.at("coefficients");
  if (r.kind == ModelKind::Cone) {
    FittedModel m;
    m.p = r.p;
    m.eta = c.at("eta").get<double>();
    m.alpha = c.at("alpha").get<Vector>();
    m.beta = c.at("beta").get<Vector>();
    m.theta = c.at("theta").get<double>();
    m.gamma = c.at("gamma").get<Vector>();
    m.sigma2_hat = j.at("sigma2_hat").get<double>();
    m.constrained = j.at("constrained").get<bool>();
    if (j.contains("diagnostics")) {
      const json& d = j["diagnostics"];
      r.assumption1_ok = d.value("assumption1_ok", true);
      r.assumption2_ok = d.value("assumption2_ok", true);
      r.range_bound_min = d.value("range_bound_min", 0.0);
      r.range_bound_max_finite = d.value("range_bound_max_finite", 0.0);
      r.range_bound_infinite =
          d.value("range_bound_infinite_rows", std::size_t{0});
      m.ill_conditioned = d.value("ill_conditioned", false);
    }
    r.cone = std::move(m);
    r.std_errors = j.at("std_errors").get<Vector>();
    r.policy = j.value("policy", "auto");
  } else if (r.kind == ModelKind::Ccrm) {
    CcrmFit f;
    f.beta0_c = c.at("beta0_center").get<double>();
    f.beta1_c = c.at("beta1_center").get<Vector>();
    f.beta0_r = c.at("beta0_range").get<double>();
    f.beta1_r = c.at("beta1_range").get<Vector>();
    f.resid_var_c = j.value("resid_var_center", 0.0);
    f.resid_var_r = j.value("resid_var_range", 0.0);
    r.ccrm = f;
  } else {
    MModelFit f;
    f.slope_c = c.at("slope_center").get<double>();
    f.intercept_c = c.at("intercept_center").get<double>();
    f.abs_slope_r = c.at("abs_slope_range").get<double>();
    f.spr_eps_mean = c.at("spr_eps_mean").get<double>();
    r.m_model = f;
  }
  if (j.contains("in_sample")) {
    r.in_sample.msec = j["in_sample"].value("msec", 0.0);
    r.in_sample.mser = j["in_sample"].value("mser", 0.0);
    r.in_sample.msei = j["in_sample"].value("msei", 0.0);
  }
  if (j.contains("warnings")) {
    r.warnings = j["warnings"].get<std::vector<std::string>>();
  }
  return r;
}

Prediction ModelReport::predict_row(std::span<const Interval> preds) const {
  if (preds.size() != p) {
    throw std::invalid_argument("predict: report expects " + std::to_string(p) +
                                " predictors, got " +
                                std::to_string(preds.size()));
  }
  switch (kind) {
    case ModelKind::Cone:
      return predict(*cone, preds);
    case ModelKind::Ccrm:
      return predict_baseline(*ccrm, preds);
    default:
      return predict_baseline(*m_model, preds[0]);
  }
}

namespace {

// Shortest round-trip representation: the text report is as lossless as the
// JSON without trailing digit noise.
std::string fmt(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string ModelReport::to_text() const {
  std::ostringstream os;
  os << "model: " << to_string(kind);
  if (kind == ModelKind::Cone && cone) {
    os << (cone->constrained ? " (constrained)" : " (unconstrained)");
  }
  os << "\nn = " << n << ", p = " << p << "\n";
  if (kind == ModelKind::Cone && cone) {
    const std::size_t k = 3 * p + 2;
    auto se = [&](std::size_t i) {
      return std_errors.size() == k ? "  (se " + fmt(std_errors[i]) + ")" : "";
    };
    os << "  eta    = " << fmt(cone->eta) << se(0) << "\n";
    for (std::size_t j = 0; j < p; ++j) {
      os << "  alpha_" << j + 1 << " = " << fmt(cone->alpha[j]) << se(1 + 2 * j)
         << "\n";
      os << "  beta_" << j + 1 << "  = " << fmt(cone->beta[j]) << se(2 + 2 * j)
         << "\n";
    }
    os << "  theta  = " << fmt(cone->theta) << se(2 * p + 1) << "\n";
    for (std::size_t j = 0; j < p; ++j) {
      os << "  gamma_" << j + 1 << " = " << fmt(cone->gamma[j])
         << se(2 * p + 2 + j) << "\n";
    }
    os << "  sigma2_hat = " << fmt(cone->sigma2_hat) << "\n";
    os << "diagnostics: assumption1 " << (assumption1_ok ? "ok" : "VIOLATED")
       << ", assumption2 " << (assumption2_ok ? "ok" : "VIOLATED") << "\n";
    os << "  negative-range bound min " << fmt(range_bound_min)
       << ", max finite " << fmt(range_bound_max_finite) << ", zero-range rows "
       << range_bound_infinite << "\n";
  } else if (kind == ModelKind::Ccrm && ccrm) {
    os << "  beta0_center = " << fmt(ccrm->beta0_c) << "\n";
    for (std::size_t j = 0; j < ccrm->beta1_c.size(); ++j) {
      os << "  beta1_center[" << predictor_names[j]
         << "] = " << fmt(ccrm->beta1_c[j]) << "\n";
    }
    os << "  beta0_range  = " << fmt(ccrm->beta0_r) << "\n";
    for (std::size_t j = 0; j < ccrm->beta1_r.size(); ++j) {
      os << "  beta1_range[" << predictor_names[j]
         << "] = " << fmt(ccrm->beta1_r[j]) << "\n";
    }
    os << "  resid_var_center = " << fmt(ccrm->resid_var_c)
       << ", resid_var_range = " << fmt(ccrm->resid_var_r) << "\n";
  } else if (kind == ModelKind::MModel && m_model) {
    os << "  slope_center    = " << fmt(m_model->slope_c) << "\n";
    os << "  intercept_center= " << fmt(m_model->intercept_c) << "\n";
    os << "  abs_slope_range = " << fmt(m_model->abs_slope_r) << "\n";
    os << "  spr_eps_mean    = " << fmt(m_model->spr_eps_mean) << "\n";
  }
  os << "in-sample: MSEC " << fmt(in_sample.msec) << ", MSER "
     << fmt(in_sample.mser) << ", MSEI " << fmt(in_sample.msei) << "\n";
  for (const std::string& w : warnings) {
    os << "warning: " << w << "\n";
  }
  return os.str();
}

}  // namespace ivreg
