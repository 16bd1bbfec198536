#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ivreg/baselines.hpp"
#include "ivreg/metrics.hpp"
#include "ivreg/regression.hpp"

namespace ivreg {

enum class ModelKind { Cone, Ccrm, MModel };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

// Serializable fit summary: everything cmd_predict needs to reproduce
// predictions, plus the diagnostics a reader wants to see.
struct ModelReport {
  ModelKind kind = ModelKind::Cone;
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<std::string> predictor_names;

  // Cone-affine fit (coefficients + stderr in design order).
  std::optional<FittedModel> cone;
  Vector std_errors;
  std::string policy;  // auto / always / never

  std::optional<CcrmFit> ccrm;
  std::optional<MModelFit> m_model;

  // Cone diagnostics.
  bool assumption1_ok = true;
  bool assumption2_ok = true;
  double range_bound_min = 0.0;        // min of the Theorem-style bounds
  double range_bound_max_finite = 0.0;
  std::size_t range_bound_infinite = 0;  // rows with zero outcome range

  MseTriple in_sample;
  std::vector<std::string> warnings;

  std::string to_json_string() const;  // stable field names, 2-space indent
  static ModelReport from_json_string(const std::string& text);

  std::string to_text() const;  // human-readable parameter listing

  // Predict with whichever model the report carries.
  Prediction predict_row(std::span<const Interval> predictors) const;
};

}  // namespace ivreg
