#pragma once

#include <string>
#include <vector>

#include "ivreg/interval.hpp"
#include "ivreg/regression.hpp"

namespace ivreg {

enum class CsvSchema { LowerUpper, CenterRange };

// Parsed interval CSV. Predictor variables come from header pairs
// <var>_lower,<var>_upper (or <var>_center,<var>_range); the outcome variable
// is named y and may be absent (prediction inputs). Mixed parameterizations
// are rejected.
struct CsvContents {
  std::size_t n = 0;
  std::size_t p = 0;
  CsvSchema schema = CsvSchema::LowerUpper;
  bool has_outcome = false;
  std::vector<Interval> predictors;  // row-major n*p
  std::vector<Interval> outcome;     // empty unless has_outcome
  std::vector<std::string> predictor_names;

  IntervalDataset to_dataset() const;  // throws when the outcome is missing
};

CsvContents read_interval_csv(const std::string& path);

// Number formatting used for all CSV emission: round-trip exact for doubles.
std::string format_double(double v);

void write_predictions_csv(const std::string& path,
                           const std::vector<Prediction>& predictions);

}  // namespace ivreg
