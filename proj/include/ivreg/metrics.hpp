#pragma once

#include <span>
#include <stdexcept>

#include "ivreg/interval.hpp"

namespace ivreg {

// Holdout mean squared errors of predicted centers, radii (half-ranges), and
// their sum.
struct MseTriple {
  double msec = 0.0;
  double mser = 0.0;
  double msei = 0.0;
};

inline MseTriple interval_mse(std::span<const Interval> predicted,
                              std::span<const Interval> actual) {
  if (predicted.size() != actual.size() || predicted.empty()) {
    throw std::invalid_argument("interval_mse: size mismatch or empty");
  }
  MseTriple m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double dc = predicted[i].center() - actual[i].center();
    const double dr = 0.5 * (predicted[i].range() - actual[i].range());
    m.msec += dc * dc;
    m.mser += dr * dr;
  }
  m.msec /= static_cast<double>(predicted.size());
  m.mser /= static_cast<double>(predicted.size());
  m.msei = m.msec + m.mser;
  return m;
}

}  // namespace ivreg
