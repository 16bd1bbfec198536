#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ivreg {

// Factorization failure (non-SPD or rank-deficient input). `pivot` is the
// zero-based index of the factorization step that failed.
class SingularMatrixError : public std::runtime_error {
public:
  SingularMatrixError(const std::string& what, std::size_t pivot)
      : std::runtime_error(what), pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

private:
  std::size_t pivot_;
};

// The image of a ray under an affine operator is vertical in (L,U)
// coordinates; there is no finite slope to report.
class SingularRayError : public std::domain_error {
public:
  explicit SingularRayError(double denominator)
      : std::domain_error("ray image is vertical: alpha + beta*a is zero"),
        denominator_(denominator) {}

  double denominator() const noexcept { return denominator_; }

private:
  double denominator_;
};

// CSV ingestion failure. `row` is 1-based counting the header as row 1;
// `column` names the offending column when known.
class CsvError : public std::runtime_error {
public:
  CsvError(const std::string& what, std::size_t row, std::string column)
      : std::runtime_error(what), row_(row), column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

private:
  std::size_t row_;
  std::string column_;
};

}  // namespace ivreg
