#pragma once

#include <cstddef>
#include <vector>

namespace ivreg {

using Vector = std::vector<double>;

// Small dense row-major matrix. All design matrices here are at most a few
// hundred rows by a dozen columns, so no blocking or sparsity.
class Matrix {
public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<double>& data() const noexcept { return data_; }

private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Vector matvec(const Matrix& a, const Vector& x);

// Solve A x = b for symmetric positive definite A via Cholesky. Throws
// SingularMatrixError (with the failing pivot index) when the factorization
// encounters a non-positive pivot.
Vector solve_spd(const Matrix& a, const Vector& b);

// Materialized inverse of an SPD matrix (used for covariance matrices only).
Matrix inverse_spd(const Matrix& a);

// Crude SPD condition estimate from the spread of Cholesky pivots.
double spd_condition_estimate(const Matrix& a);

// True iff all pivots of a partially pivoted LU exceed tol * largest pivot.
bool rank_full(const Matrix& a, double tolerance = 1e-10);

}  // namespace ivreg
