#include "ivreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ivreg/errors.hpp"

namespace ivreg {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions do not match");
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument("matvec: dimensions do not match");
  }
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

// Lower-triangular Cholesky factor; throws on non-positive pivot.
Matrix cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("cholesky: matrix must be square");
  }
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw SingularMatrixError("matrix is not positive definite", j);
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Vector solve_with_factor(const Matrix& l, const Vector& b) {
  const std::size_t n = l.rows();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

}  // namespace

Vector solve_spd(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("solve_spd: dimensions do not match");
  }
  return solve_with_factor(cholesky(a), b);
}

Matrix inverse_spd(const Matrix& a) {
  const Matrix l = cholesky(a);
  const std::size_t n = a.rows();
  Matrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    Vector col = solve_with_factor(l, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return inv;
}

double spd_condition_estimate(const Matrix& a) {
  const Matrix l = cholesky(a);
  double lo = l(0, 0), hi = l(0, 0);
  for (std::size_t i = 1; i < a.rows(); ++i) {
    lo = std::min(lo, l(i, i));
    hi = std::max(hi, l(i, i));
  }
  const double r = hi / lo;
  return r * r;
}

bool rank_full(const Matrix& a, double tolerance) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("rank_full: tolerance must be positive");
  }
  const std::size_t steps = std::min(a.rows(), a.cols());
  if (steps == 0) return true;  // nothing to be deficient

  Matrix u = a;
  double max_pivot = 0.0, min_pivot = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < u.rows(); ++i) {
      if (std::abs(u(i, k)) > std::abs(u(piv, k))) piv = i;
    }
    const double pv = std::abs(u(piv, k));
    if (k == 0) {
      max_pivot = min_pivot = pv;
    } else {
      max_pivot = std::max(max_pivot, pv);
      min_pivot = std::min(min_pivot, pv);
    }
    if (pv == 0.0) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < u.cols(); ++j) {
        std::swap(u(k, j), u(piv, j));
      }
    }
    for (std::size_t i = k + 1; i < u.rows(); ++i) {
      const double f = u(i, k) / u(k, k);
      for (std::size_t j = k; j < u.cols(); ++j) {
        u(i, j) -= f * u(k, j);
      }
    }
  }
  return min_pivot > tolerance * max_pivot;
}

}  // namespace ivreg
