#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ivreg/errors.hpp"
#include "ivreg/linalg.hpp"
#include "ivreg/rng.hpp"
#include "ivreg/stats.hpp"

using ivreg::Matrix;
using ivreg::SplitMix64;
using ivreg::Vector;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("matmul basics") {
  const Matrix a = from_rows({{1, 2}, {3, 4}});
  const Matrix i2 = Matrix::identity(2);
  const Matrix ia = ivreg::matmul(i2, a);
  CHECK(ia(0, 0) == 1);
  CHECK(ia(1, 1) == 4);

  const Matrix b = from_rows({{0}, {1}});
  const Matrix ab = ivreg::matmul(a, b);
  CHECK(ab.rows() == 2);
  CHECK(ab.cols() == 1);
  CHECK(ab(0, 0) == 2);
  CHECK(ab(1, 0) == 4);

  // empty contraction: 1x0 times 0x1 is a 1x1 zero matrix
  const Matrix e1(1, 0), e2(0, 1);
  const Matrix z = ivreg::matmul(e1, e2);
  CHECK(z.rows() == 1);
  CHECK(z.cols() == 1);
  CHECK(z(0, 0) == 0.0);

  CHECK_THROWS_AS(ivreg::matmul(a, e2), std::invalid_argument);
}

TEST_CASE("solve_spd basics") {
  const Matrix i3 = Matrix::identity(3);
  const Vector b{1, -2, 3};
  CHECK(ivreg::solve_spd(i3, b) == b);

  const Matrix d = from_rows({{4, 0}, {0, 9}});
  const Vector x = ivreg::solve_spd(d, {8, 27});
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(3.0));

  const Matrix rank1 = from_rows({{1, 1}, {1, 1}});
  try {
    ivreg::solve_spd(rank1, {1, 1});
    FAIL("expected SingularMatrixError");
  } catch (const ivreg::SingularMatrixError& e) {
    CHECK(e.pivot() == 1);
  }
}

TEST_CASE("inverse_spd basics") {
  const Matrix i2 = Matrix::identity(2);
  const Matrix inv_i = ivreg::inverse_spd(i2);
  CHECK(inv_i(0, 0) == doctest::Approx(1.0));
  CHECK(inv_i(0, 1) == doctest::Approx(0.0));

  const Matrix d = from_rows({{2, 0}, {0, 4}});
  const Matrix invd = ivreg::inverse_spd(d);
  CHECK(invd(0, 0) == doctest::Approx(0.5));
  CHECK(invd(1, 1) == doctest::Approx(0.25));

  const Matrix a = from_rows({{4, 2}, {2, 2}});
  const Matrix inva = ivreg::inverse_spd(a);
  CHECK(inva(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(inva(0, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(inva(1, 0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(inva(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank_full basics") {
  CHECK(ivreg::rank_full(Matrix::identity(3), 1e-10));
  const Matrix rep = from_rows({{1, 1, 2}, {2, 2, 1}, {3, 3, 5}});
  CHECK_FALSE(ivreg::rank_full(rep, 1e-10));
  const Matrix nearly = from_rows({{1, 1}, {1, 1 + 1e-14}});
  CHECK_FALSE(ivreg::rank_full(nearly, 1e-10));
}

TEST_CASE("random SPD solve and double inverse") {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + (rng.next() % 6);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-1, 1);
    }
    Matrix a = ivreg::matmul(ivreg::transpose(m), m);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5;

    Vector b(n);
    for (double& v : b) v = rng.uniform(-5, 5);
    const Vector x = ivreg::solve_spd(a, b);
    const Vector back = ivreg::matvec(a, x);
    double bmax = 0.0, errmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      bmax = std::max(bmax, std::abs(b[i]));
      errmax = std::max(errmax, std::abs(back[i] - b[i]));
    }
    CHECK(errmax <= 1e-8 * (1.0 + bmax));

    const Matrix twice = ivreg::inverse_spd(ivreg::inverse_spd(a));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(twice(i, j) == doctest::Approx(a(i, j)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("condition estimate flags near-singular systems") {
  CHECK(ivreg::spd_condition_estimate(Matrix::identity(4)) ==
        doctest::Approx(1.0));
  Matrix bad = Matrix::identity(2);
  bad(1, 1) = 1e-14;
  CHECK(ivreg::spd_condition_estimate(bad) > 1e12);
}

// Frozen against scipy.stats / scipy.special.
TEST_CASE("incomplete beta and correlation p-values") {
  CHECK(ivreg::betainc_reg(0.5, 9.0, 0.25) ==
        doctest::Approx(0.9752304411958902).epsilon(1e-12));
  CHECK(ivreg::betainc_reg(2.0, 3.0, 0.5) ==
        doctest::Approx(0.6875).epsilon(1e-12));
  CHECK(ivreg::betainc_reg(5.5, 1.5, 0.9) ==
        doctest::Approx(0.7507799220750363).epsilon(1e-12));

  CHECK(ivreg::correlation_pvalue(0.5, 20) ==
        doctest::Approx(0.024769558804109703).epsilon(1e-10));
  CHECK(ivreg::correlation_pvalue(0.1, 50) ==
        doctest::Approx(0.48959255176117666).epsilon(1e-10));
  CHECK(ivreg::correlation_pvalue(0.9, 10) ==
        doctest::Approx(0.00038715624999999926).epsilon(1e-9));
  CHECK(ivreg::correlation_pvalue(-0.44, 30) ==
        doctest::Approx(0.014968031731163359).epsilon(1e-10));
  CHECK(ivreg::correlation_pvalue(1.0, 30) == 0.0);
  CHECK(ivreg::correlation_pvalue(0.5, 2) == 1.0);
}
