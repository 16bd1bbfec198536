#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ivreg/interval.hpp"
#include "ivreg/rng.hpp"

using ivreg::Interval;
using ivreg::IntervalDataset;
using ivreg::SplitMix64;

TEST_CASE("from_center_range basic values") {
  CHECK(Interval::from_center_range(1.0, 2.0) == Interval(0.0, 2.0));
  CHECK(Interval::from_center_range(5.0, 0.0) == Interval(5.0, 5.0));
  CHECK(Interval::from_center_range(0.0, 4.0) == Interval(-2.0, 2.0));
  CHECK_THROWS_AS(Interval::from_center_range(0.0, -1.0), std::domain_error);
}

TEST_CASE("constructor snaps tiny inversions and rejects large ones") {
  const Interval snapped(1.0 + 5e-13, 1.0);
  CHECK(snapped.lower() == snapped.upper());
  CHECK_THROWS_AS(Interval(2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(Interval(0.0, std::nan("")), std::domain_error);
}

TEST_CASE("center/range round trip") {
  SplitMix64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const double c = rng.uniform(-50.0, 50.0);
    const double r = rng.uniform(0.0, 20.0);
    const Interval x = Interval::from_center_range(c, r);
    CHECK(x.center() == doctest::Approx(c).epsilon(1e-12));
    CHECK(x.range() == doctest::Approx(r).epsilon(1e-12));
    const Interval y(x.lower(), x.upper());
    CHECK(y == x);
  }
}

TEST_CASE("delta metric basic values") {
  CHECK(ivreg::delta(Interval(1, 3), Interval(1, 3)) == 0.0);
  CHECK(ivreg::delta(Interval(0, 2), Interval(0, 0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(ivreg::delta(Interval(0, 0), Interval(2, 2)) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("delta is a metric on sampled triples") {
  SplitMix64 rng(11);
  auto rand_interval = [&]() {
    const double a = rng.uniform(-10.0, 10.0);
    return Interval(a, a + rng.uniform(0.0, 8.0));
  };
  for (int k = 0; k < 2000; ++k) {
    const Interval a = rand_interval(), b = rand_interval(),
                   c = rand_interval();
    CHECK(ivreg::delta(a, b) == doctest::Approx(ivreg::delta(b, a)));
    CHECK(ivreg::delta(a, c) <= ivreg::delta(a, b) + ivreg::delta(b, c) + 1e-12);
    CHECK(ivreg::delta(a, a) == 0.0);
  }
}

TEST_CASE("collinear intervals on U = 2L + 1") {
  const std::vector<Interval> pts{Interval(0, 1), Interval(1, 3),
                                  Interval(2, 5)};
  const auto res = ivreg::is_collinear(pts, 1e-9);
  CHECK(res.collinear);
  CHECK_FALSE(res.vertical);
  CHECK(res.a == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.b == doctest::Approx(1.0).epsilon(1e-12));
  // center/range form: c = 2(a-1)/(a+1), d = 2b/(a+1)
  CHECK(res.c == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(res.d == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  for (const Interval& x : pts) {
    CHECK(x.range() ==
          doctest::Approx(res.c * x.center() + res.d).epsilon(1e-12));
  }
}

TEST_CASE("vertical ray is collinear with the flag set") {
  const std::vector<Interval> pts{Interval(0, 1), Interval(0, 2)};
  const auto res = ivreg::is_collinear(pts, 1e-9);
  CHECK(res.collinear);
  CHECK(res.vertical);
  CHECK(res.c == doctest::Approx(2.0));
}

TEST_CASE("off-ray point breaks collinearity at tight tolerance") {
  const std::vector<Interval> pts{Interval(0, 1), Interval(1, 3),
                                  Interval(2, 6)};
  const auto res = ivreg::is_collinear(pts, 1e-9);
  CHECK_FALSE(res.collinear);
  CHECK(res.max_residual > 0.1);
}

TEST_CASE("is_collinear argument validation") {
  const std::vector<Interval> one{Interval(0, 1)};
  CHECK_THROWS_AS(ivreg::is_collinear(one, 1e-9), std::domain_error);
  const std::vector<Interval> two{Interval(0, 1), Interval(1, 2)};
  CHECK_THROWS_AS(ivreg::is_collinear(two, 0.0), std::domain_error);
}

TEST_CASE("definition-1 and definition-2 collinearity agree") {
  SplitMix64 rng(23);
  for (int k = 0; k < 200; ++k) {
    // Random ray with a != -1 and points kept inside the cone.
    const double a = rng.uniform(-0.9, 3.0);
    const double b = rng.uniform(0.5, 4.0);
    std::vector<Interval> pts;
    for (int i = 0; i < 5; ++i) {
      double lo;
      if (a > 1.0) {
        lo = -b / (a - 1.0) + rng.uniform(0.0, 5.0);
      } else if (a < 1.0) {
        lo = -b / (a - 1.0) - rng.uniform(0.0, 5.0) - b;
      } else {
        lo = rng.uniform(-5.0, 5.0);
      }
      const double up = a * lo + b;
      if (up < lo) continue;
      pts.emplace_back(lo, up);
    }
    if (pts.size() < 3) continue;
    const auto res = ivreg::is_collinear(pts, 1e-8);
    REQUIRE(res.collinear);
    if (res.vertical) continue;
    // Every point satisfies the converted center/range relation.
    for (const Interval& x : pts) {
      CHECK(x.range() ==
            doctest::Approx(res.c * x.center() + res.d).epsilon(1e-8));
    }
  }
}

TEST_CASE("dataset validation") {
  std::vector<Interval> preds{Interval(0, 1), Interval(1, 2)};
  std::vector<Interval> out{Interval(0, 1), Interval(1, 2)};
  const IntervalDataset d(2, 1, preds, out);
  CHECK(d.n() == 2);
  CHECK(d.p() == 1);
  CHECK(d.predictor_names()[0] == "x1");
  CHECK_THROWS_AS(IntervalDataset(2, 2, preds, out), std::invalid_argument);
  CHECK_THROWS_AS(IntervalDataset(0, 1, {}, {}), std::invalid_argument);
}
