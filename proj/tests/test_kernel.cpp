#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ptw/instance.hpp"
#include "ptw/kernel.hpp"

using namespace ptw;

namespace {

const Params params;  // m=4, n=3

Point random_point(Rng& rng, bool allow_junction = true) {
  const double u = rng.u01();
  if (allow_junction && u < 0.1) return Point::junction();
  const EndTag end = u < 0.55 ? EndTag::BigEnd : EndTag::SmallEnd;
  return {end, rng.log_uniform(1.0 / 64, 8.0)};
}

}  // namespace

TEST_CASE("kernel case dispatch is total over tag pairs") {
  CHECK(classify(Point::junction(), Point::junction()) == KernelCase::KK);
  CHECK(classify(Point::big(1), Point::junction()) == KernelCase::MK);
  CHECK(classify(Point::junction(), Point::big(1)) == KernelCase::MK);
  CHECK(classify(Point::small(1), Point::junction()) == KernelCase::NK);
  CHECK(classify(Point::big(1), Point::small(1)) == KernelCase::MN);
  CHECK(classify(Point::small(1), Point::big(1)) == KernelCase::MN);
  CHECK(classify(Point::big(1), Point::big(2)) == KernelCase::MM);
  CHECK(classify(Point::small(1), Point::small(2)) == KernelCase::NN);
}

TEST_CASE("poisson frozen values") {
  // both on the small end, d = 0: t^-m + t^-n
  CHECK(poisson(params, 1.0, Point::small(2.0), Point::small(2.0)) == doctest::Approx(2.0));
  // both on the small end, d = 1: 1/2^5 + 1/2^4
  CHECK(poisson(params, 1.0, Point::small(2.0), Point::small(3.0)) ==
        doctest::Approx(0.09375).epsilon(1e-14));
  // both on the big end at s=1: |x| = |y| = 2, d = 0
  CHECK(poisson(params, 1.0, Point::big(1.0), Point::big(1.0)) ==
        doctest::Approx(1.0 + 1.0 / (4.0 * 4.0 * 625.0)).epsilon(1e-14));
}

TEST_CASE("piece frozen values") {
  // t/(t+d)^(m+1) at t=1, d=1
  CHECK(piece(params, PieceId::P11, 1.0, Point::big(1.0), Point::big(2.0)) ==
        doctest::Approx(0.03125).epsilon(1e-14));
  // far-field piece at |x| = |y| = 2: 1/(16 * 625)
  CHECK(piece(params, PieceId::P12, 1.0, Point::big(1.0), Point::big(1.0)) ==
        doctest::Approx(1e-4).epsilon(1e-14));
  // the 2,2 formula at d = 0, |y| = 2: (t/(t+d))^(n+1) / (t^n |y|^(m-2))
  CHECK(radial_term(1.0, 0.0, params.n) / ipow(2.0, params.m - 2) ==
        doctest::Approx(0.25).epsilon(1e-14));
  // and realised on the profile: x = small(1), y = big(1) has d = 2
  CHECK(piece(params, PieceId::P22, 1.0, Point::small(1.0), Point::big(1.0)) ==
        doctest::Approx(1.0 / (81.0 * 4.0)).epsilon(1e-14));
}

TEST_CASE("poisson is exactly symmetric") {
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const Point x = random_point(rng), y = random_point(rng);
    const double t = rng.log_uniform(1.0 / 64, 16.0);
    CHECK(poisson(params, t, x, y) == poisson(params, t, y, x));
  }
}

TEST_CASE("poisson is positive and moves continuously in t") {
  Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    const Point x = random_point(rng), y = random_point(rng);
    double prev = 0.0;
    for (double t = 0.25; t <= 4.0; t += 1.0 / 64) {
      const double v = poisson(params, t, x, y);
      CHECK(v > 0.0);
      if (prev > 0.0) CHECK(std::abs(v - prev) < 0.5 * std::max(v, prev));
      prev = v;
    }
  }
}

TEST_CASE("poisson decays in the distance") {
  for (double t : {0.25, 1.0, 4.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double d = 0.0; d <= 6.0; d += 0.125) {
      const double v = poisson(params, t, Point::small(1.0), Point::small(1.0 + d));
      CHECK(v <= prev * (1 + 1e-15));
      prev = v;
    }
  }
  for (int k : {params.n, params.m}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double d = 0.0; d <= 6.0; d += 0.125) {
      CHECK(radial_term(1.0, d, k) <= prev);
      prev = radial_term(1.0, d, k);
    }
  }
}

TEST_CASE("piece sums reproduce the kernel cases") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.log_uniform(1.0 / 32, 8.0);
    const Point xb = Point::big(rng.log_uniform(0.1, 8.0));
    const Point yb = Point::big(rng.log_uniform(0.1, 8.0));
    const Point xs = Point::small(rng.log_uniform(0.1, 8.0));
    const Point ys = Point::small(rng.log_uniform(0.1, 8.0));

    // big/big: P11 + P12
    CHECK(poisson(params, t, xb, yb) ==
          piece(params, PieceId::P11, t, xb, yb) + piece(params, PieceId::P12, t, xb, yb));

    // small/small: P11 plus the n-exponent radial term
    CHECK(poisson(params, t, xs, ys) ==
          doctest::Approx(piece(params, PieceId::P11, t, xs, ys) +
                          radial_term(t, distance(xs, ys), params.n))
              .epsilon(1e-15));

    // big/small: the average of the two slot assignments of the norm terms
    const double d = distance(xb, ys);
    const double direct = piece(params, PieceId::P11, t, xb, ys) +
                          piece(params, PieceId::P42, t, xb, ys) +
                          piece(params, PieceId::P43, t, xb, ys);
    const double mirrored = radial_term(t, d, params.m) +
                            radial_term(t, d, params.n) / ipow(norm_of(ys), params.m - 2) +
                            radial_term(t, d, params.m) / ipow(norm_of(xb), params.n - 2);
    CHECK(poisson(params, t, xb, ys) ==
          doctest::Approx(0.5 * (direct + mirrored)).epsilon(1e-14));

    // the 2,* pieces agree with the 4,* pieces under slot exchange
    CHECK(piece(params, PieceId::P22, t, xs, yb) == piece(params, PieceId::P42, t, yb, xs));
    CHECK(piece(params, PieceId::P23, t, xs, yb) == piece(params, PieceId::P43, t, yb, xs));
  }
}

TEST_CASE("pieces scale like t/l against their box-top value") {
  // under each piece's geometry (t <= l; distance or junction separation at
  // least l), piece(t) lies within a factor 2^(m+1) of (t/l) piece(l)
  Rng rng(29);
  const double c = ipow(2.0, params.m + 1);
  auto check_band = [&](double now, double top) {
    CHECK(now >= top / c * (1 - 1e-12));
    CHECK(now <= top * c * (1 + 1e-12));
  };
  for (int i = 0; i < 2000; ++i) {
    const double ell = std::ldexp(8.0, -rng.uniform_int(0, 6));
    const double t = rng.log_uniform(ell / 256, ell);
    {
      const Point x = Point::big(rng.log_uniform(0.05, 8.0));
      const Point y = Point::big(std::min(8.0, x.s + rng.log_uniform(ell, 8.0)));
      if (distance(x, y) >= ell)
        check_band(piece(params, PieceId::P11, t, x, y),
                   (t / ell) * piece(params, PieceId::P11, ell, x, y));
    }
    {
      const Point x = Point::big(ell + rng.log_uniform(ell / 2, 4.0));
      const Point y = Point::small(rng.log_uniform(0.05, 8.0));
      check_band(piece(params, PieceId::P42, t, x, y),
                 (t / ell) * piece(params, PieceId::P42, ell, x, y));
    }
    {
      const Point x = Point::small(ell + rng.log_uniform(ell / 2, 4.0));
      const Point y = Point::big(rng.log_uniform(0.05, 8.0));
      check_band(piece(params, PieceId::P22, t, x, y),
                 (t / ell) * piece(params, PieceId::P22, ell, x, y));
    }
    {
      const Point x = Point::big(ell + rng.log_uniform(ell / 2, 4.0));
      const Point y = Point::big(rng.log_uniform(0.05, 8.0));
      check_band(piece(params, PieceId::P12, t, x, y),
                 (t / ell) * piece(params, PieceId::P12, ell, x, y));
    }
  }
}

TEST_CASE("kernel domain errors") {
  CHECK_THROWS_AS(poisson(params, 0.0, Point::big(1), Point::big(2)), std::invalid_argument);
  CHECK_THROWS_AS(poisson(params, -1.0, Point::big(1), Point::big(2)), std::invalid_argument);
  CHECK_THROWS_AS(piece(params, PieceId::P12, 1.0, Point::big(1), Point::small(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(piece(params, PieceId::P22, 1.0, Point::big(1), Point::big(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(piece(params, PieceId::P42, 1.0, Point::small(1), Point::small(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(piece(params, PieceId::P43, 1.0, Point::big(1), Point::big(2)),
                  std::invalid_argument);
}

TEST_CASE("poisson summands match the case structure") {
  CHECK(poisson_summands(params, 1.0, Point::small(1), Point::small(2)).size() == 2);
  CHECK(poisson_summands(params, 1.0, Point::big(1), Point::small(2)).size() == 3);
  const auto s = poisson_summands(params, 1.0, Point::big(1), Point::big(1));
  double tot = 0.0;
  for (double v : s) tot += v;
  CHECK(tot == poisson(params, 1.0, Point::big(1), Point::big(1)));
}
