#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ptw/instance.hpp"
#include "ptw/model.hpp"

using namespace ptw;

TEST_CASE("distance matches the profile rules") {
  CHECK(distance(Point::big(2.0), Point::big(2.0)) == 0.0);
  CHECK(distance(Point::big(1.5), Point::small(0.5)) == 2.0);
  CHECK(distance(Point::small(3.0), Point::junction()) == 3.0);
  CHECK(distance(Point::big(0.25), Point::big(1.0)) == 0.75);
}

TEST_CASE("distance is a metric on a point grid") {
  std::vector<Point> pts{Point::junction()};
  for (double s : {0.25, 0.5, 1.0, 1.75, 3.0, 7.5}) {
    pts.push_back(Point::big(s));
    pts.push_back(Point::small(s));
  }
  for (const auto& p : pts)
    for (const auto& q : pts) {
      CHECK(distance(p, q) == distance(q, p));
      CHECK(distance(p, q) >= 0.0);
      for (const auto& r : pts) CHECK(distance(p, q) <= distance(p, r) + distance(r, q) + 1e-15);
    }
}

TEST_CASE("norm_of is 1 + distance to the junction") {
  CHECK(norm_of(Point::junction()) == 1.0);
  CHECK(norm_of(Point::big(1.0)) == 2.0);
  CHECK(norm_of(Point::small(7.0)) == 8.0);
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const Point p{rng.u01() < 0.5 ? EndTag::BigEnd : EndTag::SmallEnd, rng.uniform(0.0, 8.0)};
    CHECK(norm_of(p) >= 1.0);
    CHECK(norm_of(p) == 1.0 + distance(p, Point::junction()));
  }
}

TEST_CASE("ball volume model cases") {
  const Params params;
  CHECK(ball_volume(Point::big(3.0), 0.5, params) == doctest::Approx(0.0625));
  CHECK(ball_volume(Point::small(10.0), 5.0, params) == doctest::Approx(125.0));
  CHECK(ball_volume(Point::small(2.0), 8.0, params) == doctest::Approx(4096.0));
}

TEST_CASE("doubling fails on the small end with exponent m - n") {
  const Params params;
  for (double r : {2.0, 4.0, 8.0, 16.0}) {
    const Point x = Point::small(r);
    const double ratio = ball_volume(x, 2.0 * r, params) / ball_volume(x, r, params);
    CHECK(ratio == doctest::Approx(std::pow(2.0, params.m) * std::pow(r, params.m - params.n)));
  }
}

TEST_CASE("restrict partitions a measure by end") {
  const Params params;
  const Instance inst = generate(3, 24, 16, params);
  const auto big = restrict_to(inst.sigma, EndTag::BigEnd);
  const auto small = restrict_to(inst.sigma, EndTag::SmallEnd);
  const auto junc = restrict_to(inst.sigma, EndTag::Junction);
  CHECK(big.atoms.size() + small.atoms.size() + junc.atoms.size() == inst.sigma.atoms.size());
  CHECK(big.mass() + small.mass() + junc.mass() ==
        doctest::Approx(inst.sigma.mass()).epsilon(1e-14));
  for (const auto& a : big.atoms) CHECK(a.x.end == EndTag::BigEnd);

  const DiscreteMeasure empty;
  CHECK(restrict_to(empty, EndTag::BigEnd).atoms.empty());
  DiscreteMeasure small_only;
  small_only.atoms.push_back({Point::small(1.0), 1.0});
  CHECK(restrict_to(small_only, EndTag::BigEnd).atoms.empty());
}

TEST_CASE("measure validation rejects bad atoms") {
  DiscreteMeasure bad;
  bad.atoms.push_back({Point::big(1.0), -1.0});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  DiscreteMeasure dup;
  dup.atoms.push_back({Point::big(1.0), 1.0});
  dup.atoms.push_back({Point::big(1.0), 2.0});
  CHECK_THROWS_AS(dup.validate(), std::invalid_argument);

  UpperHalfMeasure flat;
  flat.atoms.push_back({Point::big(1.0), 0.0, 1.0});
  CHECK_THROWS_AS(flat.validate(), std::invalid_argument);
}

TEST_CASE("params validation") {
  Params p;
  CHECK_NOTHROW(p.validate());
  p.extent = 3.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = Params{};
  p.n = 2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = Params{};
  p.m = 3;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
