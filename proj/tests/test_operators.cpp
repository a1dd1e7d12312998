#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ptw/instance.hpp"
#include "ptw/operators.hpp"
#include "ptw/reference.hpp"

using namespace ptw;

namespace {

const Params params;

Instance single_atom(const Point& y, double a, const Point& x, double t, double b) {
  Instance inst;
  inst.sigma.atoms.push_back({y, a});
  inst.mu.atoms.push_back({x, t, b});
  return inst;
}

}  // namespace

TEST_CASE("single-atom operator norm closed form") {
  const Instance inst = single_atom(Point::big(2.0), 3.0, Point::small(1.0), 0.5, 5.0);
  const OperatorMatrix op = assemble(params, inst.sigma, inst.mu);
  const double p = poisson(params, 0.5, Point::small(1.0), Point::big(2.0));
  const NormResult n = operator_norm(op);
  CHECK(n.converged);
  CHECK(n.value == doctest::Approx(std::sqrt(3.0 * 5.0) * p).epsilon(1e-14));
}

TEST_CASE("apply_forward and apply_adjoint basics") {
  const Instance inst = single_atom(Point::big(1.0), 2.0, Point::big(3.0), 1.0, 4.0);
  const OperatorMatrix op = assemble(params, inst.sigma, inst.mu);
  const double p = poisson(params, 1.0, Point::big(3.0), Point::big(1.0));

  CHECK(apply_forward(op, {0.0})[0] == 0.0);
  CHECK(apply_forward(op, {1.0})[0] == doctest::Approx(2.0 * p).epsilon(1e-15));
  CHECK(apply_adjoint(op, {0.0})[0] == 0.0);
  CHECK(apply_adjoint(op, {1.0})[0] == doctest::Approx(4.0 * p).epsilon(1e-15));
}

TEST_CASE("apply_forward is additive over sigma atoms") {
  const Instance inst = generate(101, 12, 9, params);
  const OperatorMatrix op = assemble(params, inst.sigma, inst.mu);
  Rng rng(7);
  const auto f = random_function(rng, op.cols, 1e-2, 1e2);
  const auto full = apply_forward(op, f);
  // sum of the one-atom applications
  std::vector<double> acc(op.rows, 0.0);
  for (int j = 0; j < op.cols; ++j) {
    std::vector<double> e(op.cols, 0.0);
    e[j] = f[j];
    const auto part = apply_forward(op, e);
    for (int i = 0; i < op.rows; ++i) acc[i] += part[i];
  }
  for (int i = 0; i < op.rows; ++i) CHECK(full[i] == doctest::Approx(acc[i]).epsilon(1e-13));
}

TEST_CASE("duality identity holds to near machine precision") {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst = generate(300 + trial, 24, 24, params);
    const OperatorMatrix op = assemble(params, inst.sigma, inst.mu);
    const double nval = operator_norm(op).value;
    for (int rep = 0; rep < 20; ++rep) {
      const auto f = random_function(rng, op.cols, 1e-3, 1e3);
      const auto g = random_function(rng, op.rows, 1e-3, 1e3);
      const double lhs = dot_mu(op, apply_forward(op, f), g);
      const double rhs = dot_sigma(op, f, apply_adjoint(op, g));
      const double fn = std::sqrt(dot_sigma(op, f, f));
      const double gn = std::sqrt(dot_mu(op, g, g));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * nval * fn * gn);
    }
  }
}

TEST_CASE("rank-one row norm closed form") {
  Instance inst;
  inst.sigma.atoms.push_back({Point::big(1.0), 2.0});
  inst.sigma.atoms.push_back({Point::small(2.0), 5.0});
  inst.mu.atoms.push_back({Point::big(0.5), 0.75, 3.0});
  const OperatorMatrix op = assemble(params, inst.sigma, inst.mu);
  const double p1 = poisson(params, 0.75, Point::big(0.5), Point::big(1.0));
  const double p2 = poisson(params, 0.75, Point::big(0.5), Point::small(2.0));
  const double expect = std::sqrt(3.0) * std::sqrt(p1 * p1 * 2.0 + p2 * p2 * 5.0);
  CHECK(operator_norm(op).value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(ref::svd_norm(op) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("power iteration matches the dense SVD oracle") {
  for (int trial = 0; trial < 8; ++trial) {
    const Instance inst = generate(500 + trial, 4 + 4 * trial, 6 + 3 * trial, params);
    const OperatorMatrix op = assemble(params, inst.sigma, inst.mu);
    const NormResult n = operator_norm(op);
    CHECK(n.converged);
    const double svd = ref::svd_norm(op);
    CHECK(n.value == doctest::Approx(svd).epsilon(1e-8));
    CHECK(jacobi_svd_norm(op) == doctest::Approx(svd).epsilon(1e-10));
  }
}

TEST_CASE("norm through the adjoint route is the same") {
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst = generate(700 + trial, 16, 20, params);
    const OperatorMatrix op = assemble(params, inst.sigma, inst.mu);
    const double a = operator_norm(op).value;
    const double b = operator_norm_adjoint(op).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("norm monotonicity and scaling") {
  const Instance inst = generate(900, 10, 10, params);
  const OperatorMatrix op = assemble(params, inst.sigma, inst.mu);
  const double base = operator_norm(op).value;

  // adding a mu atom never decreases the norm
  Instance bigger = inst;
  bigger.mu.atoms.push_back({Point::big(3.3), 0.4, 2.0});
  const double grown = operator_norm(assemble(params, bigger.sigma, bigger.mu)).value;
  CHECK(grown >= base * (1 - 1e-12));

  // scaling sigma by c scales the norm by sqrt(c)
  Instance scaled = inst;
  for (auto& a : scaled.sigma.atoms) a.w *= 4.0;
  const double s = operator_norm(assemble(params, scaled.sigma, scaled.mu)).value;
  CHECK(s == doctest::Approx(2.0 * base).epsilon(1e-10));

  Instance mscaled = inst;
  for (auto& a : mscaled.mu.atoms) a.w *= 9.0;
  const double ms = operator_norm(assemble(params, mscaled.sigma, mscaled.mu)).value;
  CHECK(ms == doctest::Approx(3.0 * base).epsilon(1e-10));
}

TEST_CASE("assembled matrices are positive and match the serial path") {
  const Instance inst = generate(1100, 14, 11, params);
  const OperatorMatrix fast = assemble(params, inst.sigma, inst.mu);
  const OperatorMatrix slow = ref::assemble_serial(params, inst.sigma, inst.mu);
  REQUIRE(fast.k.size() == slow.k.size());
  for (std::size_t i = 0; i < fast.k.size(); ++i) {
    CHECK(fast.k[i] > 0.0);
    CHECK(fast.k[i] == slow.k[i]);
  }
}

TEST_CASE("operator errors") {
  const Instance inst = generate(1300, 3, 3, params);
  const OperatorMatrix op = assemble(params, inst.sigma, inst.mu);
  CHECK_THROWS_AS(apply_forward(op, std::vector<double>(op.cols + 1, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_adjoint(op, std::vector<double>(op.rows + 1, 0.0)),
                  std::invalid_argument);
  const OperatorMatrix empty;
  CHECK_THROWS_AS(operator_norm(empty), std::invalid_argument);
}
