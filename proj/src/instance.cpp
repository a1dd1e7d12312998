#include "ptw/instance.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace ptw {

double Rng::log_uniform(double lo, double hi) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u01());
}

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
}

namespace {

EndTag draw_end(Rng& rng, const EndProportions& e) {
  const double total = e.big + e.small + e.junction;
  const double u = rng.u01() * total;
  if (u < e.big) return EndTag::BigEnd;
  if (u < e.big + e.small) return EndTag::SmallEnd;
  return EndTag::Junction;
}

}  // namespace

Instance generate(std::uint64_t seed, int n_sigma, int n_mu, const Params& params,
                  const EndProportions& ends) {
  params.validate();
  if (n_sigma < 1 || n_mu < 1)
    throw std::invalid_argument("generate: atom counts must be at least 1");
  const Grid grid{params.extent, params.depth};
  const double lo = grid.resolution(), hi = params.extent;

  // positions in [S 2^-L, S] snap to the centres of cells 1..2^L-1, so the
  // number of distinct sigma sites is limited
  int capacity = 0;
  if (ends.big > 0.0) capacity += grid.cells() - 1;
  if (ends.small > 0.0) capacity += grid.cells() - 1;
  if (ends.junction > 0.0) capacity += 1;
  if (n_sigma > capacity)
    throw std::invalid_argument("generate: " + std::to_string(n_sigma) +
                                " sigma atoms exceed the " + std::to_string(capacity) +
                                " distinct grid sites at this depth");

  Instance inst;
  inst.seed = seed;
  Rng rng(seed);

  std::set<double> sigma_sites;
  for (int i = 0; i < n_sigma; ++i) {
    Point p;
    do {
      const EndTag end = draw_end(rng, ends);
      p = end == EndTag::Junction ? Point::junction() : grid.snap({end, rng.log_uniform(lo, hi)});
    } while (!sigma_sites.insert(signed_coord(p)).second);
    inst.sigma.atoms.push_back({p, rng.log_uniform(1e-3, 1e3)});
  }

  std::set<std::pair<double, double>> mu_sites;
  for (int i = 0; i < n_mu; ++i) {
    Point p;
    double t;
    do {
      const EndTag end = draw_end(rng, ends);
      p = end == EndTag::Junction ? Point::junction() : grid.snap({end, rng.log_uniform(lo, hi)});
      t = rng.log_uniform(lo, hi);
    } while (!mu_sites.insert({signed_coord(p), t}).second);
    inst.mu.atoms.push_back({p, t, rng.log_uniform(1e-3, 1e3)});
  }
  return inst;
}

std::vector<double> random_function(Rng& rng, int n, double lo, double hi) {
  std::vector<double> f(n);
  for (double& v : f) v = rng.log_uniform(lo, hi);
  return f;
}

}  // namespace ptw
