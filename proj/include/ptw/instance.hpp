#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ptw/dyadic.hpp"
#include "ptw/model.hpp"

namespace ptw {

/// Deterministic uniform source; the raw engine output is mapped to doubles
/// directly so draws do not depend on the standard library's distribution
/// implementations.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double u01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  double log_uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive bounds
};

struct EndProportions {
  double big = 0.45;
  double small = 0.45;
  double junction = 0.10;
};

struct Instance {
  std::uint64_t seed = 0;
  DiscreteMeasure sigma;
  UpperHalfMeasure mu;
};

/// Random desk-scale instance: log-uniform positions and heights in
/// [S 2^-L, S], log-uniform weights in [1e-3, 1e3], end tags per the given
/// proportions.  Positions are snapped to cell centres; atom locations are
/// redrawn until distinct.  Fully determined by the seed.
Instance generate(std::uint64_t seed, int n_sigma, int n_mu, const Params& params,
                  const EndProportions& ends = {});

/// Log-uniform nonnegative test function on n atoms, values in [lo, hi].
std::vector<double> random_function(Rng& rng, int n, double lo, double hi);

}  // namespace ptw
