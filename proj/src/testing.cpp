#include "ptw/testing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptw {

const char* to_string(HatConvention h) {
  return h == HatConvention::HatOfTriple ? "hat-of-triple" : "triple-of-hat";
}

HatConvention hat_from_string(const std::string& s) {
  if (s == "hat-of-triple") return HatConvention::HatOfTriple;
  if (s == "triple-of-hat") return HatConvention::TripleOfHat;
  throw std::invalid_argument("unknown hat convention '" + s +
                              "' (expected hat-of-triple|triple-of-hat)");
}

namespace {

ConstantResult max_over_cubes(const std::vector<DyadicCube>& cubes,
                              const std::vector<double>& vals) {
  ConstantResult res;
  double best_sq = 0.0;
  for (std::size_t c = 0; c < cubes.size(); ++c) {
    if (vals[c] < 0.0) continue;  // inadmissible cube
    if (!res.found || vals[c] > best_sq) {
      res.found = true;
      best_sq = vals[c];
      res.achiever = cubes[c];
    }
  }
  res.value = res.found ? std::sqrt(best_sq) : 0.0;
  return res;
}

}  // namespace

ConstantResult forward_constant(const Grid& grid, const DiscreteMeasure& sigma,
                                const UpperHalfMeasure& mu, const OperatorMatrix& op,
                                const TestingOptions& opts) {
  if (sigma.atoms.empty()) throw std::invalid_argument("forward_constant: sigma is empty");
  const auto cubes = enumerate_cubes(grid, opts.max_level);
  const int height = opts.hat == HatConvention::HatOfTriple ? 3 : 1;
  std::vector<double> vals(cubes.size(), -1.0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < cubes.size(); ++c) {
    const DyadicCube& cube = cubes[c];
    double sigma_mass = 0.0;
    std::vector<int> inside;
    for (int j = 0; j < op.cols; ++j)
      if (cube_contains(grid, cube, sigma.atoms[j].x)) {
        sigma_mass += op.sw[j];
        inside.push_back(j);
      }
    if (sigma_mass <= 0.0) continue;
    const Region region = triple_region(grid, cube, height);
    double num = 0.0;
    for (int i = 0; i < op.rows; ++i) {
      const auto& a = mu.atoms[i];
      if (!region.contains(a.x, a.t)) continue;
      long double p = 0.0L;
      for (int j : inside) p += static_cast<long double>(op.entry(i, j)) * op.sw[j];
      const double pd = static_cast<double>(p);
      num += pd * pd * op.mw[i];
    }
    vals[c] = num / sigma_mass;
  }
  return max_over_cubes(cubes, vals);
}

ConstantResult backward_constant(const Grid& grid, const DiscreteMeasure& sigma,
                                 const UpperHalfMeasure& mu, const OperatorMatrix& op,
                                 const TestingOptions& opts) {
  if (mu.atoms.empty()) throw std::invalid_argument("backward_constant: mu is empty");
  const auto cubes = enumerate_cubes(grid, opts.max_level);
  std::vector<double> vals(cubes.size(), -1.0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < cubes.size(); ++c) {
    const DyadicCube& cube = cubes[c];
    double tilde_mass = 0.0;
    std::vector<int> inside;
    for (int i = 0; i < op.rows; ++i) {
      const auto& a = mu.atoms[i];
      if (box_contains(grid, cube, a.x, a.t)) {
        tilde_mass += a.t * a.t * op.mw[i];
        inside.push_back(i);
      }
    }
    if (tilde_mass <= 0.0) continue;
    const Region region = triple_region(grid, cube);
    double num = 0.0;
    for (int j = 0; j < op.cols; ++j) {
      if (!region.contains(sigma.atoms[j].x)) continue;
      long double p = 0.0L;
      for (int i : inside)
        p += static_cast<long double>(op.entry(i, j)) * mu.atoms[i].t * op.mw[i];
      const double pd = static_cast<double>(p);
      num += pd * pd * op.sw[j];
    }
    vals[c] = num / tilde_mass;
  }
  return max_over_cubes(cubes, vals);
}

TestingReport verify(const Params& params, const DiscreteMeasure& sigma,
                     const UpperHalfMeasure& mu, const TestingOptions& opts) {
  params.validate();
  TestingReport rep;
  rep.params = params;
  rep.n_sigma = static_cast<int>(sigma.atoms.size());
  rep.n_mu = static_cast<int>(mu.atoms.size());
  rep.hat = opts.hat;

  const Grid grid{params.extent, params.depth};
  const OperatorMatrix op = assemble(params, sigma, mu);
  rep.norm = operator_norm_robust(op, opts.tol_norm, opts.max_iters);
  rep.N = rep.norm.value;
  const ConstantResult f = forward_constant(grid, sigma, mu, op, opts);
  const ConstantResult b = backward_constant(grid, sigma, mu, op, opts);
  rep.F = f.value;
  rep.B = b.value;
  if (f.found) rep.F_achiever = f.achiever.id();
  if (b.found) rep.B_achiever = b.achiever.id();

  rep.ratio = rep.F + rep.B > 0.0 ? rep.N / (rep.F + rep.B)
                                  : std::numeric_limits<double>::infinity();
  rep.F_over_N = rep.N > 0.0 ? rep.F / rep.N : 0.0;
  rep.B_over_N = rep.N > 0.0 ? rep.B / rep.N : 0.0;

  const double cap = rep.N * (1.0 + opts.eps_num);
  rep.necessity_ok = rep.F <= cap && rep.B <= cap;
  rep.ratio_ok = rep.ratio <= opts.ratio_ceiling;
  return rep;
}

}  // namespace ptw
