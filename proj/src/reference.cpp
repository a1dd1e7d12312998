#include "ptw/reference.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace ptw::ref {

double svd_norm(const OperatorMatrix& op) {
  Eigen::MatrixXd a(op.rows, op.cols);
  for (int i = 0; i < op.rows; ++i)
    for (int j = 0; j < op.cols; ++j)
      a(i, j) = std::sqrt(op.mw[i]) * op.entry(i, j) * std::sqrt(op.sw[j]);
  if (op.rows <= 16 && op.cols <= 16) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

OperatorMatrix assemble_serial(const Params& params, const DiscreteMeasure& sigma,
                               const UpperHalfMeasure& mu) {
  OperatorMatrix op;
  op.rows = static_cast<int>(mu.atoms.size());
  op.cols = static_cast<int>(sigma.atoms.size());
  op.k.resize(static_cast<std::size_t>(op.rows) * op.cols);
  op.sw.resize(op.cols);
  op.mw.resize(op.rows);
  for (int j = 0; j < op.cols; ++j) op.sw[j] = sigma.atoms[j].w;
  for (int i = 0; i < op.rows; ++i) {
    op.mw[i] = mu.atoms[i].w;
    for (int j = 0; j < op.cols; ++j)
      op.k[static_cast<std::size_t>(i) * op.cols + j] =
          poisson(params, mu.atoms[i].t, mu.atoms[i].x, sigma.atoms[j].x);
  }
  return op;
}

ConstantResult forward_constant_serial(const Grid& grid, const Params& params,
                                       const DiscreteMeasure& sigma, const UpperHalfMeasure& mu,
                                       const TestingOptions& opts) {
  if (sigma.atoms.empty()) throw std::invalid_argument("forward_constant: sigma is empty");
  const int height = opts.hat == HatConvention::HatOfTriple ? 3 : 1;
  ConstantResult best;
  double best_sq = 0.0;
  for (const auto& cube : enumerate_cubes(grid, opts.max_level)) {
    double sigma_mass = 0.0;
    for (const auto& a : sigma.atoms)
      if (cube_contains(grid, cube, a.x)) sigma_mass += a.w;
    if (sigma_mass <= 0.0) continue;
    const Region region = triple_region(grid, cube, height);
    double num = 0.0;
    for (const auto& ma : mu.atoms) {
      if (!region.contains(ma.x, ma.t)) continue;
      double p = 0.0;
      for (const auto& sa : sigma.atoms)
        if (cube_contains(grid, cube, sa.x)) p += poisson(params, ma.t, ma.x, sa.x) * sa.w;
      num += p * p * ma.w;
    }
    const double cand = num / sigma_mass;
    if (!best.found || cand > best_sq) {
      best.found = true;
      best_sq = cand;
      best.achiever = cube;
    }
  }
  best.value = best.found ? std::sqrt(best_sq) : 0.0;
  return best;
}

ConstantResult backward_constant_serial(const Grid& grid, const Params& params,
                                        const DiscreteMeasure& sigma, const UpperHalfMeasure& mu,
                                        const TestingOptions& opts) {
  if (mu.atoms.empty()) throw std::invalid_argument("backward_constant: mu is empty");
  ConstantResult best;
  double best_sq = 0.0;
  for (const auto& cube : enumerate_cubes(grid, opts.max_level)) {
    double tilde_mass = 0.0;
    for (const auto& a : mu.atoms)
      if (box_contains(grid, cube, a.x, a.t)) tilde_mass += a.t * a.t * a.w;
    if (tilde_mass <= 0.0) continue;
    const Region region = triple_region(grid, cube);
    double num = 0.0;
    for (const auto& sa : sigma.atoms) {
      if (!region.contains(sa.x)) continue;
      double p = 0.0;
      for (const auto& ma : mu.atoms)
        if (box_contains(grid, cube, ma.x, ma.t))
          p += poisson(params, ma.t, ma.x, sa.x) * ma.t * ma.w;
      num += p * p * sa.w;
    }
    const double cand = num / tilde_mass;
    if (!best.found || cand > best_sq) {
      best.found = true;
      best_sq = cand;
      best.achiever = cube;
    }
  }
  best.value = best.found ? std::sqrt(best_sq) : 0.0;
  return best;
}

WhitneyFamily whitney_bruteforce(const Grid& grid, const OmegaMask& omega) {
  WhitneyFamily fam;
  fam.end = omega.end;
  if (!omega.any()) return fam;
  std::vector<DyadicCube> qualifying;
  for (const auto& c : enumerate_cubes(grid))
    if (c.end == omega.end && dilate_inside(grid, c, 3, omega) &&
        !dilate_inside(grid, c, 5, omega))
      qualifying.push_back(c);
  if (qualifying.empty()) {
    fam.degenerate = true;
    for (const auto& c : enumerate_cubes(grid))
      if (c.end == omega.end && dilate_inside(grid, c, 3, omega)) qualifying.push_back(c);
  }
  for (const auto& c : qualifying) {
    bool maximal = true;
    for (const auto& other : qualifying)
      if (!(other == c) && other.level <= c.level &&
          (c.index >> (c.level - other.level)) == other.index)
        maximal = false;
    if (maximal) fam.members.push_back(c);
  }
  return fam;
}

double maximal_query_bruteforce(const Grid& grid, const UpperHalfMeasure& mu,
                                const std::vector<double>& psi, const Point& p, double t) {
  double best = 0.0;
  for (const auto& cube : enumerate_cubes(grid)) {
    if (!box_contains(grid, cube, p, t)) continue;
    double mass = 0.0, num = 0.0;
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
      const auto& a = mu.atoms[i];
      if (!box_contains(grid, cube, a.x, a.t)) continue;
      mass += a.t * a.t * a.w;
      num += std::abs(psi[i]) * a.t * a.t * a.w;
    }
    if (mass > 0.0) best = std::max(best, num / mass);
  }
  return best;
}

double alpha_bruteforce(const Grid& grid, const UpperHalfMeasure& mu,
                        const std::vector<double>& phi, const DyadicCube& cube) {
  double mass = 0.0, num = 0.0;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const auto& a = mu.atoms[i];
    if (!box_contains(grid, cube, a.x, a.t)) continue;
    mass += a.t * a.t * a.w;
    num += phi[i] / a.t * a.t * a.t * a.w;
  }
  if (!(mass > 0.0)) throw std::invalid_argument("alpha: box carries no t^2 mu mass");
  return num / mass;
}

}  // namespace ptw::ref
