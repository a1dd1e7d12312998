#include "ptw/proofscope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace ptw {

namespace {

bool eval_end_ok(PieceId id, EndTag end) {
  switch (id) {
    case PieceId::P11: return end != EndTag::Junction;
    case PieceId::P12: return end == EndTag::BigEnd;
    case PieceId::P22: return end == EndTag::SmallEnd;
    case PieceId::P23: return end == EndTag::SmallEnd;
    case PieceId::P42: return end == EndTag::BigEnd;
    case PieceId::P43: return end == EndTag::BigEnd;
  }
  return false;
}

std::tuple<EndTag, int, int> key(const DyadicCube& c) { return {c.end, c.level, c.index}; }

bool cube_inside(const DyadicCube& a, const DyadicCube& b) {
  return a.end == b.end && a.level >= b.level && (a.index >> (a.level - b.level)) == b.index;
}

}  // namespace

PieceContext canonical_context(PieceId id) {
  switch (id) {
    case PieceId::P11: return {id, EndTag::BigEnd, EndTag::BigEnd};
    case PieceId::P12: return {id, EndTag::BigEnd, EndTag::BigEnd};
    case PieceId::P22: return {id, EndTag::BigEnd, EndTag::SmallEnd};
    case PieceId::P23: return {id, EndTag::BigEnd, EndTag::SmallEnd};
    case PieceId::P42: return {id, EndTag::SmallEnd, EndTag::BigEnd};
    case PieceId::P43: return {id, EndTag::SmallEnd, EndTag::BigEnd};
  }
  return {};
}

bool compatible(PieceId id, EndTag phi_end) {
  switch (id) {
    case PieceId::P11: return true;
    case PieceId::P12: return phi_end == EndTag::BigEnd;
    case PieceId::P22: return phi_end == EndTag::BigEnd;
    case PieceId::P23: return phi_end == EndTag::BigEnd;
    case PieceId::P42: return phi_end != EndTag::BigEnd;
    case PieceId::P43: return phi_end == EndTag::SmallEnd;
  }
  return false;
}

double maximal_principle_constant(PieceId id, const Params& params) {
  switch (id) {
    case PieceId::P11: return ipow(4.0, params.m + 1);
    case PieceId::P22: return ipow(4.0, params.n + 1);
    case PieceId::P12:
    case PieceId::P42: return ipow(4.0, params.m + params.n - 1);
    default:
      throw std::invalid_argument("maximal principle is checked for pieces 1,1 1,2 2,2 4,2");
  }
}

int default_shift(PieceId id, const Params& params) {
  const double c = maximal_principle_constant(id, params);
  int shift = 1;
  while (std::ldexp(1.0, shift) <= c + 1.0) ++shift;
  return shift;
}

double adjoint_piece_value(const Params& params, const UpperHalfMeasure& mu,
                           const std::vector<double>& phi, EndTag phi_end, PieceId id,
                           const Point& at) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const auto& a = mu.atoms[i];
    if (a.x.end != phi_end || phi[i] == 0.0) continue;
    acc += static_cast<long double>(piece(params, id, a.t, at, a.x)) * phi[i] * a.w;
  }
  return static_cast<double>(acc);
}

const LadderLevel* Ladder::level(int k) const {
  if (k < k_lo || k > k_hi) return nullptr;
  return &levels[k - k_lo];
}

Ladder build_ladder(const Grid& grid, const Params& params, const DiscreteMeasure& sigma,
                    const UpperHalfMeasure& mu, const std::vector<double>& phi, PieceId id,
                    EndTag phi_end, EndTag eval_end, int shift, double delta) {
  if (phi.size() != mu.atoms.size())
    throw std::invalid_argument("ladder: phi must be given per mu atom");
  for (double v : phi)
    if (!(v >= 0.0)) throw std::invalid_argument("ladder: phi must be nonnegative");
  if (!compatible(id, phi_end))
    throw std::invalid_argument("ladder: kernel piece incompatible with the end split");
  if (!eval_end_ok(id, eval_end))
    throw std::invalid_argument("ladder: kernel piece incompatible with the evaluation end");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("ladder: delta must be in (0,1]");

  Ladder lad;
  lad.piece = id;
  lad.phi_end = phi_end;
  lad.eval_end = eval_end;
  lad.shift = shift < 0 ? default_shift(id, params) : shift;
  lad.delta = delta;

  const int nc = grid.cells();
  lad.values.resize(nc);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c)
    lad.values[c] = adjoint_piece_value(params, mu, phi, phi_end, id, grid.cell_center(eval_end, c));

  lad.sigma_cells.assign(nc, 0.0);
  for (const auto& a : sigma.atoms)
    if (a.x.end == eval_end) lad.sigma_cells[grid.cell_index(a.x.s)] += a.w;

  double umax = 0.0, umin = std::numeric_limits<double>::infinity();
  for (double v : lad.values) {
    umax = std::max(umax, v);
    if (v > 0.0) umin = std::min(umin, v);
  }
  if (umax <= 0.0) return lad;  // empty ladder

  lad.k_hi = std::ilogb(umax);
  lad.k_lo = std::ilogb(umin) - lad.shift - 2;
  lad.levels.reserve(lad.k_hi - lad.k_lo + 1);

  for (int k = lad.k_lo; k <= lad.k_hi; ++k) {
    LadderLevel lvl;
    lvl.k = k;
    lvl.omega.end = eval_end;
    lvl.omega.cells.resize(nc);
    const double thresh = std::ldexp(1.0, k);
    for (int c = 0; c < nc; ++c) lvl.omega.cells[c] = lad.values[c] > thresh ? 1 : 0;
    lvl.family = whitney(grid, lvl.omega);

    const double flo = std::ldexp(1.0, k + lad.shift);
    const double fhi = std::ldexp(1.0, k + lad.shift + 1);
    for (const auto& cube : lvl.family.members) {
      StopEntry st;
      st.cube = cube;
      const int width = grid.depth - cube.level;
      const int c0 = cube.index << width, c1 = (cube.index + 1) << width;
      for (int c = c0; c < c1; ++c) {
        st.sigma_cube += lad.sigma_cells[c];
        if (lad.values[c] > flo && !(lad.values[c] > fhi)) {
          st.f_cells.push_back(c);
          st.sigma_f += lad.sigma_cells[c];
        }
      }
      st.qualifies = st.sigma_cube > 0.0 && st.sigma_f >= delta * st.sigma_cube;
      lvl.stops.push_back(std::move(st));
    }
    lad.levels.push_back(std::move(lvl));
  }
  return lad;
}

LadderChecks check_ladder(const Grid& grid, const Ladder& lad) {
  LadderChecks out;
  out.nesting_ok = true;
  out.disjoint_ok = true;
  const double slack = 1.0 + 1e-12;

  for (std::size_t l = 0; l + 1 < lad.levels.size(); ++l)
    for (int c = 0; c < grid.cells(); ++c)
      if (lad.levels[l + 1].omega.cells[c] && !lad.levels[l].omega.cells[c])
        out.nesting_ok = false;

  // Whitney members disjoint within a level; F_k(I) cells disjoint across k
  // for a fixed cube.
  std::map<std::tuple<EndTag, int, int>, std::set<int>> fcells;
  for (const auto& lvl : lad.levels) {
    std::vector<int> owner(grid.cells(), -1);
    for (std::size_t mi = 0; mi < lvl.family.members.size(); ++mi) {
      const auto& c = lvl.family.members[mi];
      const int width = grid.depth - c.level;
      for (int i = c.index << width; i < (c.index + 1) << width; ++i) {
        if (owner[i] >= 0) out.disjoint_ok = false;
        owner[i] = static_cast<int>(mi);
      }
    }
    for (const auto& st : lvl.stops) {
      auto& seen = fcells[key(st.cube)];
      for (int c : st.f_cells)
        if (!seen.insert(c).second) out.disjoint_ok = false;
    }
  }

  std::map<int, double> annulus;  // sigma mass per dyadic value band
  for (int c = 0; c < grid.cells(); ++c) {
    const double v = lad.values[c], s = lad.sigma_cells[c];
    if (s <= 0.0 || v <= 0.0) continue;
    int kk = std::ilogb(v);
    if (v == std::ldexp(1.0, kk)) --kk;  // bands are (2^k, 2^(k+1)]
    annulus[kk] += s;
    out.telescope_integral += v * v * s;
  }
  for (const auto& [kk, s] : annulus) out.telescope_sum += std::ldexp(1.0, 2 * kk) * s;
  out.telescope_ok = out.telescope_sum <= out.telescope_integral * slack &&
                     out.telescope_integral <= 4.0 * out.telescope_sum * slack;

  for (const auto& lvl : lad.levels) {
    const double w = std::ldexp(1.0, 2 * lvl.k);
    for (const auto& st : lvl.stops)
      if (!st.qualifies) out.absorb_lhs += w * st.sigma_f;
    double om = 0.0;
    for (int c = 0; c < grid.cells(); ++c)
      if (lvl.omega.cells[c]) om += lad.sigma_cells[c];
    out.absorb_rhs += w * om;
  }
  out.absorb_rhs *= lad.delta;
  out.absorb_ok = out.absorb_lhs <= out.absorb_rhs * slack + 1e-300;
  return out;
}

namespace {

struct Sampler {
  std::mt19937_64 eng;
  explicit Sampler(std::uint64_t seed) : eng(seed) {}
  double u01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  double log_uniform(double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u01());
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (eng() & 1) != 0; }
};

Point from_signed(double sc) {
  if (sc == 0.0) return Point::junction();
  return sc > 0.0 ? Point::big(sc) : Point::small(-sc);
}

}  // namespace

MaxPrincipleReport maximal_principle_check(const Grid& grid, const Params& params, PieceId id,
                                           int samples, std::uint64_t seed) {
  MaxPrincipleReport rep;
  rep.piece = id;
  rep.constant = maximal_principle_constant(id, params);
  const bool norm_weighted = id != PieceId::P11;
  Sampler rng(seed);

  for (int s = 0; s < samples; ++s) {
    const int level = rng.uniform_int(1, grid.depth);
    EndTag end;
    switch (id) {
      case PieceId::P11: end = rng.coin() ? EndTag::BigEnd : EndTag::SmallEnd; break;
      case PieceId::P22: end = EndTag::SmallEnd; break;
      default: end = EndTag::BigEnd; break;
    }
    // norm-weighted pieces need the cube separated from the junction
    // (the Whitney geometry 3I in Omega inside the end gives d(x,K) >= l(I))
    const int index = norm_weighted ? rng.uniform_int(1, (1 << level) - 1)
                                    : rng.uniform_int(0, (1 << level) - 1);
    const DyadicCube cube{end, level, index};
    const double len = cube_length(grid, cube);
    const Point x{end, rng.uniform(cube_lo(grid, cube), cube_hi(grid, cube))};

    double zs = 0.0;
    bool zok = false;
    for (int tries = 0; tries < 64 && !zok; ++tries) {
      const double off = rng.uniform(len, 3.0 * len) * (rng.coin() ? 1.0 : -1.0);
      zs = signed_coord(x) + off;
      zok = std::abs(zs) <= grid.extent;
    }
    if (!zok) continue;
    const Point z = from_signed(zs);

    EndTag yend;
    switch (id) {
      case PieceId::P11: yend = rng.coin() ? EndTag::BigEnd : EndTag::SmallEnd; break;
      case PieceId::P42: yend = EndTag::SmallEnd; break;
      default: yend = EndTag::BigEnd; break;
    }
    const Point y{yend, rng.log_uniform(grid.resolution() / 16.0, grid.extent)};
    const Region reach = triple_region(grid, cube);
    double t;
    if (reach.contains(y))
      t = rng.log_uniform(3.0 * len * (1.0 + 1e-9), 32.0 * 3.0 * len);
    else
      t = rng.log_uniform(len / 1024.0, 3.0 * grid.extent);

    const double num = piece_unchecked(params, id, t, x, y);
    const double den = piece_unchecked(params, id, t, z, y);
    const double ratio = num / den;
    ++rep.samples;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst = {cube, x, z, y, t, ratio};
    }
  }
  rep.pass = rep.max_ratio <= rep.constant;
  return rep;
}

double alpha_average(const MaximalIndex& index, const UpperHalfMeasure& mu,
                     const std::vector<double>& phi, const DyadicCube& cube) {
  const double mass = index.box_tilde_mass(cube);
  if (!(mass > 0.0)) throw std::invalid_argument("alpha: box carries no t^2 mu mass");
  std::vector<double> f(mu.atoms.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = phi[i] / mu.atoms[i].t;
  return index.box_tilde_integral(cube, f) / mass;
}

PrincipalForest principal_cubes(const MaximalIndex& index, const UpperHalfMeasure& mu,
                                const std::vector<double>& phi, const DyadicCube& root) {
  if (phi.size() != mu.atoms.size())
    throw std::invalid_argument("principal cubes: phi must be given per mu atom");
  for (double v : phi)
    if (!(v >= 0.0)) throw std::invalid_argument("principal cubes: phi must be nonnegative");
  if (!(index.box_tilde_mass(root) > 0.0))
    throw std::invalid_argument("principal cubes: root box carries no t^2 mu mass");

  const Grid& grid = index.grid();
  std::vector<double> f(mu.atoms.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = phi[i] / mu.atoms[i].t;
  auto alpha_of = [&](const DyadicCube& c) {
    return index.box_tilde_integral(c, f) / index.box_tilde_mass(c);
  };

  PrincipalForest forest;
  forest.root = root;
  forest.cubes.push_back(root);
  forest.parent.push_back(-1);
  forest.alpha.push_back(alpha_of(root));

  struct Item {
    DyadicCube cube;
    int ancestor;  // index of the governing selected cube
  };
  std::vector<Item> queue{{root, 0}};
  while (!queue.empty()) {
    const Item it = queue.front();
    queue.erase(queue.begin());
    if (it.cube.level >= grid.depth) continue;
    for (int half = 0; half < 2; ++half) {
      const DyadicCube child{it.cube.end, it.cube.level + 1, 2 * it.cube.index + half};
      if (!(index.box_tilde_mass(child) > 0.0)) continue;  // massless subtree
      const double a = alpha_of(child);
      int anc = it.ancestor;
      if (a >= 10.0 * forest.alpha[anc]) {
        forest.cubes.push_back(child);
        forest.parent.push_back(anc);
        forest.alpha.push_back(a);
        anc = static_cast<int>(forest.cubes.size()) - 1;
      }
      queue.push_back({child, anc});
    }
  }
  for (std::size_t i = 0; i < forest.cubes.size(); ++i)
    forest.carleson_sum +=
        forest.alpha[i] * forest.alpha[i] * index.box_tilde_mass(forest.cubes[i]);
  return forest;
}

std::optional<int> PrincipalForest::minimal_ancestor(const Grid&, const DyadicCube& c) const {
  if (c.end != root.end) return std::nullopt;
  DyadicCube cur = c;
  for (;;) {
    for (std::size_t i = 0; i < cubes.size(); ++i)
      if (cubes[i] == cur) return static_cast<int>(i);
    if (cur.level == 0) return std::nullopt;
    cur = ptw::parent(cur);
  }
}

CardinalityReport cardinality_check(const Grid& grid, const Ladder& lad,
                                    const PrincipalForest* forest) {
  CardinalityReport rep;
  rep.bound = static_cast<int>(std::ceil(1.0 / lad.delta));

  std::map<std::tuple<EndTag, int, int>, int> counts;
  for (const auto& lvl : lad.levels)
    for (const auto& st : lvl.stops)
      if (st.qualifies) ++counts[key(st.cube)];
  for (const auto& [k, c] : counts) rep.max_count = std::max(rep.max_count, c);
  rep.pass = rep.max_count <= rep.bound;

  if (forest && !lad.empty()) {
    std::map<int, std::set<int>> contributing;  // selected cube -> set of k
    for (const auto& lvl : lad.levels) {
      const LadderLevel* jlvl = lad.level(lvl.k + lad.shift + 1);
      if (!jlvl) continue;
      for (const auto& st : lvl.stops) {
        if (!st.qualifies) continue;
        const Interval reach = triple(grid, st.cube);
        const double ilen = cube_length(grid, st.cube);
        for (const auto& j : jlvl->family.members) {
          if (j.end != st.cube.end) continue;
          if (!(cube_lo(grid, j) >= reach.lo && cube_hi(grid, j) <= reach.hi)) continue;
          const auto pj = forest->minimal_ancestor(grid, j);
          if (!pj) continue;
          const double jmid = 0.5 * (cube_lo(grid, j) + cube_hi(grid, j));
          const int theta = std::clamp(static_cast<int>(jmid / ilen), 0,
                                       (1 << st.cube.level) - 1);
          const DyadicCube neighbor{st.cube.end, st.cube.level, theta};
          const auto pn = forest->minimal_ancestor(grid, neighbor);
          if (!pn || *pj == *pn) continue;
          if (!cube_inside(forest->cubes[*pj], forest->cubes[*pn])) continue;
          contributing[*pj].insert(lvl.k);
        }
      }
    }
    for (const auto& [g, ks] : contributing)
      rep.charge_count_max = std::max(rep.charge_count_max, static_cast<int>(ks.size()));
  }
  return rep;
}

}  // namespace ptw
