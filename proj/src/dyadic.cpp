#include "ptw/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptw {

int Grid::cell_index(double s) const {
  const int i = static_cast<int>(std::floor(s / resolution()));
  return std::clamp(i, 0, cells() - 1);
}

Point Grid::cell_center(EndTag end, int cell) const {
  return {end, (cell + 0.5) * resolution()};
}

Point Grid::snap(const Point& p) const {
  if (signed_coord(p) == 0.0) return Point::junction();
  return cell_center(p.end, cell_index(p.s));
}

std::string DyadicCube::id() const {
  return std::string(to_string(end)) + ":" + std::to_string(level) + ":" + std::to_string(index);
}

double cube_length(const Grid& g, const DyadicCube& c) { return std::ldexp(g.extent, -c.level); }

double cube_lo(const Grid& g, const DyadicCube& c) { return c.index * cube_length(g, c); }

double cube_hi(const Grid& g, const DyadicCube& c) { return (c.index + 1) * cube_length(g, c); }

DyadicCube parent(const DyadicCube& c) { return {c.end, c.level - 1, c.index / 2}; }

bool cube_contains(const Grid& g, const DyadicCube& c, const Point& p) {
  const double sc = signed_coord(p);
  if (sc == 0.0) return c.end == EndTag::BigEnd && c.index == 0;
  if ((sc > 0.0) != (c.end == EndTag::BigEnd)) return false;
  const double s = std::abs(sc);
  const double hi = cube_hi(g, c);
  if (s < cube_lo(g, c)) return false;
  return s < hi || (hi == g.extent && s == g.extent);
}

bool CarlesonBox::contains(const Grid& g, const Point& p, double t) const {
  return t > 0.0 && t <= height && cube_contains(g, base, p);
}

CarlesonBox box(const Grid& g, const DyadicCube& c) { return {c, cube_length(g, c)}; }

bool box_contains(const Grid& g, const DyadicCube& c, const Point& p, double t) {
  return box(g, c).contains(g, p, t);
}

std::vector<DyadicCube> enumerate_cubes(const Grid& g, int max_level) {
  if (max_level < 0 || max_level > g.depth) max_level = g.depth;
  std::vector<DyadicCube> out;
  out.reserve(2 * ((2 << max_level) - 1));
  for (EndTag end : {EndTag::BigEnd, EndTag::SmallEnd})
    for (int level = 0; level <= max_level; ++level)
      for (int index = 0; index < (1 << level); ++index) out.push_back({end, level, index});
  return out;
}

Interval dilate_clipped(const Grid& g, const DyadicCube& c, int factor) {
  const double len = cube_length(g, c);
  const double pad = 0.5 * (factor - 1) * len;
  return {std::max(0.0, cube_lo(g, c) - pad), std::min(g.extent, cube_hi(g, c) + pad)};
}

Region triple_region(const Grid& g, const DyadicCube& c, int height_factor) {
  const double len = cube_length(g, c);
  const double mid = 0.5 * (cube_lo(g, c) + cube_hi(g, c));
  const double center = c.end == EndTag::BigEnd ? mid : -mid;
  return {std::max(-g.extent, center - 1.5 * len), std::min(g.extent, center + 1.5 * len),
          height_factor * len};
}

bool OmegaMask::any() const {
  return std::any_of(cells.begin(), cells.end(), [](std::uint8_t b) { return b != 0; });
}

bool OmegaMask::all() const {
  return std::all_of(cells.begin(), cells.end(), [](std::uint8_t b) { return b != 0; });
}

bool dilate_inside(const Grid& g, const DyadicCube& c, int factor, const OmegaMask& omega) {
  if (c.end != omega.end) throw std::invalid_argument("whitney: cube and mask ends differ");
  const Interval iv = dilate_clipped(g, c, factor);
  // dilate endpoints are whole multiples of the cube length, hence of the
  // cell resolution; the rounding only undoes exact binary arithmetic
  const int lo = static_cast<int>(std::llround(iv.lo / g.resolution()));
  const int hi = static_cast<int>(std::llround(iv.hi / g.resolution()));
  for (int i = lo; i < hi; ++i)
    if (!omega.cells[i]) return false;
  return true;
}

namespace {

void whitney_visit(const Grid& g, const OmegaMask& omega, const DyadicCube& c,
                   std::vector<DyadicCube>& members) {
  if (!dilate_inside(g, c, 3, omega)) {
    if (c.level < g.depth) {
      whitney_visit(g, omega, {c.end, c.level + 1, 2 * c.index}, members);
      whitney_visit(g, omega, {c.end, c.level + 1, 2 * c.index + 1}, members);
    }
    return;
  }
  if (!dilate_inside(g, c, 5, omega)) {
    members.push_back(c);
    return;
  }
  // 3I inside Omega and 5I inside Omega: every descendant's quintuple sits
  // inside 3I, so nothing below can qualify either.
}

void whitney_fallback(const Grid& g, const OmegaMask& omega, const DyadicCube& c,
                      std::vector<DyadicCube>& members) {
  if (dilate_inside(g, c, 3, omega)) {
    members.push_back(c);
    return;
  }
  if (c.level < g.depth) {
    whitney_fallback(g, omega, {c.end, c.level + 1, 2 * c.index}, members);
    whitney_fallback(g, omega, {c.end, c.level + 1, 2 * c.index + 1}, members);
  }
}

}  // namespace

WhitneyFamily whitney(const Grid& g, const OmegaMask& omega) {
  if (static_cast<int>(omega.cells.size()) != g.cells())
    throw std::invalid_argument("whitney: mask size does not match grid");
  WhitneyFamily fam;
  fam.end = omega.end;
  if (!omega.any()) return fam;
  const DyadicCube top{omega.end, 0, 0};
  whitney_visit(g, omega, top, fam.members);
  if (fam.members.empty()) {
    fam.degenerate = true;
    whitney_fallback(g, omega, top, fam.members);
  }
  return fam;
}

MaximalIndex::MaximalIndex(const Grid& g, const UpperHalfMeasure& mu) : grid_(g), mu_(&mu) {
  const int per_end = (2 << g.depth) - 1;
  tmass_.assign(2 * per_end, 0.0);
  box_atoms_.assign(2 * per_end, {});
  for (int i = 0; i < static_cast<int>(mu.atoms.size()); ++i) {
    const auto& a = mu.atoms[i];
    const double sc = signed_coord(a.x);
    const EndTag end = sc < 0.0 ? EndTag::SmallEnd : EndTag::BigEnd;
    const int cell = sc == 0.0 ? 0 : g.cell_index(std::abs(sc));
    for (int level = 0; level <= g.depth; ++level) {
      const DyadicCube c{end, level, cell >> (g.depth - level)};
      if (a.t > cube_length(g, c)) break;  // lengths shrink with the level
      const int s = slot(c);
      tmass_[s] += a.t * a.t * a.w;
      box_atoms_[s].push_back(i);
    }
  }
}

int MaximalIndex::slot(const DyadicCube& c) const {
  const int per_end = (2 << grid_.depth) - 1;
  const int off = c.end == EndTag::BigEnd ? 0 : per_end;
  return off + ((1 << c.level) - 1) + c.index;
}

double MaximalIndex::box_tilde_mass(const DyadicCube& c) const { return tmass_[slot(c)]; }

double MaximalIndex::box_tilde_integral(const DyadicCube& c, const std::vector<double>& f) const {
  double sum = 0.0;
  for (int i : box_atoms_[slot(c)]) {
    const auto& a = mu_->atoms[i];
    sum += f[i] * a.t * a.t * a.w;
  }
  return sum;
}

double MaximalIndex::query(const std::vector<double>& psi, const Point& p, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("maximal: query height must be positive");
  const double sc = signed_coord(p);
  const EndTag end = sc < 0.0 ? EndTag::SmallEnd : EndTag::BigEnd;
  const int cell = sc == 0.0 ? 0 : grid_.cell_index(std::abs(sc));
  double best = 0.0;
  for (int level = 0; level <= grid_.depth; ++level) {
    const DyadicCube c{end, level, cell >> (grid_.depth - level)};
    if (t > cube_length(grid_, c)) break;
    const int s = slot(c);
    if (tmass_[s] <= 0.0) continue;
    double num = 0.0;
    for (int i : box_atoms_[s]) {
      const auto& a = mu_->atoms[i];
      num += std::abs(psi[i]) * a.t * a.t * a.w;
    }
    best = std::max(best, num / tmass_[s]);
  }
  return best;
}

std::vector<double> MaximalIndex::values(const std::vector<double>& psi) const {
  std::vector<double> out(mu_->atoms.size());
  for (std::size_t i = 0; i < mu_->atoms.size(); ++i)
    out[i] = query(psi, mu_->atoms[i].x, mu_->atoms[i].t);
  return out;
}

}  // namespace ptw
