#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ptw/model.hpp"

namespace ptw {

/// Dyadic interval system on the profile.  Each end carries its own binary
/// tree of half-open intervals [j*S*2^-k, (j+1)*S*2^-k) for 0 <= k <= depth;
/// the interval that ends exactly at S is closed on the right so the top
/// cube covers the full ray.  No cube straddles the junction; the junction
/// point itself counts as a member of the big-end cubes touching 0, which
/// keeps the family of Carleson boxes a forest.
struct Grid {
  double extent = 8.0;
  int depth = 6;

  double resolution() const { return std::ldexp(extent, -depth); }
  int cells() const { return 1 << depth; }

  /// Index of the depth-level cell containing coordinate s, clamped to the
  /// valid range so s == extent lands in the last cell.
  int cell_index(double s) const;

  /// Snap a point to the centre of its depth-level cell (junction unchanged).
  Point snap(const Point& p) const;
  Point cell_center(EndTag end, int cell) const;
};

struct DyadicCube {
  EndTag end = EndTag::BigEnd;  // BigEnd or SmallEnd
  int level = 0;                // 0..depth
  int index = 0;                // 0..2^level-1

  bool operator==(const DyadicCube&) const = default;
  std::string id() const;  // "big:3:5"
};

double cube_length(const Grid& g, const DyadicCube& c);
double cube_lo(const Grid& g, const DyadicCube& c);
double cube_hi(const Grid& g, const DyadicCube& c);
DyadicCube parent(const DyadicCube& c);

/// Cube membership.  A point belongs to a cube when it lies on the cube's
/// end and its coordinate falls in [lo, hi) (right-closed at S).  The
/// junction belongs to big-end cubes with lo == 0 only.
bool cube_contains(const Grid& g, const DyadicCube& c, const Point& p);

/// The box I x [0, l(I)] over a cube.
struct CarlesonBox {
  DyadicCube base;
  double height = 0.0;  // equals the base length

  bool contains(const Grid& g, const Point& p, double t) const;
};

CarlesonBox box(const Grid& g, const DyadicCube& c);

/// Carleson box membership: p in the cube and 0 < t <= l(cube).
bool box_contains(const Grid& g, const DyadicCube& c, const Point& p, double t);

/// All cubes of both ends, levels 0..depth, in a fixed deterministic order.
std::vector<DyadicCube> enumerate_cubes(const Grid& g, int max_level = -1);

/// A half-open interval on one end's coordinate ray.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(lo < hi); }
};

/// Concentric dilation by an odd factor, clipped to [0, S] on the cube's own
/// end.  factor 3 gives the Whitney triple, factor 5 the quintuple.
Interval dilate_clipped(const Grid& g, const DyadicCube& c, int factor);
inline Interval triple(const Grid& g, const DyadicCube& c) { return dilate_clipped(g, c, 3); }
inline Interval quintuple(const Grid& g, const DyadicCube& c) { return dilate_clipped(g, c, 5); }

/// The tripled cube as a region of the glued profile, in the signed chart:
/// the interval of length 3*l(cube) around the cube's centre may reach
/// across the junction onto the other end.  height bounds t for the box
/// 3I x [0, height]; membership is closed on all sides.
struct Region {
  double lo = 0.0;  // signed coordinates
  double hi = 0.0;
  double height = 0.0;

  bool contains(const Point& p) const {
    const double s = signed_coord(p);
    return lo <= s && s <= hi;
  }
  bool contains(const Point& p, double t) const { return contains(p) && t > 0.0 && t <= height; }
};

/// Region 3I x [0, 3*l(I)] (pass height_factor 1 for 3I x [0, l(I)]).
Region triple_region(const Grid& g, const DyadicCube& c, int height_factor = 3);

/// An open subset of one end, stored as a mask over the depth-level cells.
struct OmegaMask {
  EndTag end = EndTag::BigEnd;
  std::vector<std::uint8_t> cells;  // size 2^depth

  bool any() const;
  bool all() const;
};

struct WhitneyFamily {
  EndTag end = EndTag::BigEnd;
  std::vector<DyadicCube> members;
  /// Set when no cube satisfies both 3I in Omega and 5I not in Omega; the
  /// family then falls back to the maximal cubes with 3I in Omega.
  bool degenerate = false;
};

/// True when every depth-level cell of the clipped dilate lies in the mask.
bool dilate_inside(const Grid& g, const DyadicCube& c, int factor, const OmegaMask& omega);

/// Maximal dyadic cubes I with 3I in Omega and 5I not in Omega (both clipped
/// to the cube's end).  Empty Omega gives the empty family.
WhitneyFamily whitney(const Grid& g, const OmegaMask& omega);

/// Precomputed per-cube sums of t^2 w and psi t^2 w over Carleson boxes,
/// supporting O(depth) maximal-function queries.
class MaximalIndex {
 public:
  MaximalIndex(const Grid& g, const UpperHalfMeasure& mu);

  /// sup over boxes J-hat containing (p, t) with positive t^2 mu mass of the
  /// box average of |psi| against t^2 dmu; 0 when no such box exists.
  double query(const std::vector<double>& psi, const Point& p, double t) const;

  /// query() at every atom of the measure, in atom order.
  std::vector<double> values(const std::vector<double>& psi) const;

  double box_tilde_mass(const DyadicCube& c) const;
  /// Integral of f against t^2 dmu over the box of c, for f given per atom.
  double box_tilde_integral(const DyadicCube& c, const std::vector<double>& f) const;

  const Grid& grid() const { return grid_; }

 private:
  int slot(const DyadicCube& c) const;

  Grid grid_;
  const UpperHalfMeasure* mu_;
  std::vector<double> tmass_;                  // per cube slot
  std::vector<std::vector<int>> box_atoms_;    // atom ids per cube slot
};

}  // namespace ptw
