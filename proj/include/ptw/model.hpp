#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ptw {

/// Which piece of the two-ended profile a point lives on.  BigEnd is the
/// ray carrying the dimension-m volume growth, SmallEnd the dimension-n one,
/// Junction the single gluing point shared by both ends.
enum class EndTag : std::uint8_t { BigEnd, SmallEnd, Junction };

const char* to_string(EndTag e);
EndTag end_from_string(const std::string& s);

/// Dimensional parameters of the model.  m and n enter the kernel formulas
/// as exponents only; extent is the length S of each end (a power of two so
/// the top dyadic cube covers [0, S]); depth is the dyadic depth L.
struct Params {
  int m = 4;
  int n = 3;
  double extent = 8.0;
  int depth = 6;

  void validate() const;  // throws std::invalid_argument on bad values
};

/// A location on the profile: an end tag plus the coordinate s, the distance
/// to the junction.  The junction is the unique point with s == 0; a point
/// constructed as (BigEnd, 0) or (SmallEnd, 0) denotes the same location.
struct Point {
  EndTag end = EndTag::Junction;
  double s = 0.0;

  static Point junction() { return {EndTag::Junction, 0.0}; }
  static Point big(double s) { return {EndTag::BigEnd, s}; }
  static Point small(double s) { return {EndTag::SmallEnd, s}; }
};

/// Signed chart of the profile: the two ends glued at the junction are
/// isometric to [-S, S], with BigEnd on the positive axis and SmallEnd on
/// the negative one.  All distance computations reduce to |a - b| here.
double signed_coord(const Point& p);

bool same_location(const Point& p, const Point& q);

/// Geodesic distance on the profile.
double distance(const Point& p, const Point& q);

/// |x| = 1 + d(x, junction); always >= 1.
double norm_of(const Point& p);

/// Model ball volume V(x, r).  Diagnostic only: r <= 1 gives r^m, a ball of
/// radius r > 1 contained in the small end gives r^n, anything else r^m.
double ball_volume(const Point& p, double r, const Params& params);

struct SigmaAtom {
  Point x;
  double w = 0.0;
};

struct MuAtom {
  Point x;
  double t = 0.0;
  double w = 0.0;
};

/// Finite atomic measure on the profile.
struct DiscreteMeasure {
  std::vector<SigmaAtom> atoms;

  double mass() const;
  void validate() const;
};

/// Finite atomic measure on the upper half-space M x (0, inf).
struct UpperHalfMeasure {
  std::vector<MuAtom> atoms;

  double mass() const;
  /// Mass of t^2 dmu (the tilted measure used for boxes and averages).
  double tilde_mass() const;
  void validate() const;
};

DiscreteMeasure restrict_to(const DiscreteMeasure& m, EndTag end);
UpperHalfMeasure restrict_to(const UpperHalfMeasure& m, EndTag end);

}  // namespace ptw
