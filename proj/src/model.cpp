#include "ptw/model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

namespace ptw {

const char* to_string(EndTag e) {
  switch (e) {
    case EndTag::BigEnd: return "big";
    case EndTag::SmallEnd: return "small";
    case EndTag::Junction: return "junction";
  }
  return "?";
}

EndTag end_from_string(const std::string& s) {
  if (s == "big") return EndTag::BigEnd;
  if (s == "small") return EndTag::SmallEnd;
  if (s == "junction") return EndTag::Junction;
  throw std::invalid_argument("unknown end tag '" + s + "' (expected big|small|junction)");
}

void Params::validate() const {
  if (n < 3) throw std::invalid_argument("params: need n >= 3");
  if (m <= n) throw std::invalid_argument("params: need m > n");
  if (!(extent > 0.0)) throw std::invalid_argument("params: extent must be positive");
  const double q = std::log2(extent);
  if (q < 0.0 || q != std::floor(q))
    throw std::invalid_argument("params: extent must be 2^q for integer q >= 0");
  if (depth < 1) throw std::invalid_argument("params: depth must be >= 1");
}

double signed_coord(const Point& p) {
  switch (p.end) {
    case EndTag::BigEnd: return p.s;
    case EndTag::SmallEnd: return -p.s;
    case EndTag::Junction: return 0.0;
  }
  return 0.0;
}

bool same_location(const Point& p, const Point& q) {
  return signed_coord(p) == signed_coord(q);
}

double distance(const Point& p, const Point& q) {
  return std::abs(signed_coord(p) - signed_coord(q));
}

double norm_of(const Point& p) { return 1.0 + std::abs(signed_coord(p)); }

double ball_volume(const Point& p, double r, const Params& params) {
  if (r <= 1.0) return std::pow(r, params.m);
  const bool inside_small = p.end == EndTag::SmallEnd && r <= p.s;
  if (inside_small) return std::pow(r, params.n);
  return std::pow(r, params.m);
}

double DiscreteMeasure::mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.w;
  return m;
}

void DiscreteMeasure::validate() const {
  std::set<double> seen;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (!(a.w > 0.0))
      throw std::invalid_argument("sigma[" + std::to_string(i) + "]: weight must be positive");
    if (a.x.s < 0.0 || std::isnan(a.x.s))
      throw std::invalid_argument("sigma[" + std::to_string(i) + "]: coordinate must be >= 0");
    if (a.x.end == EndTag::Junction && a.x.s != 0.0)
      throw std::invalid_argument("sigma[" + std::to_string(i) + "]: junction atom carries no coordinate");
    if (!seen.insert(signed_coord(a.x)).second)
      throw std::invalid_argument("sigma[" + std::to_string(i) + "]: duplicate atom location");
  }
}

double UpperHalfMeasure::mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.w;
  return m;
}

double UpperHalfMeasure::tilde_mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.t * a.t * a.w;
  return m;
}

void UpperHalfMeasure::validate() const {
  std::set<std::pair<double, double>> seen;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (!(a.w > 0.0))
      throw std::invalid_argument("mu[" + std::to_string(i) + "]: weight must be positive");
    if (!(a.t > 0.0))
      throw std::invalid_argument("mu[" + std::to_string(i) + "]: height t must be positive");
    if (a.x.s < 0.0 || std::isnan(a.x.s))
      throw std::invalid_argument("mu[" + std::to_string(i) + "]: coordinate must be >= 0");
    if (a.x.end == EndTag::Junction && a.x.s != 0.0)
      throw std::invalid_argument("mu[" + std::to_string(i) + "]: junction atom carries no coordinate");
    if (!seen.insert({signed_coord(a.x), a.t}).second)
      throw std::invalid_argument("mu[" + std::to_string(i) + "]: duplicate atom location");
  }
}

DiscreteMeasure restrict_to(const DiscreteMeasure& m, EndTag end) {
  DiscreteMeasure out;
  for (const auto& a : m.atoms)
    if (a.x.end == end) out.atoms.push_back(a);
  return out;
}

UpperHalfMeasure restrict_to(const UpperHalfMeasure& m, EndTag end) {
  UpperHalfMeasure out;
  for (const auto& a : m.atoms)
    if (a.x.end == end) out.atoms.push_back(a);
  return out;
}

}  // namespace ptw
