#include "ptw/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ptw {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

Point parse_atom_point(const json& a, const std::string& where) {
  const EndTag end = end_from_string(a.at("end").get<std::string>());
  if (end == EndTag::Junction) {
    if (a.contains("s") && a.at("s").get<double>() != 0.0)
      throw std::runtime_error(where + ": junction atom carries no coordinate");
    return Point::junction();
  }
  return {end, a.at("s").get<double>()};
}

}  // namespace

Point parse_point(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    if (spec == "junction") return Point::junction();
    throw std::invalid_argument("point spec '" + spec + "' (expected end:coord or junction)");
  }
  const EndTag end = end_from_string(spec.substr(0, colon));
  if (end == EndTag::Junction) return Point::junction();
  const double s = std::stod(spec.substr(colon + 1));
  if (s < 0.0) throw std::invalid_argument("point spec '" + spec + "': coordinate must be >= 0");
  return {end, s};
}

Params load_params(const std::string& path) {
  const json j = read_json(path);
  Params p;
  try {
    p.m = j.at("m").get<int>();
    p.n = j.at("n").get<int>();
    p.extent = j.at("S").get<double>();
    p.depth = j.at("L").get<int>();
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  p.validate();
  return p;
}

Measures load_measures(const std::string& path) {
  const json j = read_json(path);
  Measures m;
  const json sigma = j.value("sigma", json::array());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const std::string where = path + ": sigma[" + std::to_string(i) + "]";
    try {
      m.sigma.atoms.push_back(
          {parse_atom_point(sigma[i], where), sigma[i].at("w").get<double>()});
    } catch (const json::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }
  const json mu = j.value("mu", json::array());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const std::string where = path + ": mu[" + std::to_string(i) + "]";
    try {
      m.mu.atoms.push_back({parse_atom_point(mu[i], where), mu[i].at("t").get<double>(),
                            mu[i].at("w").get<double>()});
    } catch (const json::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }
  try {
    m.sigma.validate();
    m.mu.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return m;
}

void save_measures(const std::string& path, const Measures& m) {
  json j;
  j["sigma"] = json::array();
  for (const auto& a : m.sigma.atoms) {
    json atom{{"end", to_string(a.x.end)}, {"w", a.w}};
    if (a.x.end != EndTag::Junction) atom["s"] = a.x.s;
    j["sigma"].push_back(atom);
  }
  j["mu"] = json::array();
  for (const auto& a : m.mu.atoms) {
    json atom{{"end", to_string(a.x.end)}, {"t", a.t}, {"w", a.w}};
    if (a.x.end != EndTag::Junction) atom["s"] = a.x.s;
    j["mu"].push_back(atom);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

int snap_measures(const Grid& grid, Measures& m) {
  int moved = 0;
  for (auto& a : m.sigma.atoms) {
    const Point p = grid.snap(a.x);
    if (signed_coord(p) != signed_coord(a.x)) ++moved;
    a.x = p;
  }
  for (auto& a : m.mu.atoms) {
    const Point p = grid.snap(a.x);
    if (signed_coord(p) != signed_coord(a.x)) ++moved;
    a.x = p;
  }
  return moved;
}

std::vector<OmegaMask> load_omega(const std::string& path, const Grid& grid) {
  const json j = read_json(path);
  std::vector<OmegaMask> out;
  for (const auto& [name, end] :
       {std::pair<const char*, EndTag>{"big", EndTag::BigEnd}, {"small", EndTag::SmallEnd}}) {
    if (!j.contains(name)) continue;
    OmegaMask mask;
    mask.end = end;
    mask.cells.assign(grid.cells(), 0);
    for (const auto& iv : j.at(name)) {
      const double lo = iv.at(0).get<double>(), hi = iv.at(1).get<double>();
      for (int c = 0; c < grid.cells(); ++c) {
        const double mid = (c + 0.5) * grid.resolution();
        if (lo <= mid && mid < hi) mask.cells[c] = 1;
      }
    }
    out.push_back(std::move(mask));
  }
  return out;
}

std::vector<double> load_psi(const std::string& path, std::size_t n_mu) {
  const json j = read_json(path);
  std::vector<double> psi;
  for (const auto& v : j.at("psi")) psi.push_back(v.get<double>());
  if (psi.size() != n_mu)
    throw std::runtime_error(path + ": psi has " + std::to_string(psi.size()) +
                             " values but the measure has " + std::to_string(n_mu) + " atoms");
  return psi;
}

}  // namespace ptw
