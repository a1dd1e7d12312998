#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ptw/dyadic.hpp"
#include "ptw/model.hpp"

namespace ptw {

/// Parse "big:1.5", "small:0.25" or "junction" into a point.
Point parse_point(const std::string& spec);

Params load_params(const std::string& path);

struct Measures {
  DiscreteMeasure sigma;
  UpperHalfMeasure mu;
};

/// Reads {"sigma":[{"end","s","w"}...], "mu":[{"end","s","t","w"}...]}.
/// Parse errors name the offending atom index.
Measures load_measures(const std::string& path);
void save_measures(const std::string& path, const Measures& m);

/// Snap atom positions to grid cell centres; returns how many atoms moved.
int snap_measures(const Grid& grid, Measures& m);

/// Reads {"big":[[lo,hi]...], "small":[[lo,hi]...]}; a cell belongs to the
/// set when its centre lies in one of the intervals.  Ends may be omitted.
std::vector<OmegaMask> load_omega(const std::string& path, const Grid& grid);

/// Reads {"psi":[...]} with one value per mu atom.
std::vector<double> load_psi(const std::string& path, std::size_t n_mu);

}  // namespace ptw
