#pragma once

#include <vector>

#include "ptw/dyadic.hpp"
#include "ptw/operators.hpp"
#include "ptw/testing.hpp"

namespace ptw::ref {

// Slow, obvious, serial implementations.  They are the oracles the tests
// hold the production kernels against and the baseline the benchmark times;
// they share nothing with the parallel paths beyond the geometry helpers.

/// Largest singular value of the weighted matrix via a library SVD.
double svd_norm(const OperatorMatrix& op);

/// Serial kernel-matrix assembly.
OperatorMatrix assemble_serial(const Params& params, const DiscreteMeasure& sigma,
                               const UpperHalfMeasure& mu);

/// Testing constants recomputed from scratch: every cube re-derives
/// P_sigma(1_I) (resp. P*_mu(t 1_box)) by direct kernel evaluation.
ConstantResult forward_constant_serial(const Grid& grid, const Params& params,
                                       const DiscreteMeasure& sigma, const UpperHalfMeasure& mu,
                                       const TestingOptions& opts = {});
ConstantResult backward_constant_serial(const Grid& grid, const Params& params,
                                        const DiscreteMeasure& sigma, const UpperHalfMeasure& mu,
                                        const TestingOptions& opts = {});

/// Whitney family by full enumeration: every cube is tested for the two
/// conditions, then non-maximal cubes are discarded.
WhitneyFamily whitney_bruteforce(const Grid& grid, const OmegaMask& omega);

/// Maximal-function query by enumerating every box of the grid.
double maximal_query_bruteforce(const Grid& grid, const UpperHalfMeasure& mu,
                                const std::vector<double>& psi, const Point& p, double t);

/// Box average of phi/t against t^2 dmu by scanning all atoms.
double alpha_bruteforce(const Grid& grid, const UpperHalfMeasure& mu,
                        const std::vector<double>& phi, const DyadicCube& cube);

}  // namespace ptw::ref
