#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptw/dyadic.hpp"
#include "ptw/kernel.hpp"

namespace ptw {

/// Which split of the upper-half-space function a piece acts on and where
/// the resulting potential is evaluated.  phi_end filters the mu atoms
/// (the support of phi_e), eval_end is the end carrying the level sets.
struct PieceContext {
  PieceId piece = PieceId::P11;
  EndTag phi_end = EndTag::BigEnd;
  EndTag eval_end = EndTag::BigEnd;
};

PieceContext canonical_context(PieceId id);
bool compatible(PieceId id, EndTag phi_end);

/// Constant of the maximal principle for the given piece: 4^(m+1) for the
/// purely radial piece, 4^(n+1) when the norm weight rides the atom slot,
/// 4^(m+n-1) when it rides the evaluation slot (one factor 4^(m-2) from
/// |z| <= 4|x|, one 4^(n+1) from the distance comparison).
double maximal_principle_constant(PieceId id, const Params& params);

/// Smallest integer shift with 2^shift > constant + 1.
int default_shift(PieceId id, const Params& params);

/// P*_{mu,piece}(phi restricted to phi_end) at a space point.
double adjoint_piece_value(const Params& params, const UpperHalfMeasure& mu,
                           const std::vector<double>& phi, EndTag phi_end, PieceId id,
                           const Point& at);

struct StopEntry {
  DyadicCube cube;
  double sigma_cube = 0.0;  // sigma mass of the cube, eval-end atoms only
  double sigma_f = 0.0;     // sigma mass of F_k(I) = I inside the shifted annulus
  std::vector<int> f_cells;
  bool qualifies = false;   // sigma_cube > 0 and sigma_f >= delta * sigma_cube
};

struct LadderLevel {
  int k = 0;
  OmegaMask omega;       // eval-end cells with potential value > 2^k
  WhitneyFamily family;  // Whitney decomposition of omega
  std::vector<StopEntry> stops;
};

/// The level-set ladder of one kernel piece: superlevel sets Omega_k of the
/// adjoint potential over the eval-end grid cells, their Whitney families,
/// and the stopping sets F_k(I).  Values are taken at cell centres, which is
/// where snapped atoms sit, so cell membership and pointwise membership
/// agree.
struct Ladder {
  PieceId piece = PieceId::P11;
  EndTag phi_end = EndTag::BigEnd;
  EndTag eval_end = EndTag::BigEnd;
  int shift = 0;
  double delta = 0.25;

  std::vector<double> values;  // potential at eval-end cell centres
  std::vector<double> sigma_cells;
  int k_lo = 0;
  int k_hi = -1;  // empty ladder when k_hi < k_lo
  std::vector<LadderLevel> levels;

  bool empty() const { return k_hi < k_lo; }
  const LadderLevel* level(int k) const;
};

/// Builds the full ladder.  phi is given per mu atom and must be
/// nonnegative; atoms off phi_end are ignored.  shift < 0 selects the
/// piece's default shift.
Ladder build_ladder(const Grid& grid, const Params& params, const DiscreteMeasure& sigma,
                    const UpperHalfMeasure& mu, const std::vector<double>& phi, PieceId id,
                    EndTag phi_end, EndTag eval_end, int shift, double delta);

struct LadderChecks {
  bool nesting_ok = false;   // Omega_{k+1} inside Omega_k
  bool disjoint_ok = false;  // Whitney members disjoint; F_k(I) disjoint in k
  double telescope_sum = 0.0;
  double telescope_integral = 0.0;
  bool telescope_ok = false;  // sum <= integral <= 4 sum
  double absorb_lhs = 0.0;
  double absorb_rhs = 0.0;
  bool absorb_ok = false;  // small-stopping mass <= delta * level-set mass
};

LadderChecks check_ladder(const Grid& grid, const Ladder& ladder);

struct MaxPrincipleConfig {
  DyadicCube cube;
  Point x, z, y;
  double t = 0.0;
  double ratio = 0.0;
};

struct MaxPrincipleReport {
  PieceId piece = PieceId::P11;
  double constant = 0.0;
  int samples = 0;
  double max_ratio = 0.0;
  bool pass = false;
  MaxPrincipleConfig worst;
};

/// Samples admissible configurations (x in a dyadic cube I, z at distance
/// between l(I) and 3 l(I) from x, an atom (y,t) outside the metric box
/// 3I x [0, 3 l(I)]) and checks the pointwise domination
/// piece(t, x, y) <= C piece(t, z, y).  Supported pieces: 1,1  1,2  2,2  4,2.
MaxPrincipleReport maximal_principle_check(const Grid& grid, const Params& params, PieceId id,
                                           int samples, std::uint64_t seed);

struct PrincipalForest {
  DyadicCube root;
  std::vector<DyadicCube> cubes;  // selected cubes, root first
  std::vector<int> parent;        // index into cubes, -1 for the root
  std::vector<double> alpha;
  double carleson_sum = 0.0;  // sum over selected cubes of alpha^2 * box mass

  /// Index of the minimal selected ancestor of c (c itself included when
  /// selected); nullopt when none exists.
  std::optional<int> minimal_ancestor(const Grid& grid, const DyadicCube& c) const;
};

/// alpha(J): the box average of phi/t against t^2 dmu.
double alpha_average(const MaximalIndex& index, const UpperHalfMeasure& mu,
                     const std::vector<double>& phi, const DyadicCube& cube);

/// Builds the principal-cube family from the root by the tenfold-growth
/// rule: a descendant J joins when alpha(J) >= 10 alpha(G) for its current
/// selected ancestor G.  Throws when the root box carries no t^2 mu mass.
PrincipalForest principal_cubes(const MaximalIndex& index, const UpperHalfMeasure& mu,
                                const std::vector<double>& phi, const DyadicCube& root);

struct CardinalityReport {
  int bound = 0;      // ceil(1/delta)
  int max_count = 0;  // max over cubes of #{k : I in I_k and F_k(I) heavy}
  bool pass = false;
  int charge_count_max = 0;  // max over principal cubes of the levels charging one
};

/// Exact per-cube stopping count bound plus the empirical count of levels k
/// through which a fixed principal cube is charged.
CardinalityReport cardinality_check(const Grid& grid, const Ladder& ladder,
                                    const PrincipalForest* forest);

}  // namespace ptw
