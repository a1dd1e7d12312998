#pragma once

#include <vector>

#include "ptw/model.hpp"

namespace ptw {

/// The six structurally different kernel cases, keyed by the unordered pair
/// of end tags of the two arguments:
///   KK junction/junction, MK big/junction, NK small/junction,
///   MN big/small, MM big/big, NN small/small.
enum class KernelCase : int { KK = 1, MK = 2, NK = 3, MN = 4, MM = 5, NN = 6 };

const char* to_string(KernelCase c);
KernelCase classify(const Point& x, const Point& y);

/// Structurally distinct kernel pieces of the adjoint-side splitting.
/// Slot convention for piece(): x is the space-side (evaluation) point and
/// y the upper-half-space atom position, matching the per-piece end domains:
///   P11  t / (t+d)^(m+1)                any pair
///   P12  t / ((t+|x|+|y|)^(n+1) |x|^(m-2) |y|^(m-2))    x, y on BigEnd
///   P22  t / ((t+d)^(n+1) |y|^(m-2))    y on BigEnd, x off BigEnd
///   P23  t / ((t+d)^(m+1) |x|^(n-2))    x on SmallEnd, y on BigEnd
///   P42  t / ((t+d)^(n+1) |x|^(m-2))    x on BigEnd, y off BigEnd
///   P43  t / ((t+d)^(m+1) |y|^(n-2))    y on SmallEnd, x on BigEnd
enum class PieceId : int { P11, P12, P22, P23, P42, P43 };

const char* to_string(PieceId id);
PieceId piece_from_string(const std::string& s);

/// x^k for small integer k >= 0.
double ipow(double x, int k);

/// t^-k (t/(t+d))^(k+1), the radially decaying building block.
double radial_term(double t, double d, int k);

/// Model Poisson kernel: the sum of the comparison terms of the applicable
/// case, symmetrised so poisson(t,x,y) == poisson(t,y,x) exactly.  For the
/// big/small case the two slot assignments of the norm-weighted terms are
/// averaged; the other five cases are symmetric as written.
/// Throws std::invalid_argument for t <= 0.  Strictly positive.
double poisson(const Params& params, double t, const Point& x, const Point& y);

/// The individual comparison terms whose sum is poisson(); their order is
/// the order the case lists them in.
std::vector<double> poisson_summands(const Params& params, double t, const Point& x,
                                     const Point& y);

/// One kernel piece; throws std::invalid_argument when t <= 0 or an argument
/// is outside the piece's end domain.
double piece(const Params& params, PieceId id, double t, const Point& x, const Point& y);

/// The piece formula without the end-domain guard.  Norms are defined for
/// every point, so geometric probes may move the evaluation point across
/// the junction; piece() keeps the strict contract.
double piece_unchecked(const Params& params, PieceId id, double t, const Point& x,
                       const Point& y);

}  // namespace ptw
