#pragma once

#include <vector>

#include "ptw/kernel.hpp"
#include "ptw/model.hpp"

namespace ptw {

/// Dense kernel matrix of an instance: rows are mu atoms (x,t), columns are
/// sigma atoms y, entry P_t(x,y).  Weight vectors are cached alongside so
/// the weighted operator W_mu^(1/2) K W_sigma^(1/2) never needs the measures
/// again.  Assembly parallelises over rows.
struct OperatorMatrix {
  int rows = 0;  // mu atoms
  int cols = 0;  // sigma atoms
  std::vector<double> k;   // row-major, rows*cols
  std::vector<double> sw;  // sigma weights
  std::vector<double> mw;  // mu weights

  double entry(int i, int j) const { return k[static_cast<std::size_t>(i) * cols + j]; }
};

OperatorMatrix assemble(const Params& params, const DiscreteMeasure& sigma,
                        const UpperHalfMeasure& mu);

/// (P_sigma f)(x_i, t_i) = sum_j P_{t_i}(x_i, y_j) f(y_j) sigma_j.
std::vector<double> apply_forward(const OperatorMatrix& op, const std::vector<double>& f);

/// (P*_mu g)(y_j) = sum_i P_{t_i}(x_i, y_j) g(x_i, t_i) mu_i.
std::vector<double> apply_adjoint(const OperatorMatrix& op, const std::vector<double>& g);

/// Weighted pairings <a, b>_sigma and <a, b>_mu.
double dot_sigma(const OperatorMatrix& op, const std::vector<double>& a,
                 const std::vector<double>& b);
double dot_mu(const OperatorMatrix& op, const std::vector<double>& a,
              const std::vector<double>& b);

struct NormResult {
  double value = 0.0;
  int iters = 0;
  double residual = 0.0;  // ||A^T A v - value^2 v|| / value^2, v unit
  bool converged = false;
  bool used_svd_fallback = false;
  std::vector<double> left;   // mu-indexed
  std::vector<double> right;  // sigma-indexed
};

/// Largest singular value of the weighted matrix, by power iteration on the
/// normal operator with the deterministic all-ones start.  On
/// non-convergence the result carries the best estimate and residual.
NormResult operator_norm(const OperatorMatrix& op, double tol = 1e-10, int max_iters = 10000);

/// Same quantity computed through the adjoint route (power iteration on
/// A A^T); used to confirm the dual norm equality.
NormResult operator_norm_adjoint(const OperatorMatrix& op, double tol = 1e-10,
                                 int max_iters = 10000);

/// operator_norm with a dense one-sided-Jacobi SVD fallback when power
/// iteration fails to converge and the instance has at most 512 atoms total.
NormResult operator_norm_robust(const OperatorMatrix& op, double tol = 1e-10,
                                int max_iters = 10000);

/// Largest singular value by one-sided Jacobi, self-contained.
double jacobi_svd_norm(const OperatorMatrix& op);

}  // namespace ptw
