#include "ptw/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace ptw {

OperatorMatrix assemble(const Params& params, const DiscreteMeasure& sigma,
                        const UpperHalfMeasure& mu) {
  OperatorMatrix op;
  op.rows = static_cast<int>(mu.atoms.size());
  op.cols = static_cast<int>(sigma.atoms.size());
  op.k.resize(static_cast<std::size_t>(op.rows) * op.cols);
  op.sw.resize(op.cols);
  op.mw.resize(op.rows);
  for (int j = 0; j < op.cols; ++j) op.sw[j] = sigma.atoms[j].w;
  for (int i = 0; i < op.rows; ++i) op.mw[i] = mu.atoms[i].w;

#pragma omp parallel for schedule(static)
  for (int i = 0; i < op.rows; ++i) {
    const auto& a = mu.atoms[i];
    double* row = op.k.data() + static_cast<std::size_t>(i) * op.cols;
    for (int j = 0; j < op.cols; ++j) row[j] = poisson(params, a.t, a.x, sigma.atoms[j].x);
  }
  return op;
}

std::vector<double> apply_forward(const OperatorMatrix& op, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != op.cols)
    throw std::invalid_argument("apply_forward: f must be defined on all sigma atoms");
  std::vector<double> out(op.rows);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < op.rows; ++i) {
    long double acc = 0.0L;
    const double* row = op.k.data() + static_cast<std::size_t>(i) * op.cols;
    for (int j = 0; j < op.cols; ++j) acc += static_cast<long double>(row[j]) * f[j] * op.sw[j];
    out[i] = static_cast<double>(acc);
  }
  return out;
}

std::vector<double> apply_adjoint(const OperatorMatrix& op, const std::vector<double>& g) {
  if (static_cast<int>(g.size()) != op.rows)
    throw std::invalid_argument("apply_adjoint: g must be defined on all mu atoms");
  std::vector<double> out(op.cols);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < op.cols; ++j) {
    long double acc = 0.0L;
    for (int i = 0; i < op.rows; ++i)
      acc += static_cast<long double>(op.entry(i, j)) * g[i] * op.mw[i];
    out[j] = static_cast<double>(acc);
  }
  return out;
}

double dot_sigma(const OperatorMatrix& op, const std::vector<double>& a,
                 const std::vector<double>& b) {
  long double acc = 0.0L;
  for (int j = 0; j < op.cols; ++j) acc += static_cast<long double>(a[j]) * b[j] * op.sw[j];
  return static_cast<double>(acc);
}

double dot_mu(const OperatorMatrix& op, const std::vector<double>& a,
              const std::vector<double>& b) {
  long double acc = 0.0L;
  for (int i = 0; i < op.rows; ++i) acc += static_cast<long double>(a[i]) * b[i] * op.mw[i];
  return static_cast<double>(acc);
}

namespace {

double vec_norm(const std::vector<double>& v) {
  long double acc = 0.0L;
  for (double x : v) acc += static_cast<long double>(x) * x;
  return std::sqrt(static_cast<double>(acc));
}

// Weighted matrix in factored form: A = diag(rmw) K diag(rsw).
struct Weighted {
  const OperatorMatrix* op;
  std::vector<double> rsw, rmw;

  explicit Weighted(const OperatorMatrix& m) : op(&m), rsw(m.cols), rmw(m.rows) {
    for (int j = 0; j < m.cols; ++j) rsw[j] = std::sqrt(m.sw[j]);
    for (int i = 0; i < m.rows; ++i) rmw[i] = std::sqrt(m.mw[i]);
  }

  std::vector<double> forward(const std::vector<double>& v) const {
    std::vector<double> u(op->rows);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < op->rows; ++i) {
      long double acc = 0.0L;
      const double* row = op->k.data() + static_cast<std::size_t>(i) * op->cols;
      for (int j = 0; j < op->cols; ++j) acc += static_cast<long double>(row[j]) * rsw[j] * v[j];
      u[i] = rmw[i] * static_cast<double>(acc);
    }
    return u;
  }

  std::vector<double> adjoint(const std::vector<double>& u) const {
    std::vector<double> w(op->cols);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < op->cols; ++j) {
      long double acc = 0.0L;
      for (int i = 0; i < op->rows; ++i)
        acc += static_cast<long double>(op->entry(i, j)) * rmw[i] * u[i];
      w[j] = rsw[j] * static_cast<double>(acc);
    }
    return w;
  }
};

NormResult power_iterate(const Weighted& a, bool transpose, double tol, int max_iters) {
  const int nv = transpose ? a.op->rows : a.op->cols;
  if (a.op->rows == 0 || a.op->cols == 0)
    throw std::invalid_argument("operator_norm: both measures must be nonempty");

  std::vector<double> v(nv, 1.0 / std::sqrt(static_cast<double>(nv)));
  NormResult res;
  for (int it = 1; it <= max_iters; ++it) {
    std::vector<double> u = transpose ? a.adjoint(v) : a.forward(v);
    const double nu = [&] {
      long double acc = 0.0L;
      for (double x : u) acc += static_cast<long double>(x) * x;
      return static_cast<double>(acc);
    }();
    std::vector<double> w = transpose ? a.forward(u) : a.adjoint(u);  // (A^T A) v or (A A^T) v
    long double racc = 0.0L;
    for (int j = 0; j < nv; ++j) {
      const long double r = static_cast<long double>(w[j]) - static_cast<long double>(nu) * v[j];
      racc += r * r;
    }
    res.iters = it;
    res.value = std::sqrt(nu);
    res.residual = nu > 0.0 ? std::sqrt(static_cast<double>(racc)) / nu : 0.0;
    if (transpose) {
      res.left = v;
      res.right = u;
    } else {
      res.right = v;
      res.left = u;
    }
    if (res.residual <= tol) {
      res.converged = true;
      break;
    }
    const double wn = vec_norm(w);
    if (wn == 0.0) {  // zero transfer cannot occur for a positive kernel
      res.converged = true;
      break;
    }
    for (int j = 0; j < nv; ++j) v[j] = w[j] / wn;
  }
  const double ln = vec_norm(res.left), rn = vec_norm(res.right);
  if (ln > 0.0)
    for (double& x : res.left) x /= ln;
  if (rn > 0.0)
    for (double& x : res.right) x /= rn;
  return res;
}

}  // namespace

NormResult operator_norm(const OperatorMatrix& op, double tol, int max_iters) {
  return power_iterate(Weighted(op), false, tol, max_iters);
}

NormResult operator_norm_adjoint(const OperatorMatrix& op, double tol, int max_iters) {
  return power_iterate(Weighted(op), true, tol, max_iters);
}

double jacobi_svd_norm(const OperatorMatrix& op) {
  // work with the shape that has fewer columns
  const bool flip = op.cols > op.rows;
  const int r = flip ? op.cols : op.rows;
  const int c = flip ? op.rows : op.cols;
  const Weighted wgt(op);
  std::vector<double> a(static_cast<std::size_t>(r) * c);
  for (int i = 0; i < op.rows; ++i)
    for (int j = 0; j < op.cols; ++j) {
      const double v = wgt.rmw[i] * op.entry(i, j) * wgt.rsw[j];
      if (flip)
        a[static_cast<std::size_t>(j) * c + i] = v;
      else
        a[static_cast<std::size_t>(i) * c + j] = v;
    }
  auto col_dot = [&](int p, int q) {
    long double acc = 0.0L;
    for (int i = 0; i < r; ++i)
      acc += static_cast<long double>(a[static_cast<std::size_t>(i) * c + p]) *
             a[static_cast<std::size_t>(i) * c + q];
    return static_cast<double>(acc);
  };
  const double eps = 1e-14;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < c - 1; ++p)
      for (int q = p + 1; q < c; ++q) {
        const double app = col_dot(p, p), aqq = col_dot(q, q), apq = col_dot(p, q);
        if (std::abs(apq) <= eps * std::sqrt(app * aqq)) continue;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t), sn = cs * t;
        for (int i = 0; i < r; ++i) {
          double& xp = a[static_cast<std::size_t>(i) * c + p];
          double& xq = a[static_cast<std::size_t>(i) * c + q];
          const double np = cs * xp - sn * xq;
          const double nq = sn * xp + cs * xq;
          xp = np;
          xq = nq;
        }
        rotated = true;
      }
    if (!rotated) break;
  }
  double best = 0.0;
  for (int p = 0; p < c; ++p) best = std::max(best, col_dot(p, p));
  return std::sqrt(best);
}

NormResult operator_norm_robust(const OperatorMatrix& op, double tol, int max_iters) {
  NormResult res = operator_norm(op, tol, max_iters);
  if (!res.converged && op.rows + op.cols <= 512) {
    res.value = jacobi_svd_norm(op);
    res.used_svd_fallback = true;
    res.converged = true;
  }
  return res;
}

}  // namespace ptw
