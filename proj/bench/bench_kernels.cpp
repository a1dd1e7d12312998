// Times the production kernels against the serial reference implementations
// on one mid-size instance.  The reference lane recomputes every kernel value
// from scratch; the production lane assembles the matrix once (OpenMP over
// rows) and reuses it across cubes.  Thread count follows OMP_NUM_THREADS.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ptw/instance.hpp"
#include "ptw/reference.hpp"
#include "ptw/testing.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ptw;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto dt = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - t0);
    best = std::min(best, dt.count());
  }
  return best;
}

void row(const char* name, double serial_ms, double parallel_ms, double rel_gap) {
  std::printf("%-24s %12.2f %12.2f %9.2fx   %.2e\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, rel_gap);
}

}  // namespace

int main() {
  Params params;
  params.depth = 7;
  const Grid grid{params.extent, params.depth};
  const Instance inst = generate(42, 120, 320, params);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
  std::printf("instance: %zu sigma atoms, %zu mu atoms, depth %d\n\n", inst.sigma.atoms.size(),
              inst.mu.atoms.size(), params.depth);
  std::printf("%-24s %12s %12s %10s   %s\n", "kernel", "reference ms", "production ms",
              "speedup", "rel gap");

  OperatorMatrix op_serial, op_parallel;
  const double t_asm_ref =
      time_ms([&] { op_serial = ref::assemble_serial(params, inst.sigma, inst.mu); }, 3);
  const double t_asm = time_ms([&] { op_parallel = assemble(params, inst.sigma, inst.mu); }, 3);
  double gap = 0.0;
  for (std::size_t i = 0; i < op_serial.k.size(); ++i)
    gap = std::max(gap, std::abs(op_serial.k[i] - op_parallel.k[i]) /
                            std::max(op_serial.k[i], op_parallel.k[i]));
  row("matrix assembly", t_asm_ref, t_asm, gap);

  ConstantResult f_ref, f_prod;
  const double t_fwd_ref = time_ms(
      [&] { f_ref = ref::forward_constant_serial(grid, params, inst.sigma, inst.mu); }, 1);
  const double t_fwd =
      time_ms([&] { f_prod = forward_constant(grid, inst.sigma, inst.mu, op_parallel); }, 3);
  row("forward constant", t_fwd_ref, t_fwd,
      std::abs(f_ref.value - f_prod.value) / f_ref.value);

  ConstantResult b_ref, b_prod;
  const double t_bwd_ref = time_ms(
      [&] { b_ref = ref::backward_constant_serial(grid, params, inst.sigma, inst.mu); }, 1);
  const double t_bwd =
      time_ms([&] { b_prod = backward_constant(grid, inst.sigma, inst.mu, op_parallel); }, 3);
  row("backward constant", t_bwd_ref, t_bwd,
      std::abs(b_ref.value - b_prod.value) / b_ref.value);

  double n_svd = 0.0, n_pi = 0.0;
  const double t_norm_ref = time_ms([&] { n_svd = ref::svd_norm(op_parallel); }, 1);
  const double t_norm = time_ms([&] { n_pi = operator_norm(op_parallel).value; }, 3);
  row("operator norm", t_norm_ref, t_norm, std::abs(n_svd - n_pi) / n_svd);

  const MaximalIndex idx(grid, inst.mu);
  Rng rng(7);
  const auto psi = random_function(rng, static_cast<int>(inst.mu.atoms.size()), 1e-2, 1e2);
  std::vector<double> vals_ref(inst.mu.atoms.size()), vals_prod;
  const double t_max_ref = time_ms(
      [&] {
        for (std::size_t i = 0; i < inst.mu.atoms.size(); ++i)
          vals_ref[i] = ref::maximal_query_bruteforce(grid, inst.mu, psi, inst.mu.atoms[i].x,
                                                      inst.mu.atoms[i].t);
      },
      1);
  const double t_max = time_ms([&] { vals_prod = idx.values(psi); }, 3);
  gap = 0.0;
  for (std::size_t i = 0; i < vals_ref.size(); ++i)
    if (vals_ref[i] > 0.0)
      gap = std::max(gap, std::abs(vals_ref[i] - vals_prod[i]) / vals_ref[i]);
  row("maximal function", t_max_ref, t_max, gap);

  return 0;
}
