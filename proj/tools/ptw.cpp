// Command-line front end: instance generation, experiment orchestration and
// machine-readable reports.  Exit codes: 0 ok, 1 assertion failure, 2 usage
// or IO error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptw/instance.hpp"
#include "ptw/io.hpp"
#include "ptw/kernel.hpp"
#include "ptw/model.hpp"
#include "ptw/proofscope.hpp"
#include "ptw/testing.hpp"

using nlohmann::json;
using namespace ptw;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << j.dump(2) << "\n";
}

struct Common {
  Params params;
  std::string params_path;
  std::string measures_path;
  std::string out_path;
  std::uint64_t seed = 7;
  int instances = 200;
  int atoms = 32;
  double delta = 0.25;
  double tol = 1e-10;
  std::string hat = "hat-of-triple";

  void add_params_flags(CLI::App* cmd) {
    cmd->add_option("--m", params.m, "big-end dimension exponent")->envname("PTW_M");
    cmd->add_option("--n", params.n, "small-end dimension exponent")->envname("PTW_N");
    cmd->add_option("--S", params.extent, "end length (power of two)")->envname("PTW_S");
    cmd->add_option("--L", params.depth, "dyadic depth")->envname("PTW_L");
    cmd->add_option("--params", params_path, "JSON parameter file overriding the flags")
        ->envname("PTW_PARAMS");
  }

  Params resolve_params() const {
    Params p = params;
    if (!params_path.empty()) p = load_params(params_path);
    p.validate();
    return p;
  }

  Measures load_snapped(const Grid& grid) const {
    Measures m = load_measures(measures_path);
    const int moved = snap_measures(grid, m);
    if (moved > 0)
      std::cerr << "note: snapped " << moved << " atom position(s) to the depth-" << grid.depth
                << " grid\n";
    m.sigma.validate();
    m.mu.validate();
    return m;
  }

  TestingOptions testing_options() const {
    TestingOptions opts;
    opts.hat = hat_from_string(hat);
    opts.tol_norm = tol;
    return opts;
  }
};

json cube_json(const Grid& grid, const DyadicCube& c) {
  return json{{"id", c.id()},
              {"end", to_string(c.end)},
              {"level", c.level},
              {"index", c.index},
              {"lo", cube_lo(grid, c)},
              {"hi", cube_hi(grid, c)}};
}

json report_json(const TestingReport& rep) {
  return json{{"params", {{"m", rep.params.m},
                          {"n", rep.params.n},
                          {"S", rep.params.extent},
                          {"L", rep.params.depth}}},
              {"instance", {{"seed", rep.seed}, {"n_sigma", rep.n_sigma}, {"n_mu", rep.n_mu}}},
              {"hat_convention", to_string(rep.hat)},
              {"N", rep.N},
              {"norm_iters", rep.norm.iters},
              {"norm_residual", rep.norm.residual},
              {"norm_converged", rep.norm.converged},
              {"norm_used_svd_fallback", rep.norm.used_svd_fallback},
              {"F", rep.F},
              {"F_achiever", rep.F_achiever},
              {"B", rep.B},
              {"B_achiever", rep.B_achiever},
              {"ratio", rep.ratio},
              {"F_over_N", rep.F_over_N},
              {"B_over_N", rep.B_over_N},
              {"necessity_ok", rep.necessity_ok},
              {"ratio_ok", rep.ratio_ok}};
}

int run_kernel_eval(const Common& cfg, const std::string& xs, const std::string& ys, double t) {
  const Params p = cfg.resolve_params();
  const Point x = parse_point(xs), y = parse_point(ys);
  const auto summands = poisson_summands(p, t, x, y);
  double total = 0.0;
  for (double s : summands) total += s;
  const KernelCase kc = classify(x, y);
  emit(json{{"case", to_string(kc)},
            // the big/small case averages the two slot assignments of its
            // norm-weighted terms
            {"symmetrized", kc == KernelCase::MN},
            {"summands", summands},
            {"total", total}},
       cfg.out_path);
  return 0;
}

int run_decompose(const Common& cfg, const std::string& omega_path) {
  const Params p = cfg.resolve_params();
  const Grid grid{p.extent, p.depth};
  json out;
  out["families"] = json::array();
  for (const auto& mask : load_omega(omega_path, grid)) {
    const WhitneyFamily fam = whitney(grid, mask);
    json members = json::array();
    for (const auto& c : fam.members) members.push_back(cube_json(grid, c));
    out["families"].push_back(json{{"end", to_string(mask.end)},
                                   {"degenerate", fam.degenerate},
                                   {"members", members}});
  }
  emit(out, cfg.out_path);
  return 0;
}

int run_maximal(const Common& cfg, const std::string& psi_path) {
  const Params p = cfg.resolve_params();
  const Grid grid{p.extent, p.depth};
  const Measures m = cfg.load_snapped(grid);
  const auto psi = load_psi(psi_path, m.mu.atoms.size());
  const MaximalIndex idx(grid, m.mu);
  const auto vals = idx.values(psi);
  json atoms = json::array();
  for (std::size_t i = 0; i < vals.size(); ++i)
    atoms.push_back(json{{"end", to_string(m.mu.atoms[i].x.end)},
                         {"s", m.mu.atoms[i].x.s},
                         {"t", m.mu.atoms[i].t},
                         {"value", vals[i]}});
  emit(json{{"values", atoms}}, cfg.out_path);
  return 0;
}

int run_norm(const Common& cfg) {
  const Params p = cfg.resolve_params();
  const Grid grid{p.extent, p.depth};
  const Measures m = cfg.load_snapped(grid);
  const OperatorMatrix op = assemble(p, m.sigma, m.mu);
  const NormResult n = operator_norm_robust(op, cfg.tol);
  emit(json{{"N", n.value},
            {"iters", n.iters},
            {"residual", n.residual},
            {"converged", n.converged},
            {"used_svd_fallback", n.used_svd_fallback}},
       cfg.out_path);
  return n.converged ? 0 : 1;
}

int run_verify(const Common& cfg) {
  const Params p = cfg.resolve_params();
  const Grid grid{p.extent, p.depth};
  const Measures m = cfg.load_snapped(grid);
  const TestingReport rep = verify(p, m.sigma, m.mu, cfg.testing_options());
  emit(report_json(rep), cfg.out_path);
  if (!rep.necessity_ok) std::cerr << "necessity violated: testing constant exceeds the norm\n";
  if (!rep.ratio_ok) std::cerr << "sufficiency ratio exceeds the configured ceiling\n";
  return rep.ok() ? 0 : 1;
}

int run_sweep(const Common& cfg) {
  const Params p = cfg.resolve_params();
  const TestingOptions opts = cfg.testing_options();
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<TestingReport> rows(cfg.instances);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < cfg.instances; ++i) {
    const Instance inst = generate(cfg.seed + i, cfg.atoms, cfg.atoms, p);
    rows[i] = verify(p, inst.sigma, inst.mu, opts);
    rows[i].seed = inst.seed;
  }

  std::string csv = "seed,n_sigma,n_mu,N,F,B,ratio,F_achiever,B_achiever\n";
  bool ok = true;
  double max_ratio = 0.0;
  for (const auto& r : rows) {
    csv += std::to_string(r.seed) + "," + std::to_string(r.n_sigma) + "," +
           std::to_string(r.n_mu) + "," + fmt(r.N) + "," + fmt(r.F) + "," + fmt(r.B) + "," +
           fmt(r.ratio) + "," + r.F_achiever + "," + r.B_achiever + "\n";
    ok = ok && r.ok();
    max_ratio = std::max(max_ratio, r.ratio);
  }
  if (cfg.out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
    out << csv;
  }
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "sweep: " << cfg.instances << " instances, max ratio " << max_ratio << ", "
            << dt << " s\n";
  return ok ? 0 : 1;
}

int run_proofscope(const Common& cfg, const std::string& piece_name,
                   const std::string& phi_path) {
  const Params p = cfg.resolve_params();
  const Grid grid{p.extent, p.depth};
  const Measures m = cfg.load_snapped(grid);
  const PieceId id = piece_from_string(piece_name);
  const PieceContext ctx = canonical_context(id);

  std::vector<double> phi(m.mu.atoms.size(), 1.0);
  if (!phi_path.empty()) phi = load_psi(phi_path, m.mu.atoms.size());

  const Ladder lad =
      build_ladder(grid, p, m.sigma, m.mu, phi, id, ctx.phi_end, ctx.eval_end, -1, cfg.delta);
  const LadderChecks checks = check_ladder(grid, lad);
  const MaxPrincipleReport mp = maximal_principle_check(grid, p, id, 10000, cfg.seed);

  json out{{"piece", to_string(id)},
           {"phi_end", to_string(ctx.phi_end)},
           {"eval_end", to_string(ctx.eval_end)},
           {"delta", cfg.delta},
           {"shift", lad.shift},
           {"levels", lad.empty() ? 0 : lad.k_hi - lad.k_lo + 1},
           {"nesting_ok", checks.nesting_ok},
           {"disjoint_ok", checks.disjoint_ok},
           {"telescoping",
            {{"sum", checks.telescope_sum},
             {"integral", checks.telescope_integral},
             {"pass", checks.telescope_ok}}},
           {"absorption",
            {{"lhs", checks.absorb_lhs}, {"rhs", checks.absorb_rhs}, {"pass", checks.absorb_ok}}},
           {"maximal_principle",
            {{"constant", mp.constant},
             {"samples", mp.samples},
             {"max_ratio", mp.max_ratio},
             {"pass", mp.pass}}}};
  if (!mp.pass)
    out["maximal_principle"]["worst"] = json{{"cube", mp.worst.cube.id()},
                                             {"x", signed_coord(mp.worst.x)},
                                             {"z", signed_coord(mp.worst.z)},
                                             {"y", signed_coord(mp.worst.y)},
                                             {"t", mp.worst.t},
                                             {"ratio", mp.worst.ratio}};

  bool carleson_ok = true;
  const MaximalIndex idx(grid, m.mu);
  const DyadicCube root{ctx.eval_end, 0, 0};
  double phi_l2 = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) phi_l2 += phi[i] * phi[i] * m.mu.atoms[i].w;
  std::optional<PrincipalForest> forest;
  if (idx.box_tilde_mass(root) > 0.0) {
    forest = principal_cubes(idx, m.mu, phi, root);
    carleson_ok = forest->carleson_sum <= 16.0 * phi_l2 * (1 + 1e-12);
    out["principal_cubes"] = json{{"root", root.id()},
                                  {"selected", forest->cubes.size()},
                                  {"carleson_sum", forest->carleson_sum},
                                  {"budget", 16.0 * phi_l2},
                                  {"pass", carleson_ok}};
  } else {
    out["principal_cubes"] = json{{"root", root.id()}, {"note", "root box carries no mass"}};
  }

  const CardinalityReport card = cardinality_check(grid, lad, forest ? &*forest : nullptr);
  out["stopping_counts"] = json{{"bound", card.bound},
                                {"max_count", card.max_count},
                                {"pass", card.pass},
                                {"charge_count_max", card.charge_count_max}};

  emit(out, cfg.out_path);
  const bool ok = checks.nesting_ok && checks.disjoint_ok && checks.telescope_ok &&
                  checks.absorb_ok && mp.pass && card.pass && carleson_ok;
  return ok ? 0 : 1;
}

int run_demo(const Common& cfg) {
  const Params p = cfg.resolve_params();
  json rows = json::array();
  for (double r = 2.0; r <= p.extent / 2.0; r *= 2.0) {
    const Point x = Point::small(r);
    const double v1 = ball_volume(x, r, p), v2 = ball_volume(x, 2.0 * r, p);
    rows.push_back(json{{"r", r},
                        {"V_r", v1},
                        {"V_2r", v2},
                        {"ratio", v2 / v1},
                        {"r_pow_m_minus_n", std::pow(r, p.m - p.n)}});
  }
  emit(json{{"non_doubling", rows}}, cfg.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-weight Poisson testing laboratory on the two-ended profile"};
  app.require_subcommand(1);

  Common cfg;

  auto* kernel_cmd = app.add_subcommand("kernel", "kernel evaluation");
  auto* eval_cmd = kernel_cmd->add_subcommand("eval", "evaluate the kernel at one configuration");
  kernel_cmd->require_subcommand(1);
  std::string xs = "big:1.0", ys = "big:1.0";
  double tval = 1.0;
  cfg.add_params_flags(eval_cmd);
  eval_cmd->add_option("--t", tval, "height t > 0")->envname("PTW_T");
  eval_cmd->add_option("--x", xs, "first point, end:coord or junction");
  eval_cmd->add_option("--y", ys, "second point");
  eval_cmd->add_option("--out", cfg.out_path, "output file (stdout when omitted)");

  auto* decompose_cmd = app.add_subcommand("decompose", "Whitney decomposition of an open set");
  std::string omega_path;
  cfg.add_params_flags(decompose_cmd);
  decompose_cmd->add_option("--omega", omega_path, "JSON file with per-end intervals")
      ->required();
  decompose_cmd->add_option("--out", cfg.out_path, "output file");

  auto* maximal_cmd = app.add_subcommand("maximal", "dyadic maximal function at the mu atoms");
  std::string psi_path;
  cfg.add_params_flags(maximal_cmd);
  maximal_cmd->add_option("--measures", cfg.measures_path, "measure file")->required();
  maximal_cmd->add_option("--psi", psi_path, "psi values per mu atom")->required();
  maximal_cmd->add_option("--out", cfg.out_path, "output file");

  auto* norm_cmd = app.add_subcommand("norm", "two-weight operator norm");
  cfg.add_params_flags(norm_cmd);
  norm_cmd->add_option("--measures", cfg.measures_path, "measure file")->required();
  norm_cmd->add_option("--tol", cfg.tol, "power-iteration residual tolerance")
      ->envname("PTW_TOL");
  norm_cmd->add_option("--out", cfg.out_path, "output file");

  auto* verify_cmd = app.add_subcommand("verify", "norm, testing constants and their ratios");
  cfg.add_params_flags(verify_cmd);
  verify_cmd->add_option("--measures", cfg.measures_path, "measure file")->required();
  verify_cmd->add_option("--tol", cfg.tol, "power-iteration residual tolerance")
      ->envname("PTW_TOL");
  verify_cmd->add_option("--hat-convention", cfg.hat, "hat-of-triple|triple-of-hat")
      ->envname("PTW_HAT_CONVENTION");
  verify_cmd->add_option("--out", cfg.out_path, "report file");

  auto* sweep_cmd = app.add_subcommand("sweep", "randomized instance sweep to CSV");
  cfg.add_params_flags(sweep_cmd);
  sweep_cmd->add_option("--seed", cfg.seed, "base seed")->envname("PTW_SEED");
  sweep_cmd->add_option("--instances", cfg.instances, "number of instances")
      ->envname("PTW_INSTANCES");
  sweep_cmd->add_option("--atoms", cfg.atoms, "atoms per measure")->envname("PTW_ATOMS");
  sweep_cmd->add_option("--tol", cfg.tol, "power-iteration residual tolerance")
      ->envname("PTW_TOL");
  sweep_cmd->add_option("--hat-convention", cfg.hat, "hat-of-triple|triple-of-hat")
      ->envname("PTW_HAT_CONVENTION");
  sweep_cmd->add_option("--out", cfg.out_path, "CSV file (stdout when omitted)");

  auto* proof_cmd = app.add_subcommand("proofscope", "level sets, stopping data and maximal principles");
  std::string piece_name = "1,1", phi_path;
  cfg.add_params_flags(proof_cmd);
  proof_cmd->add_option("--measures", cfg.measures_path, "measure file")->required();
  proof_cmd->add_option("--piece", piece_name, "kernel piece: 1,1 1,2 2,2 2,3 4,2 4,3");
  proof_cmd->add_option("--delta", cfg.delta, "stopping mass fraction in (0,1]")
      ->envname("PTW_DELTA");
  proof_cmd->add_option("--phi", phi_path, "phi values per mu atom (default all ones)");
  proof_cmd->add_option("--seed", cfg.seed, "sampling seed")->envname("PTW_SEED");
  proof_cmd->add_option("--out", cfg.out_path, "report file");

  auto* demo_cmd = app.add_subcommand("demo-nondoubling", "volume growth across the ends");
  cfg.add_params_flags(demo_cmd);
  demo_cmd->add_option("--out", cfg.out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // help or version text, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (eval_cmd->parsed()) return run_kernel_eval(cfg, xs, ys, tval);
    if (decompose_cmd->parsed()) return run_decompose(cfg, omega_path);
    if (maximal_cmd->parsed()) return run_maximal(cfg, psi_path);
    if (norm_cmd->parsed()) return run_norm(cfg);
    if (verify_cmd->parsed()) return run_verify(cfg);
    if (sweep_cmd->parsed()) return run_sweep(cfg);
    if (proof_cmd->parsed()) return run_proofscope(cfg, piece_name, phi_path);
    if (demo_cmd->parsed()) return run_demo(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
