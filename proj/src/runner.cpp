#include "roughflow/runner.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "roughflow/io.hpp"
#include "roughflow/rds.hpp"
#include "roughflow/sewing.hpp"

namespace roughflow {

namespace {

struct VerifyRow {
  std::string name;
  double value;
  double threshold;
  bool pass() const { return value <= threshold; }
};

std::string gnuplot_script(const std::string& csv, const std::string& title, int columns) {
  std::ostringstream os;
  os << "set datafile separator ','\n";
  os << "set key autotitle columnhead\n";
  os << "set title '" << title << "'\n";
  os << "plot";
  for (int c = 2; c <= columns; ++c) os << (c > 2 ? "," : "") << " '" << csv << "' using 1:" << c
                                        << " with lines";
  os << "\n";
  return os.str();
}

int run_solve(const Scenario& sc, const std::string& out) {
  SpectralSemigroup sg = sc.build_semigroup();
  GridRoughPath rp = sc.build_driver();
  CoefficientG g = sc.build_g(sg);
  CoefficientF f = sc.build_f();
  Vec xi = sc.build_xi(sg);
  GlobalSolveResult sol =
      solve_global(rp, sg, g, f, xi, sc.t_final, sc.build_solver_options());
  write_text_file(out + "/trajectory.csv", trajectory_csv(sol.pair, rp.grid()));
  write_text_file(out + "/report.json", report_json(sol.report));
  write_rough_path_file(rp, out + "/driver.rpath");
  write_text_file(out + "/plot_trajectory.gp",
                  gnuplot_script("trajectory.csv", "solution trajectory", sg.dim_w() + 1));
  if (g.is_zero())
    std::cout << "solve: R^Y norm " << sol.report.remainders.ry_norm_2beta
              << " (vanishes for the linear equation)\n";
  std::cout << "solve: wrote trajectory.csv, report.json, driver.rpath ("
            << sol.report.segments.size() << " segments, fixed-point residual "
            << sol.report.fixed_point_residual << ")\n";
  return 0;
}

int run_verify(const Scenario& sc, const std::string& out) {
  SpectralSemigroup sg = sc.build_semigroup();
  GridRoughPath rp = sc.build_driver();
  CoefficientG g = sc.build_g(sg);
  CoefficientF f = sc.build_f();
  Vec xi = sc.build_xi(sg);
  SolverOptions opts = sc.build_solver_options();
  ConvolutionContext ctx(rp, sg);

  std::vector<VerifyRow> rows;
  const Grid& grid = rp.grid();

  {
    double chen = 0.0, sym = 0.0;
    int stride = std::max(1, grid.cells / 32);
    for (int s = 0; s < grid.cells; s += stride)
      for (int u = s + stride; u < grid.cells; u += stride)
        for (int t = u + stride; t <= grid.cells; t += stride)
          chen = std::max(chen, chen_defect(rp, s, u, t));
    for (int s = 0; s < grid.cells; s += stride)
      for (int t = s + stride; t <= grid.cells; t += stride) {
        Matrix m = chen_reconstruct(rp, s, t);
        Vec d = rp.path.increment(s, t);
        for (int i = 0; i < rp.dim_v(); ++i)
          for (int j = 0; j < rp.dim_v(); ++j)
            sym = std::max(sym, std::abs(0.5 * (m(i, j) + m(j, i)) - 0.5 * d[i] * d[j]));
      }
    rows.push_back({"chen_defect", chen, 1e-10});
    rows.push_back({"geometricity", sym, 1e-10});
  }
  {
    Tensor3 E = random_unit_tensor(sg.dim_w(), rp.dim_v(), split_seed(sc.seed, 0x77));
    Matrix K = g.is_zero() ? Matrix(sg.dim_w(), rp.dim_v()) : g.eval(xi);
    if (g.is_zero())
      for (int k = 0; k < sg.dim_w(); ++k)
        for (int j = 0; j < rp.dim_v(); ++j) K(k, j) = 1.0 / (1.0 + k + j);
    double d_ws = 0.0, d_a = 0.0, d_c = 0.0, d_b = 0.0;
    int q = grid.cells / 4;
    for (int s = 0; s + 2 * q <= grid.cells; s += q) {
      ConvolutionDefects d = ctx.algebraic_defects(E, K, xi, s, s + q, s + 2 * q);
      d_ws = std::max(d_ws, d.omega_s);
      d_a = std::max(d_a, d.a);
      d_c = std::max(d_c, d.c);
      d_b = std::max(d_b, d.b);
    }
    rows.push_back({"algebraic_omega_s", d_ws, 1e-12});
    rows.push_back({"algebraic_a", d_a, 1e-8});
    rows.push_back({"algebraic_c", d_c, 1e-8});
    rows.push_back({"algebraic_b", d_b, 1e-8});
  }

  GlobalSolveResult sol = solve_global(rp, sg, g, f, xi, sc.t_final, opts);
  rows.push_back({"fixed_point_residual", sol.report.fixed_point_residual, 2.0 * opts.tol * 100});
  rows.push_back({"x_constraint_residual", sol.report.x_constraint_residual, 1e-8});
  {
    // hat-additivity of the sewn solution germ: composing half-interval sews
    // must agree with the full sew to within 10x the level defect
    Germ gy = germ_y(ctx, g, sol.pair, opts.alpha, opts.beta);
    int top = grid.level() >= 0 ? std::min(6, grid.level()) : 4;
    if (!g.is_zero() && top >= 4) {
      SewnIncrements full = sew(gy, sg, grid, 0, grid.cells, top);
      SewnIncrements left = sew(gy, sg, grid, 0, grid.cells / 2, top - 1);
      SewnIncrements right = sew(gy, sg, grid, grid.cells / 2, grid.cells, top - 1);
      Vec composed = sg.apply(0.5 * (grid.t1 - grid.t0), left.value());
      axpy(1.0, right.value(), composed);
      double defect = nrm2(sub(full.value(), composed));
      rows.push_back(
          {"sewing_hat_additivity", defect / (10.0 * full.defect_estimate + 1e-12), 1.0});
      std::ostringstream lcsv;
      lcsv << "level,successive_difference\n";
      for (std::size_t n = 0; n < full.level_diffs.size(); ++n)
        lcsv << (n + 1) << ',' << std::setprecision(17) << full.level_diffs[n] << '\n';
      write_text_file(out + "/sewing_levels.csv", lcsv.str());
    }
  }
  {
    // shift property of the driver increments
    int tau = grid.cells / 4;
    GridRoughPath shifted = shift_rough_path(rp, grid.dt() * tau);
    ConvolutionContext csh(shifted, sg);
    Matrix K(sg.dim_w(), rp.dim_v());
    for (int k = 0; k < sg.dim_w(); ++k)
      for (int j = 0; j < rp.dim_v(); ++j) K(k, j) = 1.0 / (1.0 + k + j);
    double r = nrm2(sub(csh.omega_s(K, 0, tau), ctx.omega_s(K, tau, 2 * tau)));
    rows.push_back({"shift_covariance", r, 1e-10});
  }

  std::ostringstream csv;
  csv << "check,value,threshold,pass\n";
  bool all = true;
  for (const auto& r : rows) {
    bool ok = r.pass();
    all = all && ok;
    csv << r.name << ',' << std::setprecision(17) << r.value << ',' << r.threshold << ','
        << (ok ? 1 : 0) << '\n';
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << r.name << " = " << r.value
              << " (threshold " << r.threshold << ")\n";
  }
  write_text_file(out + "/verify.csv", csv.str());
  return all ? 0 : 1;
}

int run_converge(const Scenario& sc, const std::string& out) {
  SpectralSemigroup sg = sc.build_semigroup();
  CoefficientG g = sc.build_g(sg);
  CoefficientF f = sc.build_f();
  Vec xi = sc.build_xi(sg);
  int max_level = sc.converge_levels.back();
  for (int lv : sc.converge_levels) max_level = std::max(max_level, lv);
  Grid fine = Grid::dyadic(0.0, sc.t_final, max_level);
  VPath path = assemble_qfbm(sc.build_q(), sc.hurst, fine, sc.seed);
  auto rows = driver_convergence_study(path, sc.resolved_alpha(), sg, g, f, xi, sc.t_final,
                                       sc.converge_levels, sc.build_solver_options());
  std::ostringstream csv;
  csv << "level,driver_distance,solution_distance,chen_defect\n";
  for (const auto& r : rows)
    csv << r.level << ',' << std::setprecision(17) << r.driver_distance << ','
        << r.solution_distance << ',' << r.chen_defect << '\n';
  write_text_file(out + "/convergence.csv", csv.str());
  write_text_file(out + "/plot_convergence.gp",
                  gnuplot_script("convergence.csv", "driver and solution convergence", 3));
  std::cout << "converge: wrote convergence.csv (" << rows.size() << " levels)\n";
  return 0;
}

int run_cocycle(const Scenario& sc, const std::string& out) {
  SpectralSemigroup sg = sc.build_semigroup();
  CoefficientG g = sc.build_g(sg);
  CoefficientF f = sc.build_f();
  Vec xi = sc.build_xi(sg);
  SolverOptions opts = sc.build_solver_options();
  std::ostringstream csv;
  csv << "seed,t,tau,residual\n";
  nlohmann::ordered_json probes = nlohmann::ordered_json::array();
  double worst = 0.0;
  std::vector<double> fractions;
  for (double fr : sc.cocycle_fractions) fractions.push_back(fr * sc.t_final);
  // probes are independent; fan out over seeds and merge in seed order
  std::vector<std::vector<CocycleProbe>> per_seed(sc.seeds);
  std::vector<std::exception_ptr> errors(sc.seeds);
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  int stride = static_cast<int>(std::min<unsigned>(hw, sc.seeds));
  auto work = [&](int first) {
    for (int s = first; s < sc.seeds; s += stride) {
      try {
        std::uint64_t seed = sc.seed + s;
        GridRoughPath rp = sc.build_driver(-1, static_cast<std::int64_t>(seed));
        per_seed[s] = cocycle_lattice(rp, sg, g, f, xi, fractions, fractions, seed, opts);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < stride; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& th : pool) th.join();
  for (int s = 0; s < sc.seeds; ++s) {
    if (errors[s]) std::rethrow_exception(errors[s]);
    for (const CocycleProbe& p : per_seed[s]) {
      worst = std::max(worst, p.residual);
      csv << p.seed << ',' << p.t << ',' << p.tau << ',' << std::setprecision(17) << p.residual
          << '\n';
      probes.push_back(
          {{"seed", p.seed}, {"t", p.t}, {"tau", p.tau}, {"residual", p.residual}});
    }
  }
  write_text_file(out + "/cocycle.csv", csv.str());
  nlohmann::ordered_json jrep;
  jrep["worst_residual"] = worst;
  jrep["probes"] = probes;
  write_text_file(out + "/cocycle_report.json", jrep.dump(2) + "\n");
  std::cout << "cocycle: worst residual " << worst << "\n";
  return worst <= 1e-6 ? 0 : 1;
}

}  // namespace

int run_command(const Scenario& sc, const std::string& command, const std::string& out_dir) {
  sc.validate();
  std::filesystem::create_directories(out_dir);
  if (command == "solve") return run_solve(sc, out_dir);
  if (command == "verify") return run_verify(sc, out_dir);
  if (command == "converge") return run_converge(sc, out_dir);
  if (command == "cocycle") return run_cocycle(sc, out_dir);
  throw std::invalid_argument("unknown command '" + command +
                              "' (expected solve | verify | converge | cocycle)");
}

}  // namespace roughflow
