#include "roughflow/rds.hpp"

#include <cmath>
#include <stdexcept>

namespace roughflow {

double cocycle_residual(const GridRoughPath& rp, const SpectralSemigroup& sg,
                        const CoefficientG& g, const CoefficientF& f, const Vec& xi, double t,
                        double tau, const SolverOptions& opts) {
  const Grid& grid = rp.grid();
  int t_idx = grid.index_of(grid.t0 + t);
  int tau_idx = grid.index_of(grid.t0 + tau);
  if (t_idx + tau_idx > grid.cells)
    throw std::invalid_argument("cocycle_residual: t + tau exceeds the grid");

  // Leg one: phi(t + tau, w, xi).
  GlobalSolveResult full = solve_global(rp, sg, g, f, xi, t + tau, opts);
  const Vec& reference = full.pair.value(t_idx + tau_idx);
  if (tau_idx == 0) {
    GlobalSolveResult direct = solve_global(rp, sg, g, f, xi, std::max(t, grid.dt()), opts);
    return nrm2(sub(reference, direct.pair.value(t_idx)));
  }

  // Leg two: phi(tau, w, xi), then the shifted driver from that state.
  GlobalSolveResult first = solve_global(rp, sg, g, f, xi, tau, opts);
  Vec eta = first.pair.value(tau_idx);
  GridRoughPath shifted = shift_rough_path(rp, tau);
  if (t_idx == 0) return nrm2(sub(reference, eta));
  GlobalSolveResult second = solve_global(shifted, sg, g, f, eta, t, opts);
  return nrm2(sub(reference, second.pair.value(t_idx)));
}

std::vector<CocycleProbe> cocycle_lattice(const GridRoughPath& rp, const SpectralSemigroup& sg,
                                          const CoefficientG& g, const CoefficientF& f,
                                          const Vec& xi, const std::vector<double>& ts,
                                          const std::vector<double>& taus, std::uint64_t seed,
                                          const SolverOptions& opts) {
  std::vector<CocycleProbe> probes;
  double horizon = rp.grid().t1 - rp.grid().t0;
  for (double t : ts)
    for (double tau : taus) {
      if (t + tau > horizon + 1e-12) continue;
      CocycleProbe p;
      p.t = t;
      p.tau = tau;
      p.xi = xi;
      p.seed = seed;
      p.residual = cocycle_residual(rp, sg, g, f, xi, t, tau, opts);
      probes.push_back(std::move(p));
    }
  return probes;
}

double shift_compatibility_residual(const GridRoughPath& rp, const SpectralSemigroup& sg,
                                    const CoefficientG& g, const CoefficientF& f, const Vec& xi,
                                    double t, double tau, const SolverOptions& opts) {
  const Grid& grid = rp.grid();
  int t_idx = grid.index_of(grid.t0 + t);
  int tau_idx = grid.index_of(grid.t0 + tau);
  GlobalSolveResult full = solve_global(rp, sg, g, f, xi, t + tau, opts);
  Vec eta = full.pair.value(tau_idx);
  GridRoughPath shifted = shift_rough_path(rp, tau);
  GlobalSolveResult second = solve_global(shifted, sg, g, f, eta, t, opts);
  double sup = 0.0;
  for (int i = 0; i <= t_idx; ++i)
    sup = std::max(sup, nrm2(sub(second.pair.value(i), full.pair.value(tau_idx + i))));
  return sup;
}

std::vector<ConvergenceRow> driver_convergence_study(const VPath& finest_path, double alpha,
                                                     const SpectralSemigroup& sg,
                                                     const CoefficientG& g,
                                                     const CoefficientF& f, const Vec& xi,
                                                     double t_final,
                                                     const std::vector<int>& levels,
                                                     const SolverOptions& opts) {
  if (levels.size() < 3)
    throw std::invalid_argument("driver_convergence_study: need at least 3 levels");
  int max_level = finest_path.grid.level();
  if (max_level < 0)
    throw std::invalid_argument("driver_convergence_study: finest grid must be dyadic");
  for (int lv : levels)
    if (lv > max_level || lv < 1)
      throw std::invalid_argument("driver_convergence_study: level outside the sampled range");

  GridRoughPath ref = lift_piecewise_linear(finest_path, alpha);
  GlobalSolveResult ref_solve = solve_global(ref, sg, g, f, xi, t_final, opts);

  std::vector<ConvergenceRow> rows;
  for (int lv : levels) {
    ConvergenceRow row;
    row.level = lv;
    int stride = 1 << (max_level - lv);
    GridRoughPath rp = lift_piecewise_linear(restrict_path(finest_path, stride), alpha);
    row.driver_distance = rough_metric(rp, ref, alpha);

    GlobalSolveResult sol = solve_global(rp, sg, g, f, xi, t_final, opts);
    int common = sol.pair.cells();
    double sup = 0.0;
    for (int i = 0; i <= common; ++i)
      sup = std::max(sup, nrm2(sub(sol.pair.value(i), ref_solve.pair.value(i * stride))));
    row.solution_distance = sup;

    int n = rp.grid().cells;
    for (int i = 0; i < n - 1; ++i)
      row.chen_defect =
          std::max(row.chen_defect, chen_defect(rp, i, i + 1, std::min(n, i + 2)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace roughflow
