#include <doctest.h>

#include <cmath>
#include <memory>

#include "oracles.hpp"
#include "roughflow/rds.hpp"

using namespace roughflow;

namespace {

struct RdsScenario {
  Grid grid;
  VPath w;
  GridRoughPath rp;
  SpectralSemigroup sg;
  CoefficientG g;
  CoefficientF f;
  Vec xi;
  SolverOptions opts;

  explicit RdsScenario(int level, std::uint64_t seed = 42)
      : grid(Grid::dyadic(0.0, 1.0, level)),
        w(assemble_qfbm(QCovariance({1.0, 0.5}), 0.45, grid, seed)),
        rp(lift_piecewise_linear(w, 0.4)),
        sg(SpectralSemigroup::dirichlet_laplacian(4, 1.0)),
        g(CoefficientG::nemytskii_default(sg, 0.32, 2, 0.5)),
        f(CoefficientF::zero(4)),
        xi({1.0, 0.5, 0.25, 0.125}) {
    opts.alpha = 0.4;
    opts.beta = 0.32;
  }
};

}  // namespace

TEST_CASE("cocycle: tau = 0 and the linear case are exact") {
  RdsScenario sc(7);
  double r0 = cocycle_residual(sc.rp, sc.sg, sc.g, sc.f, sc.xi, 0.25, 0.0, sc.opts);
  CHECK(r0 < 1e-9);

  CoefficientG g0 = CoefficientG::zero(4, 2);
  double rl = cocycle_residual(sc.rp, sc.sg, g0, sc.f, sc.xi, 0.25, 0.25, sc.opts);
  CHECK(rl < 1e-12);
}

TEST_CASE("cocycle: nonlinear fBm scenario at t = tau = T/4") {
  RdsScenario sc(8);
  double r = cocycle_residual(sc.rp, sc.sg, sc.g, sc.f, sc.xi, 0.25, 0.25, sc.opts);
  CHECK(r < 1e-6);
  CHECK_THROWS(cocycle_residual(sc.rp, sc.sg, sc.g, sc.f, sc.xi, 0.9, 0.9, sc.opts));
  CHECK_THROWS(cocycle_residual(sc.rp, sc.sg, sc.g, sc.f, sc.xi, 0.2501, 0.25, sc.opts));
}

TEST_CASE("shift compatibility and the theta-flow composition") {
  RdsScenario sc(7);
  double r = shift_compatibility_residual(sc.rp, sc.sg, sc.g, sc.f, sc.xi, 0.5, 0.25, sc.opts);
  CHECK(r < 1e-8);

  // two shifts compose: solving after tau1 then tau2 equals after tau1 + tau2
  GlobalSolveResult full = solve_global(sc.rp, sc.sg, sc.g, sc.f, sc.xi, 1.0, sc.opts);
  int i14 = sc.grid.index_of(0.25), i12 = sc.grid.index_of(0.5);
  GridRoughPath sh1 = shift_rough_path(sc.rp, 0.25);
  GlobalSolveResult leg1 =
      solve_global(sh1, sc.sg, sc.g, sc.f, full.pair.value(i14), 0.25, sc.opts);
  GridRoughPath sh2 = shift_rough_path(sh1, 0.25);
  GlobalSolveResult leg2 = solve_global(sh2, sc.sg, sc.g, sc.f,
                                        leg1.pair.value(leg1.pair.cells()), 0.5, sc.opts);
  GridRoughPath sh12 = shift_rough_path(sc.rp, 0.5);
  GlobalSolveResult direct =
      solve_global(sh12, sc.sg, sc.g, sc.f, full.pair.value(i12), 0.5, sc.opts);
  double d = nrm2(sub(leg2.pair.value(leg2.pair.cells()), direct.pair.value(direct.pair.cells())));
  CHECK(d < 1e-8);
}

TEST_CASE("driver convergence study: smooth driver collapses, fBm decreases") {
  RdsScenario sc(8);
  // a straight-line driver is its own lift at every level; with a constant
  // coefficient the grid fixed point is then resolution-independent
  Grid gf = Grid::dyadic(0.0, 1.0, 8);
  VPath lin(gf, 2);
  for (int i = 0; i <= gf.cells; ++i) {
    double t = gf.time(i);
    lin.at(i, 0) = 0.5 * t;
    lin.at(i, 1) = -0.25 * t;
  }
  Matrix K(4, 2);
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 2; ++j) K(k, j) = 0.4 / (1.0 + k + j);
  CoefficientG gconst = CoefficientG::constant(std::move(K));
  auto rows_lin = driver_convergence_study(lin, 0.4, sc.sg, gconst, sc.f, sc.xi, 1.0,
                                           {5, 6, 7}, sc.opts);
  for (const auto& r : rows_lin) {
    CHECK(r.driver_distance < 1e-12);
    CHECK(r.solution_distance < 1e-9);
    CHECK(r.chen_defect < 1e-12);
  }

  VPath fine = assemble_qfbm(QCovariance({1.0, 0.5}), 0.45, gf, 33);
  auto rows = driver_convergence_study(fine, 0.4, sc.sg, sc.g, sc.f, sc.xi, 1.0,
                                       {5, 6, 7}, sc.opts);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].driver_distance < 1.1 * rows[i - 1].driver_distance);
    CHECK(rows[i].solution_distance < 1.1 * rows[i - 1].solution_distance);
  }
  CHECK(rows.back().driver_distance < rows.front().driver_distance);
  CHECK(rows.back().solution_distance < rows.front().solution_distance);
  for (const auto& r : rows) CHECK(r.chen_defect < 1e-10);

  CHECK_THROWS(driver_convergence_study(fine, 0.4, sc.sg, sc.g, sc.f, sc.xi, 1.0, {5, 6},
                                        sc.opts));
}
