#include <doctest.h>

#include <cmath>
#include <memory>

#include "oracles.hpp"
#include "roughflow/rds.hpp"
#include "roughflow/solver.hpp"

using namespace roughflow;

namespace {

struct StandardScenario {
  Grid grid;
  VPath w;
  GridRoughPath rp;
  std::shared_ptr<SpectralSemigroup> sg;
  std::shared_ptr<ConvolutionContext> ctx;
  CoefficientG g;
  CoefficientF f;
  Vec xi;
  SolverOptions opts;

  explicit StandardScenario(int level, std::uint64_t seed = 42, double t1 = 1.0,
                            double g_scale = 0.5)
      : grid(Grid::dyadic(0.0, t1, level)),
        w(assemble_qfbm(QCovariance({1.0, 0.5}), 0.45, grid, seed)),
        rp(lift_piecewise_linear(w, 0.4)),
        sg(std::make_shared<SpectralSemigroup>(SpectralSemigroup::dirichlet_laplacian(4, 1.0))),
        g(CoefficientG::nemytskii_default(*sg, 0.32, 2, g_scale)),
        f(CoefficientF::zero(4)),
        xi({1.0, 0.5, 0.25, 0.125}) {
    ctx = std::make_shared<ConvolutionContext>(
        std::shared_ptr<const GridRoughPath>(std::shared_ptr<void>(), &rp), sg);
    opts.alpha = 0.4;
    opts.beta = 0.32;
    opts.tol = 1e-11;
  }
};

VPath smooth_driver(const Grid& g) {
  VPath w(g, 2);
  for (int i = 0; i <= g.cells; ++i) {
    double t = g.time(i);
    w.at(i, 0) = std::sin(t);
    w.at(i, 1) = 1.0 - std::cos(t);
  }
  return w;
}

}  // namespace

TEST_CASE("picard: G = 0 converges immediately to the semigroup orbit") {
  StandardScenario sc(6);
  CoefficientG g0 = CoefficientG::zero(4, 2);
  PicardResult res = picard_fixed_point(sc.ctx, g0, sc.f, sc.xi, sc.grid.cells, sc.opts);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  double worst = 0.0;
  for (int i = 0; i <= sc.grid.cells; ++i) {
    Vec expect = sc.sg->apply(sc.grid.time(i), sc.xi);
    worst = std::max(worst, nrm2(sub(res.pair.value(i), expect)));
  }
  CHECK(worst < 1e-13);

  RemainderReport rem = remainders(res.pair, *sc.ctx, g0, sc.opts);
  CHECK(rem.ry_norm_2beta < 1e-12);  // R^Y vanishes identically
  double orbit_sup = 0.0;
  for (int i = 0; i <= sc.grid.cells; ++i)
    orbit_sup = std::max(orbit_sup,
                         sc.sg->d_gamma_norm(2.0 * sc.opts.beta, res.pair.value(i)));
  // Phi_T is the orbit norm plus the (small) second-order remainder carried by
  // the induced z; the y-part matches the orbit norm exactly.
  CHECK(rem.y_inf_d2beta == doctest::Approx(orbit_sup).epsilon(1e-12));
  CHECK(rem.phi_t >= orbit_sup);
  CHECK(std::isfinite(rem.rz_norm_alpha2beta));
  CHECK(rem.phi_t == doctest::Approx(orbit_sup + rem.rz_norm_alpha2beta).epsilon(1e-12));
}

TEST_CASE("picard: scalar constant-G case hits the closed form") {
  // dim_W = dim_V = 1, lambda = 1, G = g0 constant: y_t = e^{-t} xi + g0 w^S_{t0}(1)
  Grid grid = Grid::dyadic(0.0, 1.0, 8);
  VPath w = assemble_qfbm(QCovariance({1.0}), 0.45, grid, 5);
  GridRoughPath rp = lift_piecewise_linear(w, 0.4);
  auto sg = std::make_shared<SpectralSemigroup>(std::vector<double>{1.0});
  auto ctx = std::make_shared<ConvolutionContext>(
      std::shared_ptr<const GridRoughPath>(std::shared_ptr<void>(), &rp), sg);
  Matrix K(1, 1);
  K(0, 0) = 0.8;
  CoefficientG g = CoefficientG::constant(K);
  SolverOptions opts;
  opts.alpha = 0.4;
  opts.beta = 0.32;
  Vec xi = {1.5};

  PicardResult res =
      picard_fixed_point(ctx, g, CoefficientF::zero(1), xi, grid.cells, opts);
  CHECK(res.converged);
  double worst = 0.0;
  for (int i = 0; i <= grid.cells; ++i) {
    Matrix id1(1, 1);
    id1(0, 0) = 1.0;
    double expect = std::exp(-grid.time(i)) * xi[0] + 0.8 * ctx->omega_s(id1, 0, i)[0];
    worst = std::max(worst, std::abs(res.pair.value(i)[0] - expect));
  }
  CHECK(worst < 1e-10);

  // re-application barely moves the fixed point
  ControlledPair again =
      apply_solution_map(ctx, g, CoefficientF::zero(1), xi, res.pair, grid.cells);
  double drift = 0.0;
  for (int i = 0; i <= grid.cells; ++i)
    drift = std::max(drift, nrm2(sub(again.value(i), res.pair.value(i))));
  CHECK(drift <= 2.0 * opts.tol);
}

TEST_CASE("apply_solution_map keeps the defining z-constraint exactly") {
  StandardScenario sc(6);
  PicardResult res = picard_fixed_point(sc.ctx, sc.g, sc.f, sc.xi, sc.grid.cells, sc.opts);
  CHECK(res.converged);
  double r = x_constraint_residual(res.pair, *sc.ctx, 32, 99);
  CHECK(r < 1e-8);
  CHECK(r < 1e-11);  // exact by construction, up to roundoff
}

TEST_CASE("solution germ exponents validate against the declared rho") {
  StandardScenario sc(8);
  PicardResult res = picard_fixed_point(sc.ctx, sc.g, sc.f, sc.xi, sc.grid.cells, sc.opts);
  Germ gy = germ_y(*sc.ctx, sc.g, res.pair, sc.opts.alpha, sc.opts.beta);
  CHECK(gy.rho_decl == doctest::Approx(sc.opts.alpha + 2.0 * sc.opts.beta));
  GermValidation gv = validate_germ(gy, *sc.sg, sc.grid, 0, sc.grid.cells, 6);
  CHECK(gv.rho_slope >= sc.opts.alpha + 2.0 * sc.opts.beta - 0.15);

  // zero coefficient gives the zero germ
  CoefficientG g0 = CoefficientG::zero(4, 2);
  PicardResult res0 = picard_fixed_point(sc.ctx, g0, sc.f, sc.xi, sc.grid.cells, sc.opts);
  Germ gy0 = germ_y(*sc.ctx, g0, res0.pair, sc.opts.alpha, sc.opts.beta);
  CHECK(nrm2(gy0.eval(3, 17)) == 0.0);
}

TEST_CASE("z-germ: linearity in E and the twisted-defect identity") {
  StandardScenario sc(7);
  PicardResult res = picard_fixed_point(sc.ctx, sc.g, sc.f, sc.xi, sc.grid.cells, sc.opts);
  const auto& y = res.pair.path();
  OperatorGerm gz = germ_z(*sc.ctx, sc.g, y, y, sc.opts.alpha, sc.opts.beta);

  Tensor3 zeroE(4, 4, 2);
  CHECK(nrm2(gz.eval(8, 40, zeroE)) < 1e-15);

  Tensor3 E = random_unit_tensor(4, 2, 17);
  int u = 16, m = 48, v = 96;
  double hp = sc.grid.dt();
  Vec lhs = gz.eval(u, v, E);
  axpy(-1.0, gz.eval(m, v, E), lhs);
  Vec lower = sc.sg->apply(hp * (v - m), gz.eval(u, m, E));
  axpy(-1.0, lower, lhs);
  // a(E, w^S_{mu}(G(y_u)) - (hat-delta y)_{mu}) + b(E, G(y_u) - G(y_m))
  Vec arg = sc.ctx->omega_s(sc.g.eval(y[u]), u, m);
  Vec hdy = sub(y[m], sc.sg->apply(hp * (m - u), y[u]));
  axpy(-1.0, hdy, arg);
  Vec rhs = sc.ctx->a_process(E, arg, m, v);
  Matrix dk = sc.g.eval(y[u]);
  dk -= sc.g.eval(y[m]);
  axpy(1.0, sc.ctx->b_process(E, dk, m, v), rhs);
  CHECK(nrm2(sub(lhs, rhs)) < 1e-8);
  CHECK(nrm2(sub(lhs, rhs)) < 1e-12);
}

TEST_CASE("nonlinear solve against the classical RK4 oracle on a smooth driver") {
  Grid grid = Grid::dyadic(0.0, 2.0, 9);
  VPath w = smooth_driver(grid);
  GridRoughPath rp = lift_piecewise_linear(w, 0.4);
  auto sg = std::make_shared<SpectralSemigroup>(SpectralSemigroup::dirichlet_laplacian(4, 0.4));
  CoefficientG g = CoefficientG::nemytskii_default(*sg, 0.32, 2, 0.8);
  CoefficientF f0 = CoefficientF::zero(4);
  Vec xi = {0.8, 0.4, -0.3, 0.2};
  SolverOptions opts;
  opts.alpha = 0.4;
  opts.beta = 0.32;

  auto dw_dt = [](double t) { return Vec{std::cos(t), std::sin(t)}; };
  auto y_ref = oracles::rk4_galerkin(*sg, g, f0, dw_dt, xi, grid, 8);

  GlobalSolveResult sol = solve_global(rp, *sg, g, f0, xi, 2.0, opts);
  double sup = 0.0;
  for (int i = 0; i <= grid.cells; ++i)
    sup = std::max(sup, nrm2(sub(sol.pair.value(i), y_ref[i])));
  CHECK(sup < 2e-3);

  // the drift term: F = tanh against the same oracle
  CoefficientF fd = CoefficientF::tanh_drift(4, 0.7);
  auto y_ref_f = oracles::rk4_galerkin(*sg, g, fd, dw_dt, xi, grid, 8);
  GlobalSolveResult sol_f = solve_global(rp, *sg, g, fd, xi, 2.0, opts);
  double sup_f = 0.0;
  for (int i = 0; i <= grid.cells; ++i)
    sup_f = std::max(sup_f, nrm2(sub(sol_f.pair.value(i), y_ref_f[i])));
  CHECK(sup_f < 5e-3);
}

TEST_CASE("local horizon heuristic") {
  StandardScenario sc(7);
  SolverOptions opts = sc.opts;
  opts.t_max_segment = 0.75;
  CoefficientG g0 = CoefficientG::zero(4, 2);
  AnalyticEstimates est;
  est.omega_s_sup = 1.0;
  est.b_sup = 1.0;
  CHECK(local_horizon(1.0, est, sc.rp, g0, opts) == opts.t_max_segment);

  double t1 = local_horizon(1.0, est, sc.rp, sc.g, opts);
  VPath w2 = sc.w;
  for (auto& v : w2.values) v *= 2.0;
  GridRoughPath rp2 = lift_piecewise_linear(w2, 0.4);
  double t2;
  try {
    t2 = local_horizon(1.0, est, rp2, sc.g, opts);
  } catch (const std::runtime_error&) {
    t2 = 0.0;  // shrank below the grid spacing, which is an error by contract
  }
  CHECK(t2 <= 0.5 * t1 + 1e-12);

  // the heuristic horizon yields quick contraction on the standard scenario
  int cells = std::max(1, static_cast<int>(t1 / sc.grid.dt()));
  cells = std::min(cells, sc.grid.cells);
  PicardResult res = picard_fixed_point(sc.ctx, sc.g, sc.f, sc.xi, cells, sc.opts);
  CHECK(res.converged);
  CHECK(res.iterations <= 20);
}

TEST_CASE("concatenation: direct solve equals segmented solves") {
  StandardScenario sc(8);
  GlobalSolveResult direct = solve_global(sc.rp, *sc.sg, sc.g, sc.f, sc.xi, 1.0, sc.opts,
                                          {sc.grid.cells});
  GlobalSolveResult two = solve_global(sc.rp, *sc.sg, sc.g, sc.f, sc.xi, 1.0, sc.opts,
                                       {sc.grid.cells / 2, sc.grid.cells});
  GlobalSolveResult four =
      solve_global(sc.rp, *sc.sg, sc.g, sc.f, sc.xi, 1.0, sc.opts,
                   {sc.grid.cells / 4, sc.grid.cells / 2, 3 * sc.grid.cells / 4, sc.grid.cells});
  double d2 = 0.0, d4 = 0.0;
  for (int i = 0; i <= sc.grid.cells; ++i) {
    d2 = std::max(d2, nrm2(sub(two.pair.value(i), direct.pair.value(i))));
    d4 = std::max(d4, nrm2(sub(four.pair.value(i), direct.pair.value(i))));
  }
  CHECK(d2 < 1e-8);
  CHECK(d4 < 1e-8);

  // straddling-block z satisfies the defining constraint
  CHECK(x_constraint_residual(two.pair, *sc.ctx, 16, 5) < 1e-8);
  CHECK(x_constraint_residual(four.pair, *sc.ctx, 16, 5) < 1e-8);
  // and the concatenated pair is still a fixed point
  CHECK(two.report.fixed_point_residual < 1e-9);
  CHECK(four.report.fixed_point_residual < 1e-9);

  // mismatched junction value is rejected
  ControlledPair left = direct.pair;
  PicardResult other = picard_fixed_point(sc.ctx, sc.g, sc.f, Vec{9.0, 9.0, 9.0, 9.0},
                                          sc.grid.cells / 2, sc.opts);
  CHECK_THROWS(ControlledPair::concatenate(std::move(left), std::move(other.pair), sc.ctx));
}

TEST_CASE("global solve: zero coefficient and automatic segmentation") {
  StandardScenario sc(7, 11, 2.0);
  CoefficientG g0 = CoefficientG::zero(4, 2);
  GlobalSolveResult sol = solve_global(sc.rp, *sc.sg, g0, sc.f, sc.xi, 2.0, sc.opts);
  double worst = 0.0;
  for (int i = 0; i <= sc.grid.cells; ++i)
    worst = std::max(worst,
                     nrm2(sub(sol.pair.value(i), sc.sg->apply(sc.grid.time(i), sc.xi))));
  CHECK(worst < 1e-12);

  SolverOptions opts = sc.opts;
  opts.t_max_segment = 0.5;  // force several segments
  GlobalSolveResult seg = solve_global(sc.rp, *sc.sg, sc.g, sc.f, sc.xi, 2.0, opts);
  CHECK(seg.report.segments.size() >= 4);
  CHECK(seg.report.fixed_point_residual < 1e-9);
  CHECK(seg.report.x_constraint_residual < 1e-8);
  for (const auto& s : seg.report.segments) CHECK(std::isfinite(s.phi_t));
}

TEST_CASE("remainder scaling: T-sweep slope and the affine recursion shape") {
  StandardScenario sc(8);
  SolverOptions opts = sc.opts;
  GlobalSolveResult sol =
      solve_global(sc.rp, *sc.sg, sc.g, sc.f, sc.xi, 1.0, opts, {sc.grid.cells});

  // restrictions of the fixed point are fixed points: sweep T = T0 / 2^k
  std::vector<double> ts, rys, phis;
  for (int k = 0; k <= 4; ++k) {
    int cells = sc.grid.cells >> k;
    auto leaf = std::make_shared<ControlledPair::Leaf>();
    leaf->ctx = sc.ctx;
    leaf->g = &sc.g;
    leaf->cells = cells;
    leaf->y.assign(sol.pair.path().begin(), sol.pair.path().begin() + cells + 1);
    leaf->yb = leaf->y;
    ControlledPair restricted = ControlledPair::make_leaf(leaf);
    RemainderReport rem = remainders(restricted, *sc.ctx, sc.g, opts);
    ts.push_back(sc.grid.dt() * cells);
    rys.push_back(rem.ry_norm_2beta);
    phis.push_back(rem.phi_t);
    CHECK(std::isfinite(rem.phi_t));
  }
  double slope = oracles::loglog_slope(ts, rys);
  CHECK(slope >= sc.opts.alpha - sc.opts.beta - 0.3);

  // affine shape Phi_T <= C (|xi|_{2beta} + T^{a-b} + T^a Phi_T): fitted C finite
  double xin = sc.sg->d_gamma_norm(2.0 * opts.beta, sc.xi);
  double cmax = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double denom = xin + std::pow(ts[k], opts.alpha - opts.beta) +
                   std::pow(ts[k], opts.alpha) * phis[k];
    cmax = std::max(cmax, phis[k] / denom);
  }
  CHECK(std::isfinite(cmax));
  CHECK(cmax < 1e6);
}

TEST_CASE("long-horizon solve stays bounded (no blow-up over [0,5])") {
  StandardScenario sc(8, 13, 5.0);
  SolverOptions opts = sc.opts;
  opts.t_max_segment = 1.0;
  GlobalSolveResult sol = solve_global(sc.rp, *sc.sg, sc.g, sc.f, sc.xi, 5.0, opts);
  CHECK(std::isfinite(sol.report.y_sup));
  CHECK(sol.report.y_sup < 100.0);
  for (const auto& s : sol.report.segments) {
    CHECK(std::isfinite(s.phi_t));
    CHECK(s.phi_t < 1e4);
  }
  // exponential envelope |y|_{D_2beta} <= r M e^{M T} with a modest fitted M
  double r = std::max(1.0, sc.sg->d_gamma_norm(2.0 * opts.beta, sc.xi));
  double mfit = 0.0;
  for (const auto& s : sol.report.segments) {
    double t_end = sc.grid.dt() * (s.start_node + s.cells);
    double ratio = s.phi_t / r;
    if (ratio > 1.0) mfit = std::max(mfit, std::log(ratio) / std::max(0.1, t_end));
  }
  CHECK(mfit < 20.0);
}

TEST_CASE("shift property of the solution germ on an fBm lift") {
  StandardScenario sc(8);
  SolverOptions opts = sc.opts;
  GlobalSolveResult sol =
      solve_global(sc.rp, *sc.sg, sc.g, sc.f, sc.xi, 1.0, opts, {sc.grid.cells});

  int tau = sc.grid.cells / 4;
  GridRoughPath shifted = shift_rough_path(sc.rp, sc.grid.dt() * tau);
  auto shifted_ptr = std::make_shared<const GridRoughPath>(shifted);
  auto ctx_sh = std::make_shared<ConvolutionContext>(shifted_ptr, sc.sg);
  // Wiener-shifted solution: fixed point from y(tau) on the shifted driver
  GlobalSolveResult sol2 = solve_global(*shifted_ptr, *sc.sg, sc.g, sc.f,
                                        sol.pair.value(tau), sc.grid.dt() * (sc.grid.cells - tau),
                                        opts, {sc.grid.cells - tau});

  Germ gy = germ_y(*sc.ctx, sc.g, sol.pair, opts.alpha, opts.beta);
  Germ gy_sh = germ_y(*ctx_sh, sc.g, sol2.pair, opts.alpha, opts.beta);
  double res = check_shift_property(gy, sc.grid, gy_sh, shifted_ptr->grid(), *sc.sg, tau,
                                    sc.grid.cells / 2, sc.grid.cells, 4);
  CHECK(res < 1e-10);

  // D_eps tracking of the solution germ with eps = 2 beta stays finite
  DepsTracking tr = sew_with_deps_tracking(gy, *sc.sg, sc.grid, 0, sc.grid.cells, 6,
                                           2.0 * opts.beta, opts.alpha - opts.beta);
  CHECK(std::isfinite(tr.integral_sup));
  CHECK(std::isfinite(tr.premise_sup));
}

TEST_CASE("coefficient family derivatives agree with finite differences") {
  SpectralSemigroup sg = SpectralSemigroup::dirichlet_laplacian(3, 1.0);
  CoefficientG g = CoefficientG::nemytskii_default(sg, 0.32, 2, 0.7, 0.5);
  Vec y = {0.3, -0.6, 0.9};
  GaussianStream gs(8);
  double h = 1e-6;

  for (int trial = 0; trial < 4; ++trial) {
    Vec w(3);
    for (auto& v : w) v = gs.next();
    // DG(y)(w) against (G(y + h w) - G(y - h w)) / 2h
    Vec yp = y, ym = y;
    axpy(h, w, yp);
    axpy(-h, w, ym);
    Matrix fd = g.eval(yp);
    fd -= g.eval(ym);
    fd *= 1.0 / (2.0 * h);
    Tensor3 dg = g.derivative(y);
    Matrix an(3, 2);
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m)
        for (int j = 0; j < 2; ++j) an(k, j) += dg(k, m, j) * w[m];
    an -= fd;
    CHECK(an.frobenius() < 1e-7);

    // D2G(y)(w, w) against the second difference of G
    Matrix fd2 = g.eval(yp);
    fd2 += g.eval(ym);
    Matrix mid = g.eval(y);
    mid *= 2.0;
    fd2 -= mid;
    fd2 *= 1.0 / (h * h);
    Matrix an2 = g.d2(y, w, w);
    an2 -= fd2;
    CHECK(an2.frobenius() < 2e-3);
  }

  // declared bounds hold over sampled states
  for (int trial = 0; trial < 32; ++trial) {
    Vec yr(3);
    for (auto& v : yr) v = 3.0 * gs.next();
    CHECK(operator_norm(g.eval(yr)) <= g.bound_g() + 1e-9);
    CHECK(operator_norm(g.derivative(yr)) <= g.bound_dg() + 1e-9);
    Vec e1 = {1.0, 0.0, 0.0};
    CHECK(operator_norm(g.d2(yr, e1, e1)) <= g.bound_d2g() + 1e-9);
    CHECK(operator_norm(g.d3(yr, e1, e1, e1)) <= g.bound_d3g() + 1e-9);
  }

  // the drift family: Lipschitz ratio below the declared constant
  CoefficientF fd = CoefficientF::tanh_drift(3, 1.3);
  for (int trial = 0; trial < 16; ++trial) {
    Vec a(3), b(3);
    for (auto& v : a) v = 2.0 * gs.next();
    for (auto& v : b) v = 2.0 * gs.next();
    double num = nrm2(sub(fd.eval(a), fd.eval(b)));
    CHECK(num <= fd.lipschitz() * nrm2(sub(a, b)) + 1e-12);
  }
}

TEST_CASE("deferred z of the linear-equation pair matches the exact closed form") {
  // For G = 0 the induced z is a(E, y_s) - omega^S(E y_s) composed exactly,
  // which pins the whole deferred-evaluation machinery against the closed
  // forms of the supporting processes.
  StandardScenario sc(7);
  CoefficientG g0 = CoefficientG::zero(4, 2);
  PicardResult res = picard_fixed_point(sc.ctx, g0, sc.f, sc.xi, sc.grid.cells, sc.opts);
  Tensor3 E = random_unit_tensor(4, 2, 31);
  double worst = 0.0;
  for (int s = 0; s < sc.grid.cells; s += 24)
    for (int t = s + 8; t <= sc.grid.cells; t += 40) {
      Vec z = res.pair.z(s, t, E);
      Vec expect = sc.ctx->a_process(E, res.pair.value(s), s, t);
      axpy(-1.0, sc.ctx->omega_s(tensor_apply_w(E, res.pair.value(s)), s, t), expect);
      worst = std::max(worst, nrm2(sub(z, expect)));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("concatenation with an empty tail returns the first solution") {
  StandardScenario sc(6);
  GlobalSolveResult sol =
      solve_global(sc.rp, *sc.sg, sc.g, sc.f, sc.xi, 1.0, sc.opts, {sc.grid.cells});
  auto leaf = std::make_shared<ControlledPair::Leaf>();
  leaf->ctx = sc.ctx;
  leaf->g = &sc.g;
  leaf->cells = 0;
  leaf->y = {sol.pair.value(sc.grid.cells)};
  leaf->yb = leaf->y;
  ControlledPair tail = ControlledPair::make_leaf(leaf);
  ControlledPair glued = ControlledPair::concatenate(sol.pair, std::move(tail), sc.ctx);
  CHECK(glued.cells() == sc.grid.cells);
  CHECK(glued.is_leaf());
}

TEST_CASE("constant coefficient yields the additive omega^S germ") {
  StandardScenario sc(6);
  Matrix K(4, 2);
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 2; ++j) K(k, j) = 0.3 / (1.0 + k + j);
  CoefficientG gc = CoefficientG::constant(K);
  PicardResult res = picard_fixed_point(sc.ctx, gc, sc.f, sc.xi, sc.grid.cells, sc.opts);
  Germ gy = germ_y(*sc.ctx, gc, res.pair, sc.opts.alpha, sc.opts.beta);
  // DG = 0, so the germ is omega^S(K) alone and sews exactly at every level
  for (int level : {1, 3, 5}) {
    SewnIncrements sw = sew(gy, *sc.sg, sc.grid, 0, sc.grid.cells, level);
    Vec expect = sc.ctx->omega_s(K, 0, sc.grid.cells);
    CHECK(nrm2(sub(sw.value(), expect)) < 1e-12);
  }
}

TEST_CASE("two-parameter seminorm utility") {
  Grid g = Grid::dyadic(0.0, 1.0, 5);
  auto size = [&](int i, int j) { return g.time(j) - g.time(i); };
  CHECK(two_parameter_seminorm(size, g, g.cells, 1.0) == doctest::Approx(1.0));
  // weighted variant excludes s = 0 and carries the s^beta factor
  double w = two_parameter_seminorm(size, g, g.cells, 1.0, 0.5);
  CHECK(w <= 1.0);
  CHECK(w == doctest::Approx(std::sqrt(g.time(g.cells - 1))).epsilon(1e-12));
}
