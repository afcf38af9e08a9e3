#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "roughflow/rough_path.hpp"
#include "roughflow/sewing.hpp"

using namespace roughflow;

namespace {

// Smooth W-valued grid function for synthetic germs.
Vec f_smooth(const Grid& g, int node, int dim) {
  double t = g.time(node);
  Vec r(dim);
  for (int k = 0; k < dim; ++k) r[k] = std::sin((k + 1) * t) + 0.3 * std::cos(t + k);
  return r;
}

}  // namespace

TEST_CASE("sew reproduces exactly hat-additive germs at every level") {
  Grid g = Grid::dyadic(0.0, 1.0, 8);
  SpectralSemigroup sg({1.0, 5.0});
  Germ germ;
  germ.alpha_decl = 1.0;
  germ.rho_decl = 2.0;
  germ.eval = [&](int u, int v) {
    Vec fv = f_smooth(g, v, 2);
    Vec fu = sg.apply(g.dt() * (v - u), f_smooth(g, u, 2));
    return sub(fv, fu);
  };
  for (int level = 1; level <= 6; ++level) {
    SewnIncrements sw = sew(germ, sg, g, 0, 256, level);
    Vec expect = sub(f_smooth(g, 256, 2), sg.apply(1.0, f_smooth(g, 0, 2)));
    CHECK(nrm2(sub(sw.value(), expect)) < 1e-13);
  }
  SewnIncrements ad = sew_adaptive(germ, sg, g, 0, 256, 1e-12);
  CHECK(ad.level_used == 1);
  // tol = infinity also stops at level 1
  SewnIncrements inf_tol = sew_adaptive(germ, sg, g, 0, 256, 1e300);
  CHECK(inf_tol.level_used == 1);
}

TEST_CASE("sew of an additive increment germ is the Riemann-Stieltjes integral") {
  Grid g = Grid::dyadic(0.0, 1.0, 7);
  VPath w = assemble_qfbm(QCovariance({1.0, 0.5}), 0.45, g, 12);
  SpectralSemigroup id = SpectralSemigroup::identity(2);
  Matrix K(2, 2);
  K(0, 0) = 1.0;
  K(0, 1) = -0.5;
  K(1, 0) = 2.0;
  K(1, 1) = 0.25;
  Germ germ;
  germ.rho_decl = 2.0;
  germ.eval = [&](int u, int v) { return K.apply(w.increment(u, v)); };
  SewnIncrements sw = sew(germ, id, g, 0, 128, 5);
  Vec expect = K.apply(w.increment(0, 128));
  CHECK(nrm2(sub(sw.value(), expect)) < 1e-13);
  CHECK(sw.defect_estimate < 1e-13);
  // twisted increment between equal partition nodes vanishes exactly
  CHECK(nrm2(sw.increment(3, 3, id)) == 0.0);
}

TEST_CASE("sew preconditions") {
  Grid g = Grid::dyadic(0.0, 1.0, 4);
  SpectralSemigroup sg({1.0});
  Germ germ;
  germ.rho_decl = 0.9;  // no convergence guarantee
  germ.eval = [&](int, int) { return Vec{0.0}; };
  CHECK_THROWS(sew(germ, sg, g, 0, 16, 2));
  germ.rho_decl = 1.5;
  CHECK_THROWS(sew(germ, sg, g, 0, 12, 3));  // 12 cells admit no level-3 dyadic split
  CHECK_THROWS(sew(germ, sg, g, 8, 8, 1));
  CHECK_NOTHROW(sew(germ, sg, g, 4, 12, 3));
}

TEST_CASE("classical check: compensated sums hit the smooth rough integral") {
  // S = Id, dy = G(y) dw with a smooth driver; germ G(y_u) dw + DG(y_u) y' w2.
  const int level = 10;
  Grid g = Grid::dyadic(0.0, 1.0, level);
  SpectralSemigroup id = SpectralSemigroup::identity(3);
  CoefficientG G = CoefficientG::nemytskii_default(id, 0.3, 2, 0.8);

  VPath w(g, 2);
  for (int i = 0; i <= g.cells; ++i) {
    double t = g.time(i);
    w.at(i, 0) = std::sin(t);
    w.at(i, 1) = 1.0 - std::cos(t);
  }
  GridRoughPath rp = lift_piecewise_linear(w, 0.45);

  auto dw_dt = [](double t) { return Vec{std::cos(t), std::sin(t)}; };
  const int subs = 8;
  auto y_dense = oracles::rk4_galerkin(id, G, CoefficientF::zero(3), dw_dt, {0.4, -0.2, 0.1}, g,
                                       subs);

  Germ germ;
  germ.alpha_decl = 0.45;
  germ.rho_decl = 1.5;
  germ.eval = [&](int u, int v) {
    const Vec& yu = y_dense[u];
    Vec r = G.eval(yu).apply(w.increment(u, v));
    Tensor3 dg = G.derivative(yu);
    Matrix gy = G.eval(yu);  // Gubinelli derivative of the classical solution
    Matrix w2 = chen_reconstruct(rp, u, v);
    axpy(1.0, tensor_contract(dg, matmul(gy, w2)), r);
    return r;
  };
  SewnIncrements sw = sew(germ, id, g, 0, g.cells, level);

  // oracle: fine quadrature of int G(y_r) dw_r with the dense classical path
  auto K_of_r = [&](double r) {
    double x = r / g.dt();
    int c = std::min(g.cells - 1, static_cast<int>(x));
    double f = x - c;
    Vec y = y_dense[c];
    scale_inplace(y, 1.0 - f);
    axpy(f, y_dense[c + 1], y);
    return G.eval(y);
  };
  Vec oracle = oracles::convolved_stieltjes(w, id, K_of_r, 0, g.cells, 16);
  CHECK(nrm2(sub(sw.value(), oracle)) / nrm2(oracle) < 1e-6);
}

TEST_CASE("successive-level decay ratio tracks the declared defect exponent") {
  Grid g = Grid::dyadic(0.0, 1.0, 10);
  SpectralSemigroup sg({1.0, 5.0});
  double rho = 1.4;
  Germ germ;
  germ.alpha_decl = 1.0;
  germ.rho_decl = rho;
  germ.eval = [&](int u, int v) {
    Vec fv = f_smooth(g, v, 2);
    Vec fu = sg.apply(g.dt() * (v - u), f_smooth(g, u, 2));
    Vec r = sub(fv, fu);
    double width = g.dt() * (v - u);
    double tu = g.time(u);
    r[0] += std::pow(width, rho) * (1.0 + 0.5 * std::sin(3.0 * tu));
    r[1] += std::pow(width, rho) * (0.7 + 0.2 * std::cos(2.0 * tu));
    return r;
  };
  SewnIncrements sw = sew(germ, sg, g, 0, 1024, 10);
  std::vector<double> lvls, diffs;
  for (int n = 4; n <= 10; ++n) {
    lvls.push_back(n);
    diffs.push_back(sw.level_diffs[n - 1]);
  }
  double slope = fit_log2_slope(lvls, diffs);
  double ratio = std::pow(2.0, slope);
  double target = std::pow(2.0, -(rho - 1.0));
  CHECK(ratio > target / 2.0);
  CHECK(ratio < target * 2.0);

  // the gap to the germ itself is controlled by the level differences
  double diff_sum = 0.0;
  for (double d : sw.level_diffs) diff_sum += d;
  CHECK(sw.germ_gap <= diff_sum + 1e-12);
  CHECK(sw.germ_gap > 0.0);

  GermValidation gv = validate_germ(germ, sg, g, 0, 1024);
  CHECK(gv.rho_slope == doctest::Approx(rho).epsilon(0.25));
  CHECK(gv.rho_consistent);

  // non-convergence report carries the defect
  Germ stiff = germ;
  try {
    sew_adaptive(stiff, sg, g, 0, 1024, 1e-18, 6);
    CHECK(false);
  } catch (const SewingNonConvergence& e) {
    CHECK(e.last_defect > 0.0);
  }
}

TEST_CASE("sew is linear in the germ and composes hat-additively") {
  Grid g = Grid::dyadic(0.0, 1.0, 8);
  SpectralSemigroup sg({2.0, 7.0});
  auto make = [&](double amp, double freq) {
    Germ germ;
    germ.rho_decl = 1.4;
    germ.eval = [&g, &sg, amp, freq](int u, int v) {
      double width = g.dt() * (v - u);
      Vec r(2);
      r[0] = amp * std::sin(freq * g.time(u)) * std::pow(width, 0.5);
      r[1] = amp * std::cos(freq * g.time(v)) * width;
      return r;
    };
    return germ;
  };
  Germ g1 = make(1.0, 3.0), g2 = make(0.6, 5.0);
  double a = 1.7, b = -0.9;
  Germ combo;
  combo.rho_decl = 1.4;
  combo.eval = [&](int u, int v) {
    Vec r = g1.eval(u, v);
    scale_inplace(r, a);
    axpy(b, g2.eval(u, v), r);
    return r;
  };
  Vec lhs = sew(combo, sg, g, 0, 256, 6).value();
  Vec rhs = sew(g1, sg, g, 0, 256, 6).value();
  scale_inplace(rhs, a);
  axpy(b, sew(g2, sg, g, 0, 256, 6).value(), rhs);
  CHECK(nrm2(sub(lhs, rhs)) < 1e-12);

  // hat-additivity: compose half-interval sews against the full sew
  SewnIncrements full = sew(g1, sg, g, 0, 256, 6);
  SewnIncrements left = sew(g1, sg, g, 0, 128, 5);
  SewnIncrements right = sew(g1, sg, g, 128, 256, 5);
  Vec composed = sg.apply(0.5, left.value());
  axpy(1.0, right.value(), composed);
  double defect = nrm2(sub(full.value(), composed));
  CHECK(defect <= 10.0 * full.defect_estimate + 1e-13);
}

TEST_CASE("shift property: additive germ over a shifted driver") {
  Grid g = Grid::dyadic(0.0, 2.0, 8);
  VPath w = assemble_qfbm(QCovariance({1.0, 0.5}), 0.45, g, 31);
  GridRoughPath rp = lift_piecewise_linear(w, 0.4);
  SpectralSemigroup id = SpectralSemigroup::identity(2);
  Matrix K(2, 2);
  K(0, 0) = 1.0;
  K(1, 1) = -2.0;

  int tau = 64;
  GridRoughPath shifted = shift_rough_path(rp, g.time(tau) - g.t0);
  Germ germ;
  germ.rho_decl = 2.0;
  germ.eval = [&](int u, int v) { return K.apply(rp.path.increment(u, v)); };
  Germ germ_shifted;
  germ_shifted.rho_decl = 2.0;
  germ_shifted.eval = [&](int u, int v) { return K.apply(shifted.path.increment(u, v)); };

  double res = check_shift_property(germ, g, germ_shifted, shifted.grid(), id, tau, 128, 192, 4);
  CHECK(res < 1e-12);
  // tau = 0 is trivially exact
  double res0 = check_shift_property(germ, g, germ, g, id, 0, 128, 192, 4);
  CHECK(res0 == 0.0);
}

TEST_CASE("D_eps tracking: eps = 0 reduces to sew; identity semigroup is benign") {
  Grid g = Grid::dyadic(0.0, 1.0, 8);
  SpectralSemigroup sg({1.0, 5.0});
  Germ germ;
  germ.alpha_decl = 1.0;
  germ.rho_decl = 1.4;
  germ.eval = [&](int u, int v) {
    Vec fv = f_smooth(g, v, 2);
    Vec fu = sg.apply(g.dt() * (v - u), f_smooth(g, u, 2));
    Vec r = sub(fv, fu);
    r[0] += std::pow(g.dt() * (v - u), 1.4);
    return r;
  };
  DepsTracking tr = sew_with_deps_tracking(germ, sg, g, 0, 256, 6, 0.0, 0.5);
  SewnIncrements plain = sew(germ, sg, g, 0, 256, 6);
  CHECK(nrm2(sub(tr.sewn.value(), plain.value())) == 0.0);
  CHECK(std::isfinite(tr.premise_sup));
  CHECK(std::isfinite(tr.integral_sup));
  CHECK(tr.integral_sup > 0.0);

  SpectralSemigroup id = SpectralSemigroup::identity(2);
  Germ add;
  add.rho_decl = 2.0;
  add.eval = [&](int u, int v) {
    return Vec{g.time(v) - g.time(u), 2.0 * (g.time(v) - g.time(u))};
  };
  DepsTracking tr2 = sew_with_deps_tracking(add, id, g, 0, 256, 5, 0.0, 1.0);
  CHECK(std::isfinite(tr2.integral_sup));

  CHECK_THROWS(sew_with_deps_tracking(germ, sg, g, 0, 256, 6, 1.0, 0.5));
}
