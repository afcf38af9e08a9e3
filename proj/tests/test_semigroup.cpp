#include <doctest.h>

#include <cmath>

#include "roughflow/linalg.hpp"
#include "roughflow/semigroup.hpp"

using namespace roughflow;

TEST_CASE("semigroup action: identity at zero, scalar exponential, semigroup law") {
  SpectralSemigroup sg({1.0, 10.0, 100.0});
  Vec x = {1.0, -2.0, 0.5};
  CHECK(sg.apply(0.0, x) == x);
  CHECK_THROWS(sg.apply(-0.5, x));

  SpectralSemigroup one({1.0});
  CHECK(one.apply(1.0, {1.0})[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  GaussianStream gs(3);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    double t = std::abs(gs.next()), s = std::abs(gs.next());
    Vec a = sg.apply(t, sg.apply(s, x));
    Vec b = sg.apply(t + s, x);
    worst = std::max(worst, inf_norm(sub(a, b)));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("fractional powers: values, commutation, kernel handling") {
  SpectralSemigroup sg({4.0});
  CHECK(sg.fractional_power(0.5, {1.0})[0] == doctest::Approx(2.0).epsilon(1e-15));
  Vec x = {0.7};
  CHECK(sg.fractional_power(0.0, x) == x);

  SpectralSemigroup mixed({0.0, 2.0});
  Vec y = {1.0, 1.0};
  Vec fp = mixed.fractional_power(0.3, y);
  CHECK(fp[0] == 0.0);
  CHECK_THROWS(mixed.fractional_power(-0.5, y));
  Vec y0 = {0.0, 1.0};
  CHECK_NOTHROW(mixed.fractional_power(-0.5, y0));

  SpectralSemigroup sg3({1.0, 10.0, 100.0});
  Vec z = {1.0, 0.5, -0.25};
  Vec ab = sg3.apply(0.17, sg3.fractional_power(0.6, z));
  Vec ba = sg3.fractional_power(0.6, sg3.apply(0.17, z));
  CHECK(inf_norm(sub(ab, ba)) < 1e-14);

  // contraction: each mode non-increasing in t
  Vec prev = z;
  for (int i = 1; i <= 8; ++i) {
    Vec cur = sg3.apply(0.1 * i, z);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(cur[k]) <= std::abs(prev[k]) + 1e-16);
    prev = cur;
  }
}

TEST_CASE("smoothing bound t^gamma |S(t)x|_{D_gamma} stays bounded") {
  SpectralSemigroup sg({1.0, 10.0, 100.0});
  Vec x = {1.0, 1.0, 1.0};
  double xn = nrm2(x);
  double sup = 0.0;
  for (int i = 0; i <= 60; ++i) {
    double t = 1e-5 * std::pow(10.0, 5.0 * i / 60.0);
    sup = std::max(sup, std::pow(t, 0.5) * sg.d_gamma_norm(0.5, sg.apply(t, x)) / xn);
  }
  CHECK(sup < 10.0);
  CHECK(sup > 0.0);
}

TEST_CASE("verify_smoothing_bounds: trivial regimes and scalar half-power case") {
  SpectralSemigroup sg({1.0, 10.0, 100.0});
  SmoothingExponents ex;
  ex.kappa = 0.3;
  ex.eta = 0.3;  // eta = kappa: contraction, sup 1
  ex.sigma = 0.4;
  ex.lam = 0.4;  // sigma = lambda: ||S - Id|| <= 2
  auto rep = verify_smoothing_bounds(sg, ex);
  CHECK(rep.smoothing_sup <= 1.0 + 1e-12);  // contraction
  CHECK(rep.smoothing_sup > 0.999);
  CHECK(rep.difference_sup <= 2.0);
  CHECK(std::isfinite(rep.two_point_sup));
  CHECK(std::isfinite(rep.four_point_sup));

  // scalar lambda = 1, sigma - lam = 1/2: sup_t t^{-1/2}(1 - e^{-t}) <= 1
  SpectralSemigroup one({1.0});
  double sup = 0.0;
  for (int i = 0; i <= 100; ++i) {
    double t = 1e-4 * std::pow(10.0, 4.0 * i / 100.0);
    sup = std::max(sup, std::pow(t, 0.5) * one.difference_norm(t, 0.5, 0.0));
  }
  CHECK(sup <= 1.0 + 1e-12);

  SmoothingExponents bad;
  bad.eta = -0.2;
  bad.kappa = 0.0;
  CHECK_THROWS(verify_smoothing_bounds(sg, bad));
  SmoothingExponents bad2;
  bad2.sigma = 1.6;
  bad2.lam = 0.1;
  CHECK_THROWS(verify_smoothing_bounds(sg, bad2));
}

TEST_CASE("beta-beta orbit norm: zero vector, constant orbit, uniform bound") {
  Grid grid = Grid::dyadic(0.0, 1.0, 7);
  SpectralSemigroup sg({1.0, 10.0, 100.0});
  CHECK(beta_beta_orbit_norm(sg, {0.0, 0.0, 0.0}, 0.25, grid) == 0.0);

  SpectralSemigroup idsg = SpectralSemigroup::identity(2);
  Vec x = {3.0, 4.0};
  CHECK(beta_beta_orbit_norm(idsg, x, 0.25, grid) == doctest::Approx(5.0).epsilon(1e-13));

  // one constant across 100 random unit vectors (orbit norm <= C |x|)
  GaussianStream gs(17);
  double cmax = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Vec v(3);
    for (auto& e : v) e = gs.next();
    double n = nrm2(v);
    for (auto& e : v) e /= n;
    cmax = std::max(cmax, beta_beta_orbit_norm(sg, v, 0.25, grid));
  }
  CHECK(cmax < 10.0);

  // refinement stability of the norm for a fixed vector
  Vec u = {0.5, -0.5, 0.7};
  double c7 = beta_beta_orbit_norm(sg, u, 0.25, grid);
  double c8 = beta_beta_orbit_norm(sg, u, 0.25, Grid::dyadic(0.0, 1.0, 8));
  CHECK(c8 >= c7 - 1e-12);
  CHECK(c8 < 1.3 * c7 + 1e-12);

  CHECK_THROWS(beta_beta_orbit_norm(sg, u, 1.5, grid));
}

TEST_CASE("semigroup presets") {
  SpectralSemigroup lap = SpectralSemigroup::dirichlet_laplacian(3, 1.0);
  CHECK(lap.eigenvalues()[0] == doctest::Approx(M_PI * M_PI));
  CHECK(lap.eigenvalues()[2] == doctest::Approx(9.0 * M_PI * M_PI));
  CHECK_THROWS(SpectralSemigroup({-1.0}));
}
