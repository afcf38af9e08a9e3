#include "roughflow/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughflow {

SpectralSemigroup::SpectralSemigroup(std::vector<double> eigenvalues)
    : lambda_(std::move(eigenvalues)) {
  if (lambda_.empty()) throw std::invalid_argument("semigroup: empty spectrum");
  for (double l : lambda_)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw std::invalid_argument("semigroup: eigenvalues must be finite and >= 0");
}

SpectralSemigroup SpectralSemigroup::identity(int dim) {
  return SpectralSemigroup(std::vector<double>(dim, 0.0));
}

SpectralSemigroup SpectralSemigroup::dirichlet_laplacian(int dim, double scale) {
  std::vector<double> l(dim);
  for (int k = 0; k < dim; ++k) {
    double kk = static_cast<double>(k + 1);
    l[k] = scale * kk * kk * M_PI * M_PI;
  }
  return SpectralSemigroup(std::move(l));
}

void SpectralSemigroup::apply_inplace(double t, Vec& x) const {
  if (t < 0.0) throw std::invalid_argument("semigroup: negative time");
  for (std::size_t k = 0; k < lambda_.size(); ++k) x[k] *= std::exp(-lambda_[k] * t);
}

Vec SpectralSemigroup::apply(double t, const Vec& x) const {
  Vec r = x;
  apply_inplace(t, r);
  return r;
}

Vec SpectralSemigroup::fractional_power(double gamma, const Vec& x) const {
  Vec r(x.size(), 0.0);
  if (gamma == 0.0) return x;
  for (std::size_t k = 0; k < lambda_.size(); ++k) {
    if (lambda_[k] == 0.0) {
      if (gamma > 0.0) {
        r[k] = 0.0;
      } else if (x[k] != 0.0) {
        throw std::invalid_argument("fractional_power: negative power on kernel mode");
      }
    } else {
      r[k] = std::pow(lambda_[k], gamma) * x[k];
    }
  }
  return r;
}

double SpectralSemigroup::d_gamma_norm(double gamma, const Vec& x) const {
  return nrm2(x) + nrm2(fractional_power(gamma, x));
}

double SpectralSemigroup::smoothing_norm(double t, double kappa, double eta) const {
  if (eta < kappa) throw std::invalid_argument("smoothing_norm: need eta >= kappa");
  double m = 0.0;
  for (double l : lambda_) {
    double v;
    if (l == 0.0)
      v = (eta == kappa) ? 1.0 : 0.0;
    else
      v = std::pow(l, eta - kappa) * std::exp(-l * t);
    m = std::max(m, v);
  }
  return m;
}

double SpectralSemigroup::difference_norm(double t, double sigma, double lam) const {
  double d = sigma - lam;
  if (d < 0.0 || d > 1.0) throw std::invalid_argument("difference_norm: sigma-lambda in [0,1]");
  double m = 0.0;
  for (double l : lambda_) {
    double v;
    if (l == 0.0)
      v = 0.0;
    else
      v = std::pow(l, -d) * (1.0 - std::exp(-l * t));
    m = std::max(m, v);
  }
  return m;
}

SmoothingBoundsReport verify_smoothing_bounds(const SpectralSemigroup& sg,
                                              const SmoothingExponents& ex, int t_samples,
                                              double t_min, double t_max) {
  if (ex.eta < ex.kappa) throw std::invalid_argument("verify_smoothing_bounds: eta < kappa");
  if (ex.sigma - ex.lam < 0.0 || ex.sigma - ex.lam > 1.0)
    throw std::invalid_argument("verify_smoothing_bounds: sigma - lambda outside [0,1]");
  if (ex.kappa2 > ex.gamma + ex.mu)
    throw std::invalid_argument("verify_smoothing_bounds: kappa2 > gamma + mu");
  if (ex.mu < 0.0 || ex.mu > 1.0 || ex.eta4 < 0.0 || ex.eta4 > 1.0 || ex.nu4 < 0.0 ||
      ex.nu4 > 1.0)
    throw std::invalid_argument("verify_smoothing_bounds: mu, eta, nu must lie in [0,1]");

  SmoothingBoundsReport rep;
  std::vector<double> ts(t_samples);
  for (int i = 0; i < t_samples; ++i) {
    double f = static_cast<double>(i) / (t_samples - 1);
    ts[i] = t_min * std::pow(t_max / t_min, f);
  }

  for (double t : ts) {
    rep.smoothing_sup =
        std::max(rep.smoothing_sup, std::pow(t, ex.eta - ex.kappa) * sg.smoothing_norm(t, ex.kappa, ex.eta));
    rep.difference_sup =
        std::max(rep.difference_sup,
                 std::pow(t, ex.sigma - ex.lam) * sg.difference_norm(t, ex.sigma, ex.lam));
  }

  // Two-point difference ||S(t-r) - S(t-q)||_{kappa2 -> gamma} over q < r < t tuples.
  for (double t : ts) {
    for (int iq = 1; iq <= 4; ++iq) {
      double q = t * iq / 8.0;
      for (int ir = iq + 1; ir <= 7; ++ir) {
        double r = t * ir / 8.0;
        double m = 0.0;
        for (double l : sg.eigenvalues()) {
          if (l == 0.0) continue;
          double diff = std::abs(std::exp(-l * (t - r)) - std::exp(-l * (t - q)));
          m = std::max(m, std::pow(l, ex.gamma - ex.kappa2) * diff);
        }
        double w = std::pow(r - q, -ex.mu) * std::pow(t - r, ex.mu + ex.gamma - ex.kappa2);
        rep.two_point_sup = std::max(rep.two_point_sup, w * m);
      }
    }
  }

  // Four-point difference on D_rho -> D_rho (rho cancels on the diagonal scale).
  for (double t : ts) {
    double s = 0.75 * t, r = 0.5 * t, q = 0.25 * t;
    double m = 0.0;
    for (double l : sg.eigenvalues()) {
      double v = std::abs(std::exp(-l * (t - r)) - std::exp(-l * (s - r)) -
                          std::exp(-l * (t - q)) + std::exp(-l * (s - q)));
      m = std::max(m, v);
    }
    double w = std::pow(t - s, -ex.eta4) * std::pow(r - q, -ex.nu4) * std::pow(s - r, ex.nu4 + ex.eta4);
    rep.four_point_sup = std::max(rep.four_point_sup, w * m);
  }
  return rep;
}

double beta_beta_orbit_norm(const SpectralSemigroup& sg, const Vec& x, double beta,
                            const Grid& grid) {
  if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta_beta_orbit_norm: beta in [0,1]");
  int n = grid.nodes();
  std::vector<Vec> orbit(n);
  for (int i = 0; i < n; ++i) orbit[i] = sg.apply(grid.time(i) - grid.t0, x);
  double sup = 0.0;
  for (int i = 0; i < n; ++i) sup = std::max(sup, nrm2(orbit[i]));
  double semi = 0.0;
  for (int i = 1; i < n; ++i) {
    double si = grid.time(i) - grid.t0;
    for (int j = i + 1; j < n; ++j) {
      double tj = grid.time(j) - grid.t0;
      double d = nrm2(sub(orbit[j], orbit[i]));
      semi = std::max(semi, std::pow(si, beta) * d / std::pow(tj - si, beta));
    }
  }
  return sup + semi;
}

}  // namespace roughflow
