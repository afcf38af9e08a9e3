#include "roughflow/fbm.hpp"

#include <cmath>
#include <stdexcept>

#include "roughflow/linalg.hpp"

namespace roughflow {

void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size not a power of two");
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

namespace {

// Autocovariance of fractional Gaussian noise increments on step dt.
double fgn_autocov(double hurst, double dt, int k) {
  double kk = static_cast<double>(k);
  double h2 = 2.0 * hurst;
  double v = 0.5 * (std::pow(std::abs(kk + 1.0), h2) + std::pow(std::abs(kk - 1.0), h2) -
                    2.0 * std::pow(std::abs(kk), h2));
  return v * std::pow(dt, h2);
}

std::vector<double> sample_fgn_cholesky(double hurst, double dt, int n, GaussianStream& gauss) {
  if (n > 2048) throw std::runtime_error("fbm: Cholesky fallback too large");
  std::vector<double> cov(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cov[static_cast<std::size_t>(i) * n + j] = fgn_autocov(hurst, dt, std::abs(i - j));
  // in-place lower Cholesky
  std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = cov[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= L[static_cast<std::size_t>(i) * n + k] * L[static_cast<std::size_t>(j) * n + k];
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("fbm: increment covariance not positive definite");
        L[static_cast<std::size_t>(i) * n + i] = std::sqrt(s);
      } else {
        L[static_cast<std::size_t>(i) * n + j] = s / L[static_cast<std::size_t>(j) * n + j];
      }
    }
  }
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = gauss.next();
  std::vector<double> x(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k <= i; ++k) s += L[static_cast<std::size_t>(i) * n + k] * z[k];
    x[i] = s;
  }
  return x;
}

}  // namespace

std::vector<double> sample_fbm_1d(double hurst, const Grid& grid, std::uint64_t seed) {
  if (!(hurst > 1.0 / 3.0) || !(hurst <= 0.5))
    throw std::invalid_argument("sample_fbm_1d: Hurst index must lie in (1/3, 1/2]");
  const int n = grid.cells;
  const double dt = grid.dt();
  GaussianStream gauss(split_seed(seed, 0));

  std::vector<double> incr;
  // Embedding size: smallest power of two >= 2n.
  std::size_t m = 1;
  while (m < 2 * static_cast<std::size_t>(n)) m <<= 1;

  std::vector<std::complex<double>> c(m, 0.0);
  for (std::size_t j = 0; j <= m / 2; ++j) c[j] = fgn_autocov(hurst, dt, static_cast<int>(j));
  for (std::size_t j = m / 2 + 1; j < m; ++j) c[j] = c[m - j];
  fft_radix2(c, -1);

  double max_eig = 0.0, min_eig = 0.0;
  for (auto& v : c) {
    max_eig = std::max(max_eig, v.real());
    min_eig = std::min(min_eig, v.real());
  }

  if (min_eig < -1e-9 * std::max(1.0, max_eig)) {
    incr = sample_fgn_cholesky(hurst, dt, n, gauss);
  } else {
    std::vector<std::complex<double>> a(m);
    const double md = static_cast<double>(m);
    auto eig = [&](std::size_t k) { return std::max(0.0, c[k].real()); };
    a[0] = std::sqrt(eig(0) / md) * gauss.next();
    a[m / 2] = std::sqrt(eig(m / 2) / md) * gauss.next();
    for (std::size_t k = 1; k < m / 2; ++k) {
      double s = std::sqrt(eig(k) / (2.0 * md));
      double re = gauss.next(), im = gauss.next();
      a[k] = std::complex<double>(s * re, s * im);
      a[m - k] = std::conj(a[k]);
    }
    fft_radix2(a, -1);
    incr.resize(n);
    for (int j = 0; j < n; ++j) incr[j] = a[j].real();
  }

  std::vector<double> path(grid.nodes(), 0.0);
  for (int j = 0; j < n; ++j) path[j + 1] = path[j] + incr[j];
  return path;
}

}  // namespace roughflow
