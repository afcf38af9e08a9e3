#include "roughflow/linalg.hpp"

#include <cmath>

namespace roughflow {

namespace {

double power_iteration_sym(const std::vector<double>& ata, int n, double tol, int max_iter) {
  // ata is n x n symmetric positive semidefinite, row-major.
  Vec v(n, 0.0);
  // Fixed deterministic start vector.
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.001 * i;
  double norm = nrm2(v);
  for (double& x : v) x /= norm;
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += ata[static_cast<std::size_t>(i) * n + j] * v[j];
      w[i] = s;
    }
    double wn = nrm2(w);
    if (wn == 0.0) return 0.0;
    for (double& x : w) x /= wn;
    double lnew = wn;
    v = w;
    if (std::abs(lnew - lambda) <= tol * std::max(1.0, lnew)) {
      lambda = lnew;
      break;
    }
    lambda = lnew;
  }
  return std::sqrt(lambda);
}

}  // namespace

double operator_norm(const Matrix& A, double tol, int max_iter) {
  if (A.rows == 0 || A.cols == 0) return 0.0;
  int n = A.cols;
  std::vector<double> ata(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < A.rows; ++k) s += A(k, i) * A(k, j);
      ata[static_cast<std::size_t>(i) * n + j] = s;
    }
  return power_iteration_sym(ata, n, tol, max_iter);
}

double operator_norm(const Tensor3& E, double tol, int max_iter) {
  Matrix A(E.n0, E.n1 * E.n2);
  for (int k = 0; k < E.n0; ++k)
    for (int m = 0; m < E.n1; ++m)
      for (int j = 0; j < E.n2; ++j) A(k, m * E.n2 + j) = E(k, m, j);
  return operator_norm(A, tol, max_iter);
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  // SplitMix64 on seed ^ golden-ratio-scrambled stream index.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GaussianStream::GaussianStream(std::uint64_t seed) : state_(seed ? seed : 0x853c49e6748fea9bULL) {}

double GaussianStream::next_uniform() {
  // xorshift64* -- tiny, fast, deterministic across platforms.
  std::uint64_t x = state_;
  x ^= x >> 12;
  x ^= x << 25;
  x ^= x >> 27;
  state_ = x;
  std::uint64_t r = x * 0x2545f4914f6cdd1dULL;
  // Map the top 53 bits to (0, 1].
  return (static_cast<double>(r >> 11) + 1.0) * (1.0 / 9007199254740992.0);
}

double GaussianStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = next_uniform();
  double u2 = next_uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

}  // namespace roughflow
