#ifndef ROUGHFLOW_LINALG_HPP
#define ROUGHFLOW_LINALG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace roughflow {

using Vec = std::vector<double>;

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double nrm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline double inf_norm(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale_inplace(Vec& x, double a) {
  for (double& v : x) v *= a;
}

inline Vec scaled(Vec x, double a) {
  scale_inplace(x, a);
  return x;
}

inline Vec sub(const Vec& x, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline Vec add(const Vec& x, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

/// Dense row-major matrix; used for V->W operators (dim_w x dim_v) and
/// V (x) V second-order tensors (dim_v x dim_v).
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  Vec apply(const Vec& v) const {
    Vec r(rows, 0.0);
    for (int i = 0; i < rows; ++i) {
      double s = 0.0;
      const double* row = &a[static_cast<std::size_t>(i) * cols];
      for (int j = 0; j < cols; ++j) s += row[j] * v[j];
      r[i] = s;
    }
    return r;
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }
  Matrix& operator*=(double c) {
    for (double& v : a) v *= c;
    return *this;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
  }
};

inline Matrix outer(const Vec& x, const Vec& y) {
  Matrix m(static_cast<int>(x.size()), static_cast<int>(y.size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m(i, j) = x[i] * y[j];
  return m;
}

inline Matrix matmul(const Matrix& A, const Matrix& B) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
  Matrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

/// 3-tensor for W (x) V -> W operators, indexed (k, m, j) = (out W, in W, in V).
struct Tensor3 {
  int n0 = 0, n1 = 0, n2 = 0;
  std::vector<double> a;

  Tensor3() = default;
  Tensor3(int d0, int d1, int d2)
      : n0(d0), n1(d1), n2(d2), a(static_cast<std::size_t>(d0) * d1 * d2, 0.0) {}

  double& operator()(int k, int m, int j) {
    return a[(static_cast<std::size_t>(k) * n1 + m) * n2 + j];
  }
  double operator()(int k, int m, int j) const {
    return a[(static_cast<std::size_t>(k) * n1 + m) * n2 + j];
  }

  Tensor3& operator*=(double c) {
    for (double& v : a) v *= c;
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
  }
};

/// Partial application E(w): the dim_w x dim_v operator [E(w)]_{kj} = sum_m E_{kmj} w_m.
inline Matrix tensor_apply_w(const Tensor3& E, const Vec& w) {
  Matrix r(E.n0, E.n2);
  for (int k = 0; k < E.n0; ++k)
    for (int m = 0; m < E.n1; ++m) {
      double wm = w[m];
      if (wm == 0.0) continue;
      for (int j = 0; j < E.n2; ++j) r(k, j) += E(k, m, j) * wm;
    }
  return r;
}

/// Double contraction sum_{m,j} E_{kmj} M_{mj} -> W-vector.
inline Vec tensor_contract(const Tensor3& E, const Matrix& M) {
  Vec r(E.n0, 0.0);
  for (int k = 0; k < E.n0; ++k) {
    double s = 0.0;
    for (int m = 0; m < E.n1; ++m)
      for (int j = 0; j < E.n2; ++j) s += E(k, m, j) * M(m, j);
    r[k] = s;
  }
  return r;
}

/// Largest singular value via power iteration on A^T A.
double operator_norm(const Matrix& A, double tol = 1e-10, int max_iter = 500);

/// Operator norm of E as a map W (x) V -> W (flattened dim_w x (dim_w*dim_v) matrix).
double operator_norm(const Tensor3& E, double tol = 1e-10, int max_iter = 500);

/// Deterministic standard normal stream (Box-Muller over mt19937_64).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed);
  double next();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
  double next_uniform();  // in (0, 1]
};

/// SplitMix64 step, used to derive independent substream seeds.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace roughflow

#endif
