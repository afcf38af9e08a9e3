#include "roughflow/coefficients.hpp"

#include <cmath>
#include <stdexcept>

namespace roughflow {

namespace {

// tanh and its first three derivatives, with global bounds 1, 1, 0.7699, 2.
inline double g0(double x) { return std::tanh(x); }
inline double g1(double x) {
  double t = std::tanh(x);
  return 1.0 - t * t;
}
inline double g2(double x) {
  double t = std::tanh(x);
  return -2.0 * t * (1.0 - t * t);
}
inline double g3(double x) {
  double t = std::tanh(x);
  return (1.0 - t * t) * (4.0 * t * t - 2.0);
}

}  // namespace

CoefficientG CoefficientG::zero(int dim_w, int dim_v) {
  CoefficientG g;
  g.kind_ = Kind::Zero;
  g.dim_w_ = dim_w;
  g.dim_v_ = dim_v;
  return g;
}

CoefficientG CoefficientG::constant(Matrix K) {
  CoefficientG g;
  g.kind_ = Kind::Constant;
  g.dim_w_ = K.rows;
  g.dim_v_ = K.cols;
  g.bound_g_ = operator_norm(K);
  g.k0_ = std::move(K);
  return g;
}

CoefficientG CoefficientG::nemytskii(const SpectralSemigroup& sg, double beta, Matrix P, Matrix B,
                                     double scale, double shift) {
  if (P.rows != sg.dim_w() || P.cols != sg.dim_w())
    throw std::invalid_argument("CoefficientG: P must be dim_w x dim_w");
  if (B.rows != sg.dim_w()) throw std::invalid_argument("CoefficientG: B must have dim_w rows");
  CoefficientG g;
  g.kind_ = Kind::Nemytskii;
  g.dim_w_ = sg.dim_w();
  g.dim_v_ = B.cols;
  g.nu_.resize(g.dim_w_);
  for (int k = 0; k < g.dim_w_; ++k) {
    double l = sg.eigenvalues()[k];
    g.nu_[k] = (l == 0.0) ? 1.0 : std::pow(l, -beta);
  }
  double pn = operator_norm(P), bn = operator_norm(B);
  double numax = 0.0;
  for (double v : g.nu_) numax = std::max(numax, v);
  g.p_ = std::move(P);
  g.b_ = std::move(B);
  g.scale_ = scale;
  g.shift_ = shift;
  g.bound_g_ = std::abs(scale) * numax * bn;
  g.bound_dg_ = std::abs(scale) * numax * bn * pn;
  g.bound_d2g_ = 0.7699 * std::abs(scale) * numax * bn * pn * pn;
  g.bound_d3g_ = 2.0 * std::abs(scale) * numax * bn * pn * pn * pn;
  return g;
}

CoefficientG CoefficientG::nemytskii_default(const SpectralSemigroup& sg, double beta, int dim_v,
                                             double scale, double shift) {
  int dw = sg.dim_w();
  Matrix P(dw, dw);
  for (int k = 0; k < dw; ++k) P(k, k) = 1.0;
  Matrix B(dw, dim_v);
  for (int k = 0; k < dw; ++k)
    for (int j = 0; j < dim_v; ++j) B(k, j) = 1.0 / (1.0 + k + j);
  return nemytskii(sg, beta, std::move(P), std::move(B), scale, shift);
}

Matrix CoefficientG::eval(const Vec& y) const {
  switch (kind_) {
    case Kind::Zero:
      return Matrix(dim_w_, dim_v_);
    case Kind::Constant:
      return k0_;
    case Kind::Nemytskii: {
      Matrix r(dim_w_, dim_v_);
      Vec py = p_.apply(y);
      for (int k = 0; k < dim_w_; ++k) {
        double f = nu_[k] * scale_ * g0(py[k] + shift_);
        for (int j = 0; j < dim_v_; ++j) r(k, j) = f * b_(k, j);
      }
      return r;
    }
  }
  return Matrix(dim_w_, dim_v_);
}

Tensor3 CoefficientG::derivative(const Vec& y) const {
  Tensor3 r(dim_w_, dim_w_, dim_v_);
  if (kind_ != Kind::Nemytskii) return r;  // zero for the zero/constant families
  Vec py = p_.apply(y);
  for (int k = 0; k < dim_w_; ++k) {
    double f = nu_[k] * scale_ * g1(py[k] + shift_);
    for (int m = 0; m < dim_w_; ++m) {
      double fp = f * p_(k, m);
      if (fp == 0.0) continue;
      for (int j = 0; j < dim_v_; ++j) r(k, m, j) = fp * b_(k, j);
    }
  }
  return r;
}

Matrix CoefficientG::d2(const Vec& y, const Vec& w1, const Vec& w2) const {
  Matrix r(dim_w_, dim_v_);
  if (kind_ != Kind::Nemytskii) return r;
  Vec py = p_.apply(y), pw1 = p_.apply(w1), pw2 = p_.apply(w2);
  for (int k = 0; k < dim_w_; ++k) {
    double f = nu_[k] * scale_ * g2(py[k] + shift_) * pw1[k] * pw2[k];
    for (int j = 0; j < dim_v_; ++j) r(k, j) = f * b_(k, j);
  }
  return r;
}

Matrix CoefficientG::d3(const Vec& y, const Vec& w1, const Vec& w2, const Vec& w3) const {
  Matrix r(dim_w_, dim_v_);
  if (kind_ != Kind::Nemytskii) return r;
  Vec py = p_.apply(y), pw1 = p_.apply(w1), pw2 = p_.apply(w2), pw3 = p_.apply(w3);
  for (int k = 0; k < dim_w_; ++k) {
    double f = nu_[k] * scale_ * g3(py[k] + shift_) * pw1[k] * pw2[k] * pw3[k];
    for (int j = 0; j < dim_v_; ++j) r(k, j) = f * b_(k, j);
  }
  return r;
}

CoefficientF CoefficientF::zero(int dim_w) {
  CoefficientF f;
  f.dim_w_ = dim_w;
  f.c_ = 0.0;
  return f;
}

CoefficientF CoefficientF::tanh_drift(int dim_w, double c) {
  CoefficientF f;
  f.dim_w_ = dim_w;
  f.c_ = c;
  return f;
}

Vec CoefficientF::eval(const Vec& y) const {
  Vec r(y.size(), 0.0);
  if (c_ == 0.0) return r;
  for (std::size_t k = 0; k < y.size(); ++k) r[k] = c_ * std::tanh(y[k]);
  return r;
}

}  // namespace roughflow
