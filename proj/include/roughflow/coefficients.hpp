#ifndef ROUGHFLOW_COEFFICIENTS_HPP
#define ROUGHFLOW_COEFFICIENTS_HPP

#include <functional>
#include <memory>

#include "roughflow/linalg.hpp"
#include "roughflow/semigroup.hpp"

namespace roughflow {

/// Diffusion coefficient G: W -> L(V, W), constrained to land in D_beta.
/// Families: zero, constant, and a smoothed Nemytskii map
///   [G(y)v]_k = nu_k * scale * tanh((P y)_k + shift) * (B v)_k,
/// nu_k = lambda_k^{-beta}: the (-A)^{-beta} factor supplies the D_beta
/// landing, tanh keeps all derivatives bounded, and a nonzero shift keeps the
/// second derivative alive along decaying trajectories.
class CoefficientG {
 public:
  enum class Kind { Zero, Constant, Nemytskii };

  static CoefficientG zero(int dim_w, int dim_v);
  static CoefficientG constant(Matrix K);
  static CoefficientG nemytskii(const SpectralSemigroup& sg, double beta, Matrix P, Matrix B,
                                double scale, double shift = 0.0);
  /// Convenience: P = I, B = ones-ish fixed mixing matrix.
  static CoefficientG nemytskii_default(const SpectralSemigroup& sg, double beta, int dim_v,
                                        double scale, double shift = 0.0);

  Kind kind() const { return kind_; }
  int dim_w() const { return dim_w_; }
  int dim_v() const { return dim_v_; }
  bool is_zero() const { return kind_ == Kind::Zero; }

  Matrix eval(const Vec& y) const;
  Tensor3 derivative(const Vec& y) const;
  /// Directional second and third derivatives (matrices in L(V, W)).
  Matrix d2(const Vec& y, const Vec& w1, const Vec& w2) const;
  Matrix d3(const Vec& y, const Vec& w1, const Vec& w2, const Vec& w3) const;

  double bound_g() const { return bound_g_; }
  double bound_dg() const { return bound_dg_; }
  double bound_d2g() const { return bound_d2g_; }
  double bound_d3g() const { return bound_d3g_; }

 private:
  Kind kind_ = Kind::Zero;
  int dim_w_ = 1, dim_v_ = 1;
  Matrix k0_;           // constant family
  Vec nu_;              // (-A)^{-beta} diagonal weights
  Matrix p_, b_;        // Nemytskii mixing matrices
  double scale_ = 0.0;
  double shift_ = 0.0;
  double bound_g_ = 0.0, bound_dg_ = 0.0, bound_d2g_ = 0.0, bound_d3g_ = 0.0;
};

/// Drift F: W -> W, Lipschitz. Off by default.
class CoefficientF {
 public:
  static CoefficientF zero(int dim_w);
  /// F(y)_k = c * tanh(y_k); Lipschitz constant |c|.
  static CoefficientF tanh_drift(int dim_w, double c);

  bool is_zero() const { return c_ == 0.0; }
  Vec eval(const Vec& y) const;
  double lipschitz() const { return std::abs(c_); }

 private:
  int dim_w_ = 1;
  double c_ = 0.0;
};

}  // namespace roughflow

#endif
