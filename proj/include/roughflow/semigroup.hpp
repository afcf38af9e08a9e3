#ifndef ROUGHFLOW_SEMIGROUP_HPP
#define ROUGHFLOW_SEMIGROUP_HPP

#include <string>
#include <vector>

#include "roughflow/grid.hpp"
#include "roughflow/linalg.hpp"

namespace roughflow {

/// Diagonal analytic semigroup S(t) = diag(e^{-lambda_k t}) generated by
/// A = diag(-lambda_k), lambda_k >= 0, on the eigenbasis of W.
/// Fractional powers (-A)^gamma act coordinate-wise as lambda_k^gamma.
class SpectralSemigroup {
 public:
  explicit SpectralSemigroup(std::vector<double> eigenvalues);

  static SpectralSemigroup identity(int dim);                        // all lambda = 0
  static SpectralSemigroup dirichlet_laplacian(int dim, double scale);  // lambda_k = scale k^2 pi^2

  int dim_w() const { return static_cast<int>(lambda_.size()); }
  const std::vector<double>& eigenvalues() const { return lambda_; }

  void apply_inplace(double t, Vec& x) const;
  Vec apply(double t, const Vec& x) const;

  /// (-A)^gamma x. gamma < 0 requires lambda_k > 0 on active modes; modes with
  /// lambda_k = 0 map to 0 for gamma > 0 and are rejected for gamma < 0 unless
  /// the corresponding coordinate vanishes.
  Vec fractional_power(double gamma, const Vec& x) const;

  /// Graph norm |x| + |(-A)^gamma x|.
  double d_gamma_norm(double gamma, const Vec& x) const;

  /// Operator norm of S(t) from the homogeneous D_kappa scale into D_eta,
  /// i.e. max_k lambda_k^{eta-kappa} e^{-lambda_k t} (eta >= kappa).
  double smoothing_norm(double t, double kappa, double eta) const;

  /// Operator norm of S(t) - Id from D_sigma into D_lambda, sigma - lambda in [0,1].
  double difference_norm(double t, double sigma, double lam) const;

 private:
  std::vector<double> lambda_;
};

/// Empirical constants for the semigroup smoothing/difference bounds, taken as
/// sups over a log-spaced time grid (and sampled tuples for the 2- and 4-point
/// differences).
struct SmoothingBoundsReport {
  double smoothing_sup = 0.0;     // sup_t t^{eta-kappa} ||S(t)||_{kappa->eta}
  double difference_sup = 0.0;    // sup_t t^{sigma-lambda} ||S(t)-Id||_{sigma->lambda}
  double two_point_sup = 0.0;     // sup (r-q)^{-mu} (t-r)^{mu+gamma-kappa} ||S(t-r)-S(t-q)||
  double four_point_sup = 0.0;    // sup over (q,r,s,t) of the mixed difference bound
};

struct SmoothingExponents {
  double kappa = 0.0, eta = 0.0;         // smoothing pair, eta >= kappa
  double sigma = 0.0, lam = 0.0;         // difference pair, sigma - lam in [0, 1]
  double mu = 0.5, gamma = 0.0, kappa2 = 0.0;  // two-point difference, kappa2 <= gamma + mu
  double eta4 = 0.5, nu4 = 0.5;          // four-point difference
};

SmoothingBoundsReport verify_smoothing_bounds(const SpectralSemigroup& sg,
                                              const SmoothingExponents& ex,
                                              int t_samples = 60, double t_min = 1e-6,
                                              double t_max = 4.0);

/// Discrete C^{beta,beta} norm of the orbit t -> S(t)x over the given grid:
/// sup_i |S(t_i)x| + sup_{0<i<j} t_i^beta |(S(t_j)-S(t_i))x| / (t_j-t_i)^beta.
double beta_beta_orbit_norm(const SpectralSemigroup& sg, const Vec& x, double beta,
                            const Grid& grid);

}  // namespace roughflow

#endif
