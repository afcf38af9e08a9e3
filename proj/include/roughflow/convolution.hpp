#ifndef ROUGHFLOW_CONVOLUTION_HPP
#define ROUGHFLOW_CONVOLUTION_HPP

#include <memory>
#include <vector>

#include "roughflow/linalg.hpp"
#include "roughflow/rough_path.hpp"
#include "roughflow/semigroup.hpp"
#include "roughflow/sewing.hpp"

namespace roughflow {

/// V -> W operator, optionally flagged as landing in D_beta (the coefficient
/// regime); the flag carries the exponent used in norm checks.
struct OperatorK {
  Matrix m;
  bool d_beta_flagged = false;
  double beta = 0.0;
};

/// |K| as L(V, D_beta): |K| + |(-A)^beta K| in operator norms.
double d_beta_operator_norm(const SpectralSemigroup& sg, const Matrix& K, double beta);

struct ConvolutionDefects {
  double omega_s = 0.0;  // twisted additivity of omega^S (zero identity)
  double a = 0.0;        // against a_{t,tau}(E, (S(tau-s)-Id)x)
  double c = 0.0;        // against omega^S_{t,tau}(E K dw_{tau,s})
  double b = 0.0;        // against a_{t,tau}(E, omega^S_{tau,s}(K))
};

struct AnalyticEstimates {
  double omega_s_sup = 0.0;  // |w^S(K)| / (|||w||| |K| (t-s)^alpha)
  double a_sup = 0.0;        // |a(E,x)| / (|||w||| |E| |x| (t-s)^alpha)
  double c_sup = 0.0;        // |c(E,K)| / ((|||w|||+||w2||) |E| |K| (t-s)^{2 alpha})
  double b_sup = 0.0;        // |b(E,K)| / ((|||w|||^2+||w2||) |E| |K|_beta (t-s)^{2 alpha})
};

/// Supporting spectral convolution processes of a piecewise-linear rough
/// driver. All first- and second-order integrals are per-segment closed forms,
/// so the twisted (hat-delta_2) algebraic relations hold to roundoff. Node
/// indices refer to the driver grid; pure functions, safe to share.
class ConvolutionContext {
 public:
  ConvolutionContext(const GridRoughPath& rp, const SpectralSemigroup& sg);
  /// Owning variant: keeps the (typically Wiener-shifted) driver alive.
  ConvolutionContext(std::shared_ptr<const GridRoughPath> rp,
                     std::shared_ptr<const SpectralSemigroup> sg);

  const GridRoughPath& driver() const { return *rp_; }
  const SpectralSemigroup& semigroup() const { return *sg_; }
  const Grid& grid() const { return rp_->grid(); }
  int dim_w() const { return dw_; }
  int dim_v() const { return dv_; }

  /// Core matrix: [w^S_{ts}(K)]_k = sum_j core(k,j) K(k,j).
  Matrix omega_s_core(int s_node, int t_node) const;
  Vec omega_s(const Matrix& K, int s_node, int t_node) const;

  Vec a_process(const Tensor3& E, const Vec& x, int s_node, int t_node) const;
  Vec c_process(const Tensor3& E, const Matrix& K, int s_node, int t_node) const;

  /// Sewn second-order process; level -1 means full grid depth.
  Vec b_process(const Tensor3& E, const Matrix& K, int s_node, int t_node, int level = -1) const;
  /// Flag-checked variant: rejects operators not marked as landing in D_beta.
  Vec b_process(const Tensor3& E, const OperatorK& K, int s_node, int t_node,
                int level = -1) const;

  /// The b germ over a subinterval (also used by the solver's z germ).
  Vec b_germ(const Tensor3& E, const Matrix& K, const Vec& omega_s_prefix_K, int u_node,
             int v_node) const;

  ConvolutionDefects algebraic_defects(const Tensor3& E, const Matrix& K, const Vec& x,
                                       int s_node, int tau_node, int t_node) const;

  AnalyticEstimates measure_analytic_estimates(const Tensor3& E, const Matrix& K,
                                               double alpha, int pair_stride = 0) const;

  // Single-cell fast paths for germ loops (cell = left node index).
  Vec omega_s_cell(const Matrix& K, int cell) const;
  Vec a_cell(const Tensor3& E, const Vec& x, int cell) const;
  Vec c_cell(const Tensor3& E, const Matrix& K, int cell) const;

  /// Driver increment over [s, t].
  Vec increment(int s_node, int t_node) const { return rp_->path.increment(s_node, t_node); }

 private:
  std::shared_ptr<const GridRoughPath> owned_rp_;
  std::shared_ptr<const SpectralSemigroup> owned_sg_;
  const GridRoughPath* rp_;
  const SpectralSemigroup* sg_;
  int dw_, dv_;
  double h_;
  std::vector<double> exp_h_;   // e^{-lambda_k h}
  std::vector<double> mom0_, mom1_, mom2_;  // per-mode cell moments
  std::vector<double> m_cell_;  // omega^S single-cell coefficient per mode
  std::vector<double> csig_;    // c single-cell area coefficient per mode
  Matrix bridge0_;              // bridge0(lambda_k, lambda_m, h), (k, m)
  Matrix bridge1_r_;            // bridge1(lambda_m, lambda_k, h), (k, m)
  std::vector<double> bridge1_z_;  // bridge1(0, lambda_k, h)
  Matrix a_cell_coef_;          // (lambda_k - lambda_m) bridge1_r - lambda_k bridge1_z, (k, m)

  void slope(int cell, Vec& out) const;
};

}  // namespace roughflow

#endif
