#include "roughflow/convolution.hpp"

#include <cmath>
#include <stdexcept>

#include "roughflow/expkernels.hpp"

namespace roughflow {

double d_beta_operator_norm(const SpectralSemigroup& sg, const Matrix& K, double beta) {
  Matrix w = K;
  for (int k = 0; k < K.rows; ++k) {
    double l = sg.eigenvalues()[k];
    double f = (l == 0.0) ? 0.0 : std::pow(l, beta);
    for (int j = 0; j < K.cols; ++j) w(k, j) *= f;
  }
  return operator_norm(K) + operator_norm(w);
}

ConvolutionContext::ConvolutionContext(std::shared_ptr<const GridRoughPath> rp,
                                       std::shared_ptr<const SpectralSemigroup> sg)
    : ConvolutionContext(*rp, *sg) {
  owned_rp_ = std::move(rp);
  owned_sg_ = std::move(sg);
}

ConvolutionContext::ConvolutionContext(const GridRoughPath& rp, const SpectralSemigroup& sg)
    : rp_(&rp), sg_(&sg), dw_(sg.dim_w()), dv_(rp.dim_v()), h_(rp.grid().dt()) {
  exp_h_.resize(dw_);
  mom0_.resize(dw_);
  mom1_.resize(dw_);
  mom2_.resize(dw_);
  m_cell_.resize(dw_);
  csig_.resize(dw_);
  bridge0_ = Matrix(dw_, dw_);
  bridge1_r_ = Matrix(dw_, dw_);
  bridge1_z_.resize(dw_);
  a_cell_coef_ = Matrix(dw_, dw_);
  const auto& lam = sg.eigenvalues();
  for (int k = 0; k < dw_; ++k) {
    double l = lam[k];
    exp_h_[k] = std::exp(-l * h_);
    mom0_[k] = mom0(l, h_);
    mom1_[k] = mom1(l, h_);
    mom2_[k] = mom2(l, h_);
    m_cell_[k] = mom0_[k] / h_;  // equals e^{-lh} + l*mom1/h
    csig_[k] = -l * mom2_[k] / (h_ * h_) - exp_h_[k];
    bridge1_z_[k] = mom1(l, h_);  // bridge1(0, l, h) = int e^{-l u} u du
  }
  for (int k = 0; k < dw_; ++k)
    for (int m = 0; m < dw_; ++m) {
      bridge0_(k, m) = bridge0(lam[k], lam[m], h_);
      bridge1_r_(k, m) = bridge1(lam[m], lam[k], h_);
      a_cell_coef_(k, m) = (lam[k] - lam[m]) * bridge1_r_(k, m) - lam[k] * bridge1_z_[k];
    }
}

void ConvolutionContext::slope(int cell, Vec& out) const {
  out.resize(dv_);
  for (int j = 0; j < dv_; ++j) out[j] = (rp_->path.at(cell + 1, j) - rp_->path.at(cell, j)) / h_;
}

Matrix ConvolutionContext::omega_s_core(int s_node, int t_node) const {
  if (s_node > t_node) throw std::invalid_argument("omega_s: need s <= t");
  Matrix core(dw_, dv_);
  if (s_node == t_node) return core;
  const auto& lam = sg_->eigenvalues();
  double tt = rp_->grid().time(t_node);
  Vec sl(dv_);
  for (int k = 0; k < dw_; ++k) {
    double l = lam[k];
    double endf = std::exp(-l * (tt - rp_->grid().time(s_node)));
    for (int j = 0; j < dv_; ++j)
      core(k, j) = endf * (rp_->path.at(t_node, j) - rp_->path.at(s_node, j));
    if (l == 0.0) continue;
    double eps = 1.0;  // e^{-l (t - p1)} walking right to left
    for (int c = t_node - 1; c >= s_node; --c) {
      for (int j = 0; j < dv_; ++j) {
        double c0 = rp_->path.at(t_node, j) - rp_->path.at(c + 1, j);
        double slj = (rp_->path.at(c + 1, j) - rp_->path.at(c, j)) / h_;
        core(k, j) += l * eps * (c0 * mom0_[k] + slj * mom1_[k]);
      }
      eps *= exp_h_[k];
    }
  }
  return core;
}

Vec ConvolutionContext::omega_s(const Matrix& K, int s_node, int t_node) const {
  if (K.rows != dw_ || K.cols != dv_)
    throw std::invalid_argument("omega_s: operator shape mismatch");
  Matrix core = omega_s_core(s_node, t_node);
  Vec r(dw_, 0.0);
  for (int k = 0; k < dw_; ++k) {
    double s = 0.0;
    for (int j = 0; j < dv_; ++j) s += core(k, j) * K(k, j);
    r[k] = s;
  }
  return r;
}

Vec ConvolutionContext::omega_s_cell(const Matrix& K, int cell) const {
  Vec r(dw_, 0.0);
  for (int k = 0; k < dw_; ++k) {
    double s = 0.0;
    for (int j = 0; j < dv_; ++j)
      s += K(k, j) * (rp_->path.at(cell + 1, j) - rp_->path.at(cell, j));
    r[k] = m_cell_[k] * s;
  }
  return r;
}

Vec ConvolutionContext::a_cell(const Tensor3& E, const Vec& x, int cell) const {
  // omega^S part with the constant operator E(x), plus the exact one-cell
  // correction integral.
  Vec r(dw_, 0.0);
  for (int k = 0; k < dw_; ++k) {
    double s = 0.0;
    for (int m = 0; m < dw_; ++m) {
      double xm = x[m];
      if (xm == 0.0) continue;
      double dotd = 0.0;
      for (int j = 0; j < dv_; ++j)
        dotd += E(k, m, j) * (rp_->path.at(cell + 1, j) - rp_->path.at(cell, j));
      s += xm * (m_cell_[k] * dotd + a_cell_coef_(k, m) * dotd / h_);
    }
    r[k] = s;
  }
  return r;
}

Vec ConvolutionContext::c_cell(const Tensor3& E, const Matrix& K, int cell) const {
  Vec d = rp_->path.increment(cell, cell + 1);
  Vec kd = K.apply(d);
  Vec r(dw_, 0.0);
  for (int k = 0; k < dw_; ++k) {
    double s1 = 0.0;  // omega^S(E(K d)) over the cell
    double s2 = 0.0;  // area contraction E K (d (x) d) / 2
    for (int m = 0; m < dw_; ++m) {
      double km = kd[m];
      if (km == 0.0) continue;
      double dotd = 0.0;
      for (int j = 0; j < dv_; ++j) dotd += E(k, m, j) * d[j];
      s1 += km * dotd;
      s2 += 0.5 * km * dotd;
    }
    r[k] = m_cell_[k] * s1 + csig_[k] * s2;
  }
  return r;
}

Vec ConvolutionContext::a_process(const Tensor3& E, const Vec& x, int s_node, int t_node) const {
  if (E.n0 != dw_ || E.n1 != dw_ || E.n2 != dv_ || static_cast<int>(x.size()) != dw_)
    throw std::invalid_argument("a_process: operator or vector shape mismatch");
  if (s_node > t_node) throw std::invalid_argument("a_process: need s <= t");
  Vec r(dw_, 0.0);
  if (s_node == t_node) return r;
  if (t_node - s_node == 1) return a_cell(E, x, s_node);

  // omega^S_{ts}(E x)
  Matrix Ex = tensor_apply_w(E, x);
  r = omega_s(Ex, s_node, t_node);

  const auto& lam = sg_->eigenvalues();
  int cells = t_node - s_node;
  // Prefactors: eps_k(c) = e^{-l_k (t - p1_c)}, eta_m(c) = e^{-l_m (p0_c - s)}.
  std::vector<double> eps(static_cast<std::size_t>(cells) * dw_);
  for (int k = 0; k < dw_; ++k) {
    double v = 1.0;
    for (int c = cells - 1; c >= 0; --c) {
      eps[static_cast<std::size_t>(c) * dw_ + k] = v;
      v *= exp_h_[k];
    }
  }
  // Accumulators: P(k,m) = sum_j E_{kmj} Phi_{km,j}; Q0(k,j) = Phi0_{kj}.
  Matrix P(dw_, dw_);
  Matrix Q0(dw_, dv_);
  std::vector<double> eta(dw_, 1.0);
  Vec c0(dv_), sl(dv_);
  for (int c = 0; c < cells; ++c) {
    int left = s_node + c;
    for (int j = 0; j < dv_; ++j) {
      c0[j] = rp_->path.at(t_node, j) - rp_->path.at(left + 1, j);
      sl[j] = (rp_->path.at(left + 1, j) - rp_->path.at(left, j)) / h_;
    }
    const double* epsc = &eps[static_cast<std::size_t>(c) * dw_];
    for (int k = 0; k < dw_; ++k) {
      double ek = epsc[k];
      for (int m = 0; m < dw_; ++m) {
        double dot0 = 0.0, dots = 0.0;
        for (int j = 0; j < dv_; ++j) {
          dot0 += E(k, m, j) * c0[j];
          dots += E(k, m, j) * sl[j];
        }
        P(k, m) += ek * eta[m] * (dot0 * bridge0_(k, m) + dots * bridge1_r_(k, m));
      }
      // lambda_m = 0 slot: eta = 1, bridge0 -> mom0_k, bridge1_r -> mom1_k
      for (int j = 0; j < dv_; ++j)
        Q0(k, j) += ek * (c0[j] * mom0_[k] + sl[j] * mom1_[k]);
    }
    for (int m = 0; m < dw_; ++m) eta[m] *= exp_h_[m];
  }
  for (int k = 0; k < dw_; ++k) {
    double corr = 0.0;
    for (int m = 0; m < dw_; ++m) {
      double q = 0.0;
      for (int j = 0; j < dv_; ++j) q += E(k, m, j) * Q0(k, j);
      corr += x[m] * ((lam[k] - lam[m]) * P(k, m) - lam[k] * q);
    }
    r[k] += corr;
  }
  return r;
}

Vec ConvolutionContext::c_process(const Tensor3& E, const Matrix& K, int s_node,
                                  int t_node) const {
  if (E.n0 != dw_ || E.n1 != dw_ || E.n2 != dv_ || K.rows != dw_ || K.cols != dv_)
    throw std::invalid_argument("c_process: operator shape mismatch");
  if (s_node > t_node) throw std::invalid_argument("c_process: need s <= t");
  Vec r(dw_, 0.0);
  if (s_node == t_node) return r;
  if (t_node - s_node == 1) return c_cell(E, K, s_node);

  const auto& lam = sg_->eigenvalues();
  Vec d = rp_->path.increment(s_node, t_node);
  Matrix N = tensor_apply_w(E, K.apply(d));
  Matrix core = omega_s_core(s_node, t_node);
  for (int k = 0; k < dw_; ++k) {
    double s = 0.0;
    for (int j = 0; j < dv_; ++j) s += core(k, j) * N(k, j);
    r[k] = s;
  }

  // The area terms contract E's V-slot against the first tensor index and K
  // against the second (transposed area), which is what makes the S = Id
  // reduction c = E K w2 and the twisted additivity identity exact.
  Matrix w2 = chen_reconstruct(*rp_, s_node, t_node);
  Matrix w2t(dv_, dv_);
  for (int i = 0; i < dv_; ++i)
    for (int j = 0; j < dv_; ++j) w2t(i, j) = w2(j, i);
  Vec theta_end = tensor_contract(E, matmul(K, w2t));
  double dt_all = rp_->grid().time(t_node) - rp_->grid().time(s_node);
  for (int k = 0; k < dw_; ++k) r[k] -= std::exp(-lam[k] * dt_all) * theta_end[k];

  int cells = t_node - s_node;
  Vec c0(dv_), sl(dv_);
  std::vector<double> eps(dw_, 1.0);
  for (int c = cells - 1; c >= 0; --c) {
    int left = s_node + c;
    for (int j = 0; j < dv_; ++j) {
      c0[j] = rp_->path.at(t_node, j) - rp_->path.at(left + 1, j);
      sl[j] = (rp_->path.at(left + 1, j) - rp_->path.at(left, j)) / h_;
    }
    Matrix w2seg = chen_reconstruct(*rp_, left + 1, t_node);
    Matrix w2segt(dv_, dv_);
    for (int i = 0; i < dv_; ++i)
      for (int j = 0; j < dv_; ++j) w2segt(i, j) = w2seg(j, i);
    Vec th0 = tensor_contract(E, matmul(K, w2segt));
    // transposed middle piece u * (w_t - w_{p1}) (x) sl -> K c0 into E's W slot
    Vec kc0 = K.apply(c0);
    Vec ksl = K.apply(sl);
    Matrix Ekc0 = tensor_apply_w(E, kc0);
    Matrix Eksl = tensor_apply_w(E, ksl);
    Vec th1 = Ekc0.apply(sl);
    Vec th2 = Eksl.apply(sl);
    for (int k = 0; k < dw_; ++k) {
      double l = lam[k];
      if (l == 0.0) continue;
      r[k] -= l * eps[k] * (mom0_[k] * th0[k] + mom1_[k] * th1[k] + 0.5 * mom2_[k] * th2[k]);
    }
    for (int k = 0; k < dw_; ++k) eps[k] *= exp_h_[k];
  }
  return r;
}

Vec ConvolutionContext::b_germ(const Tensor3& E, const Matrix& K, const Vec& omega_s_prefix_K,
                               int u_node, int v_node) const {
  Vec g = (v_node - u_node == 1) ? a_cell(E, omega_s_prefix_K, u_node)
                                 : a_process(E, omega_s_prefix_K, u_node, v_node);
  Vec c = (v_node - u_node == 1) ? c_cell(E, K, u_node) : c_process(E, K, u_node, v_node);
  axpy(1.0, c, g);
  return g;
}

Vec ConvolutionContext::b_process(const Tensor3& E, const Matrix& K, int s_node, int t_node,
                                  int level) const {
  if (s_node > t_node) throw std::invalid_argument("b_process: need s <= t");
  Vec acc(dw_, 0.0);
  if (s_node == t_node) return acc;
  int span = t_node - s_node;
  int parts, stride;
  if (level < 0) {
    parts = span;
    stride = 1;
  } else {
    parts = 1 << level;
    if (parts > span || span % parts != 0)
      throw std::invalid_argument("b_process: span does not admit the requested dyadic level");
    stride = span / parts;
  }
  double hp = h_ * stride;
  Vec pref(dw_, 0.0);  // omega^S_{us}(K) at the running left endpoint
  for (int p = 0; p < parts; ++p) {
    int u = s_node + p * stride, v = u + stride;
    sg_->apply_inplace(hp, acc);
    Vec g = b_germ(E, K, pref, u, v);
    axpy(1.0, g, acc);
    // advance prefix: omega^S_{vs} = S(v-u) omega^S_{us} + omega^S_{vu}
    sg_->apply_inplace(hp, pref);
    Vec w = (stride == 1) ? omega_s_cell(K, u) : omega_s(K, u, v);
    axpy(1.0, w, pref);
  }
  return acc;
}

Vec ConvolutionContext::b_process(const Tensor3& E, const OperatorK& K, int s_node, int t_node,
                                  int level) const {
  if (!K.d_beta_flagged)
    throw std::invalid_argument("b_process: operator must be flagged as mapping into D_beta");
  return b_process(E, K.m, s_node, t_node, level);
}

ConvolutionDefects ConvolutionContext::algebraic_defects(const Tensor3& E, const Matrix& K,
                                                         const Vec& x, int s_node, int tau_node,
                                                         int t_node) const {
  if (!(s_node <= tau_node && tau_node <= t_node))
    throw std::invalid_argument("algebraic_defects: need s <= tau <= t");
  ConvolutionDefects d;
  double dt_right = rp_->grid().time(t_node) - rp_->grid().time(tau_node);
  double dt_left = rp_->grid().time(tau_node) - rp_->grid().time(s_node);

  {
    Vec lhs = omega_s(K, s_node, t_node);
    axpy(-1.0, omega_s(K, tau_node, t_node), lhs);
    Vec lower = sg_->apply(dt_right, omega_s(K, s_node, tau_node));
    axpy(-1.0, lower, lhs);
    d.omega_s = nrm2(lhs);
  }
  {
    Vec lhs = a_process(E, x, s_node, t_node);
    axpy(-1.0, a_process(E, x, tau_node, t_node), lhs);
    Vec lower = sg_->apply(dt_right, a_process(E, x, s_node, tau_node));
    axpy(-1.0, lower, lhs);
    Vec sx = sg_->apply(dt_left, x);
    axpy(-1.0, x, sx);  // (S(tau-s) - Id) x
    axpy(-1.0, a_process(E, sx, tau_node, t_node), lhs);
    d.a = nrm2(lhs);
  }
  {
    Vec lhs = c_process(E, K, s_node, t_node);
    axpy(-1.0, c_process(E, K, tau_node, t_node), lhs);
    Vec lower = sg_->apply(dt_right, c_process(E, K, s_node, tau_node));
    axpy(-1.0, lower, lhs);
    Matrix N = tensor_apply_w(E, K.apply(rp_->path.increment(s_node, tau_node)));
    axpy(-1.0, omega_s(N, tau_node, t_node), lhs);
    d.c = nrm2(lhs);
  }
  {
    Vec lhs = b_process(E, K, s_node, t_node);
    axpy(-1.0, b_process(E, K, tau_node, t_node), lhs);
    Vec lower = sg_->apply(dt_right, b_process(E, K, s_node, tau_node));
    axpy(-1.0, lower, lhs);
    Vec ws = omega_s(K, s_node, tau_node);
    axpy(-1.0, a_process(E, ws, tau_node, t_node), lhs);
    d.b = nrm2(lhs);
  }
  return d;
}

AnalyticEstimates ConvolutionContext::measure_analytic_estimates(const Tensor3& E,
                                                                 const Matrix& K, double alpha,
                                                                 int pair_stride) const {
  AnalyticEstimates est;
  int n = rp_->grid().cells;
  if (pair_stride <= 0) pair_stride = std::max(1, n / 32);
  double wnorm = holder_seminorm(rp_->path, alpha);
  double anorm = area_seminorm(*rp_, 2.0 * alpha);
  double ke = operator_norm(E);
  double kk = operator_norm(K);
  double kb = d_beta_operator_norm(*sg_, K, 0.5 * (1.0 - alpha) + 0.02);
  Vec x(dw_, 0.0);
  for (int k = 0; k < dw_; ++k) x[k] = 1.0 / (k + 1.0);
  double xn = nrm2(x);
  for (int i = 0; i <= n; i += pair_stride) {
    for (int j = i + pair_stride; j <= n; j += pair_stride) {
      double dt = rp_->grid().time(j) - rp_->grid().time(i);
      double p1 = std::pow(dt, alpha), p2 = std::pow(dt, 2.0 * alpha);
      est.omega_s_sup =
          std::max(est.omega_s_sup, nrm2(omega_s(K, i, j)) / (wnorm * kk * p1 + 1e-300));
      est.a_sup = std::max(est.a_sup,
                           nrm2(a_process(E, x, i, j)) / (wnorm * ke * xn * p1 + 1e-300));
      est.c_sup = std::max(est.c_sup, nrm2(c_process(E, K, i, j)) /
                                          ((wnorm + anorm) * ke * kk * p2 + 1e-300));
      est.b_sup = std::max(est.b_sup, nrm2(b_process(E, K, i, j)) /
                                          ((wnorm * wnorm + anorm) * ke * kb * p2 + 1e-300));
    }
  }
  return est;
}

}  // namespace roughflow
