#include "roughflow/sewing.hpp"

#include <cmath>

namespace roughflow {

namespace {

void require_sewable(const Germ& germ, const Grid& grid, int s_node, int t_node, int level) {
  if (!(germ.rho_decl > 1.0))
    throw std::invalid_argument("sew: declared rho must exceed 1 for convergence");
  if (s_node < 0 || t_node > grid.cells || s_node >= t_node)
    throw std::invalid_argument("sew: bad node range");
  int span = t_node - s_node;
  if (level < 1) throw std::invalid_argument("sew: level must be >= 1");
  if ((1 << level) > span || span % (1 << level) != 0)
    throw std::invalid_argument("sew: [s,t] does not admit a dyadic level-" +
                                std::to_string(level) + " partition on the grid");
}

/// One compensated sum over the level-n dyadic partition, value at (s, t) only.
Vec compensated_sum(const Germ& germ, const SpectralSemigroup& sg, const Grid& grid, int s_node,
                    int t_node, int level) {
  int parts = 1 << level;
  int stride = (t_node - s_node) / parts;
  double hp = grid.dt() * stride;
  Vec acc;
  for (int p = 0; p < parts; ++p) {
    Vec xi = germ.eval(s_node + p * stride, s_node + (p + 1) * stride);
    if (p == 0) {
      acc = std::move(xi);
    } else {
      sg.apply_inplace(hp, acc);
      axpy(1.0, xi, acc);
    }
  }
  return acc;
}

}  // namespace

Vec SewnIncrements::increment(int i_part, int j_part, const SpectralSemigroup& sg) const {
  double dt = time_of(j_part) - time_of(i_part);
  Vec r = prefix[j_part];
  Vec si = sg.apply(dt, prefix[i_part]);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= si[k];
  return r;
}

SewnIncrements sew(const Germ& germ, const SpectralSemigroup& sg, const Grid& grid, int s_node,
                   int t_node, int level) {
  require_sewable(germ, grid, s_node, t_node, level);
  SewnIncrements out;
  out.grid = grid;
  out.s_node = s_node;
  out.t_node = t_node;
  out.level_used = level;
  int parts = 1 << level;
  out.stride = (t_node - s_node) / parts;
  double hp = grid.dt() * out.stride;

  // Level-by-level values at the pair (s, t); N^0 is the germ itself.
  Vec n_prev = germ.eval(s_node, t_node);
  Vec xi_ts = n_prev;
  out.level_diffs.clear();
  for (int n = 1; n <= level; ++n) {
    Vec v = compensated_sum(germ, sg, grid, s_node, t_node, n);
    out.level_diffs.push_back(nrm2(sub(v, n_prev)));
    n_prev = std::move(v);
  }
  out.defect_estimate = out.level_diffs.back();
  out.germ_gap = nrm2(sub(n_prev, xi_ts));

  // Prefix values along the level partition (consistent with N^level at (s,t)).
  out.prefix.assign(parts + 1, Vec(n_prev.size(), 0.0));
  Vec acc(n_prev.size(), 0.0);
  for (int p = 0; p < parts; ++p) {
    sg.apply_inplace(hp, acc);
    Vec xi = germ.eval(s_node + p * out.stride, s_node + (p + 1) * out.stride);
    axpy(1.0, xi, acc);
    out.prefix[p + 1] = acc;
  }
  return out;
}

SewnIncrements sew_adaptive(const Germ& germ, const SpectralSemigroup& sg, const Grid& grid,
                            int s_node, int t_node, double tol, int max_level) {
  if (!(tol > 0.0)) throw std::invalid_argument("sew_adaptive: tol must be positive");
  int span = t_node - s_node;
  int attainable = 0;
  while ((2 << attainable) <= span && span % (2 << attainable) == 0) ++attainable;
  ++attainable;  // levels 1..attainable fit the grid
  int cap = std::min(max_level, attainable);

  SewnIncrements best = sew(germ, sg, grid, s_node, t_node, 1);
  if (best.defect_estimate <= tol) return best;
  for (int lv = 2; lv <= cap; ++lv) {
    best = sew(germ, sg, grid, s_node, t_node, lv);
    if (best.defect_estimate <= tol) return best;
  }
  throw SewingNonConvergence(
      "sew_adaptive: level cap " + std::to_string(cap) + " reached with defect " +
          std::to_string(best.defect_estimate) + " > tol " + std::to_string(tol),
      best.defect_estimate);
}

double check_shift_property(const Germ& germ, const Grid& grid, const Germ& shifted_germ,
                            const Grid& shifted_grid, const SpectralSemigroup& sg, int tau_node,
                            int s_node, int t_node, int level) {
  if (tau_node < 0 || tau_node > s_node)
    throw std::invalid_argument("check_shift_property: need 0 <= tau <= s");
  SewnIncrements a = sew(germ, sg, grid, s_node, t_node, level);
  SewnIncrements b =
      sew(shifted_germ, sg, shifted_grid, s_node - tau_node, t_node - tau_node, level);
  double sup = 0.0;
  for (int i = 0; i <= a.parts(); ++i)
    for (int j = i + 1; j <= a.parts(); ++j)
      sup = std::max(sup, nrm2(sub(a.increment(i, j, sg), b.increment(i, j, sg))));
  return sup;
}

DepsTracking sew_with_deps_tracking(const Germ& germ, const SpectralSemigroup& sg,
                                    const Grid& grid, int s_node, int t_node, int level,
                                    double eps, double alpha_prime) {
  if (eps < 0.0 || eps >= 1.0)
    throw std::invalid_argument("sew_with_deps_tracking: eps in [0,1)");
  DepsTracking out;
  out.sewn = sew(germ, sg, grid, s_node, t_node, level);
  const SewnIncrements& sw = out.sewn;
  double hp = grid.dt() * sw.stride;
  for (int p = 0; p < sw.parts(); ++p) {
    Vec xi = germ.eval(s_node + p * sw.stride, s_node + (p + 1) * sw.stride);
    sg.apply_inplace(hp, xi);
    out.premise_sup =
        std::max(out.premise_sup, sg.d_gamma_norm(eps, xi) / std::pow(hp, alpha_prime));
  }
  double rho = germ.rho_decl;
  for (int i = 0; i <= sw.parts(); ++i)
    for (int j = i + 1; j <= sw.parts(); ++j) {
      double dt = sw.time_of(j) - sw.time_of(i);
      double w = std::pow(dt, alpha_prime) + std::pow(dt, rho - eps);
      out.integral_sup =
          std::max(out.integral_sup, sg.d_gamma_norm(eps, sw.increment(i, j, sg)) / w);
    }
  return out;
}

GermValidation validate_germ(const Germ& germ, const SpectralSemigroup& sg, const Grid& grid,
                             int s_node, int t_node, int max_level) {
  int span = t_node - s_node;
  GermValidation v;
  std::vector<double> lv, size_log, defect_log;
  for (int n = 1; n <= max_level; ++n) {
    int parts = 1 << n;
    if (parts * 2 > span || span % (parts * 2) != 0) break;
    int stride = span / parts;
    double sup_size = 0.0, sup_defect = 0.0;
    for (int p = 0; p < parts; ++p) {
      int u = s_node + p * stride, w = s_node + (p + 1) * stride;
      int m = u + stride / 2;
      sup_size = std::max(sup_size, nrm2(germ.eval(u, w)));
      Vec d = germ.eval(u, w);
      axpy(-1.0, germ.eval(m, w), d);
      Vec lower = sg.apply(grid.dt() * (w - m), germ.eval(u, m));
      axpy(-1.0, lower, d);
      sup_defect = std::max(sup_defect, nrm2(d));
    }
    if (sup_size <= 0.0 || sup_defect <= 0.0) break;
    lv.push_back(static_cast<double>(n));
    size_log.push_back(sup_size);
    defect_log.push_back(sup_defect);
  }
  if (lv.size() >= 3) {
    // (v-u) halves per level, so slope in level units is -exponent.
    v.alpha_slope = -fit_log2_slope(lv, size_log);
    v.rho_slope = -fit_log2_slope(lv, defect_log);
    v.alpha_consistent = std::abs(v.alpha_slope - germ.alpha_decl) <= 0.3;
    v.rho_consistent = std::abs(v.rho_slope - germ.rho_decl) <= 0.3;
  }
  return v;
}

std::vector<Vec> integrate_germ_path(const Germ& germ, const SpectralSemigroup& sg,
                                     const Grid& grid, int i0, int i1) {
  if (i0 < 0 || i1 > grid.cells || i0 > i1)
    throw std::invalid_argument("integrate_germ_path: bad node range");
  double h = grid.dt();
  std::vector<Vec> out(static_cast<std::size_t>(i1 - i0) + 1, Vec(sg.dim_w(), 0.0));
  Vec acc(sg.dim_w(), 0.0);
  for (int i = i0; i < i1; ++i) {
    sg.apply_inplace(h, acc);
    Vec xi = germ.eval(i, i + 1);
    axpy(1.0, xi, acc);
    out[i - i0 + 1] = acc;
  }
  return out;
}

double fit_log2_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_log2_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    double ly = std::log2(std::max(y[i], 1e-300));
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace roughflow
