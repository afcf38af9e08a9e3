#include "roughflow/rough_path.hpp"

#include <cmath>
#include <stdexcept>

#include "roughflow/fbm.hpp"

namespace roughflow {

QCovariance::QCovariance(std::vector<double> eig) : eigenvalues(std::move(eig)) {
  if (eigenvalues.empty()) throw std::invalid_argument("QCovariance: need at least one mode");
  for (double l : eigenvalues)
    if (!(l >= 0.0)) throw std::invalid_argument("QCovariance: eigenvalues must be >= 0");
}

double QCovariance::trace() const {
  double s = 0.0;
  for (double l : eigenvalues) s += l;
  return s;
}

VPath assemble_qfbm(const QCovariance& q, double hurst, const Grid& grid, std::uint64_t seed) {
  VPath p(grid, q.dim_v());
  for (int n = 0; n < q.dim_v(); ++n) {
    if (q.eigenvalues[n] == 0.0) continue;
    double s = std::sqrt(q.eigenvalues[n]);
    std::vector<double> comp = sample_fbm_1d(hurst, grid, split_seed(seed, n + 1));
    for (int i = 0; i < grid.nodes(); ++i) p.at(i, n) = s * comp[i];
  }
  return p;
}

Matrix GridRoughPath::adjacent_area(int cell) const {
  int d = dim_v();
  Matrix m(d, d);
  const double* src = &area_adjacent[static_cast<std::size_t>(cell) * d * d];
  for (int i = 0; i < d * d; ++i) m.a[i] = src[i];
  return m;
}

void GridRoughPath::rebuild_prefix() {
  int d = dim_v();
  int n = grid().nodes();
  area_prefix.assign(static_cast<std::size_t>(n) * d * d, 0.0);
  for (int c = 0; c < grid().cells; ++c) {
    const double* prev = &area_prefix[static_cast<std::size_t>(c) * d * d];
    double* next = &area_prefix[static_cast<std::size_t>(c + 1) * d * d];
    const double* adj = &area_adjacent[static_cast<std::size_t>(c) * d * d];
    for (int i = 0; i < d; ++i) {
      double base_i = path.at(c, i) - path.at(0, i);
      for (int j = 0; j < d; ++j) {
        double dj = path.at(c + 1, j) - path.at(c, j);
        next[i * d + j] = prev[i * d + j] + adj[i * d + j] + base_i * dj;
      }
    }
  }
}

GridRoughPath lift_piecewise_linear(const VPath& path, double alpha) {
  GridRoughPath rp;
  rp.path = path;
  rp.alpha = alpha;
  int d = path.dim_v;
  rp.area_adjacent.assign(static_cast<std::size_t>(path.grid.cells) * d * d, 0.0);
  for (int c = 0; c < path.grid.cells; ++c) {
    double* dst = &rp.area_adjacent[static_cast<std::size_t>(c) * d * d];
    for (int i = 0; i < d; ++i) {
      double di = path.at(c + 1, i) - path.at(c, i);
      for (int j = 0; j < d; ++j) {
        double dj = path.at(c + 1, j) - path.at(c, j);
        dst[i * d + j] = 0.5 * di * dj;
      }
    }
  }
  rp.rebuild_prefix();
  return rp;
}

Matrix chen_reconstruct(const GridRoughPath& rp, int s_node, int t_node) {
  if (s_node > t_node) throw std::invalid_argument("chen_reconstruct: need s <= t");
  if (s_node < 0 || t_node > rp.grid().cells)
    throw std::invalid_argument("chen_reconstruct: node out of range");
  int d = rp.dim_v();
  Matrix m(d, d);
  const double* pt = &rp.area_prefix[static_cast<std::size_t>(t_node) * d * d];
  const double* ps = &rp.area_prefix[static_cast<std::size_t>(s_node) * d * d];
  for (int i = 0; i < d; ++i) {
    double base_i = rp.path.at(s_node, i) - rp.path.at(0, i);
    for (int j = 0; j < d; ++j) {
      double dj = rp.path.at(t_node, j) - rp.path.at(s_node, j);
      m(i, j) = pt[i * d + j] - ps[i * d + j] - base_i * dj;
    }
  }
  return m;
}

double chen_defect(const GridRoughPath& rp, int s_node, int u_node, int t_node) {
  int d = rp.dim_v();
  const double* pt = &rp.area_prefix[static_cast<std::size_t>(t_node) * d * d];
  const double* pu = &rp.area_prefix[static_cast<std::size_t>(u_node) * d * d];
  const double* ps = &rp.area_prefix[static_cast<std::size_t>(s_node) * d * d];
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    double w0i = rp.path.at(0, i);
    double si = rp.path.at(s_node, i), ui = rp.path.at(u_node, i);
    double base_s = si - w0i, base_u = ui - w0i;
    double dsu_i = ui - si;
    for (int j = 0; j < d; ++j) {
      double sj = rp.path.at(s_node, j), uj = rp.path.at(u_node, j), tj = rp.path.at(t_node, j);
      double a_ts = pt[i * d + j] - ps[i * d + j] - base_s * (tj - sj);
      double a_us = pu[i * d + j] - ps[i * d + j] - base_s * (uj - sj);
      double a_tu = pt[i * d + j] - pu[i * d + j] - base_u * (tj - uj);
      double r = a_ts - a_us - a_tu - dsu_i * (tj - uj);
      acc += r * r;
    }
  }
  return std::sqrt(acc);
}

namespace {

void check_same_span(const GridRoughPath& a, const GridRoughPath& b) {
  double tol = 1e-9 * std::max(1.0, std::abs(a.grid().t1));
  if (std::abs(a.grid().t0 - b.grid().t0) > tol || std::abs(a.grid().t1 - b.grid().t1) > tol ||
      !a.grid().aligned_with(b.grid()))
    throw std::invalid_argument("rough_metric: grids are not aligned");
  if (a.dim_v() != b.dim_v()) throw std::invalid_argument("rough_metric: dim_v mismatch");
}

}  // namespace

double rough_metric(const GridRoughPath& a, const GridRoughPath& b, double alpha) {
  check_same_span(a, b);
  int common = std::min(a.grid().cells, b.grid().cells);
  int sa = a.grid().cells / common, sb = b.grid().cells / common;
  int d = a.dim_v();
  const Grid cg(a.grid().t0, a.grid().t1, common);

  double sup_path = 0.0, sup_area = 0.0;
  for (int i = 0; i < common; ++i) {
    for (int j = i + 1; j <= common; ++j) {
      double dt = cg.time(j) - cg.time(i);
      double wp = std::pow(dt, alpha), wa = std::pow(dt, 2.0 * alpha);
      double dp = 0.0;
      for (int k = 0; k < d; ++k) {
        double da = a.path.at(j * sa, k) - a.path.at(i * sa, k);
        double db = b.path.at(j * sb, k) - b.path.at(i * sb, k);
        dp += (da - db) * (da - db);
      }
      sup_path = std::max(sup_path, std::sqrt(dp) / wp);

      double dar = 0.0;
      const double* pat = &a.area_prefix[static_cast<std::size_t>(j * sa) * d * d];
      const double* pas = &a.area_prefix[static_cast<std::size_t>(i * sa) * d * d];
      const double* pbt = &b.area_prefix[static_cast<std::size_t>(j * sb) * d * d];
      const double* pbs = &b.area_prefix[static_cast<std::size_t>(i * sb) * d * d];
      for (int ii = 0; ii < d; ++ii) {
        double base_a = a.path.at(i * sa, ii) - a.path.at(0, ii);
        double base_b = b.path.at(i * sb, ii) - b.path.at(0, ii);
        for (int jj = 0; jj < d; ++jj) {
          double da = pat[ii * d + jj] - pas[ii * d + jj] -
                      base_a * (a.path.at(j * sa, jj) - a.path.at(i * sa, jj));
          double db = pbt[ii * d + jj] - pbs[ii * d + jj] -
                      base_b * (b.path.at(j * sb, jj) - b.path.at(i * sb, jj));
          dar += (da - db) * (da - db);
        }
      }
      sup_area = std::max(sup_area, std::sqrt(dar) / wa);
    }
  }
  return sup_path + sup_area;
}

GridRoughPath shift_rough_path(const GridRoughPath& rp, double tau) {
  int k = rp.grid().index_of(rp.grid().t0 + tau);
  if (k >= rp.grid().cells)
    throw std::invalid_argument("shift_rough_path: shift exhausts the grid");
  int d = rp.dim_v();
  Grid g(0.0, (rp.grid().t1 - rp.grid().t0) - tau + 0.0, rp.grid().cells - k);
  GridRoughPath out;
  out.alpha = rp.alpha;
  out.path = VPath(g, d);
  for (int i = 0; i <= g.cells; ++i)
    for (int j = 0; j < d; ++j) out.path.at(i, j) = rp.path.at(i + k, j) - rp.path.at(k, j);
  out.area_adjacent.assign(rp.area_adjacent.begin() + static_cast<std::ptrdiff_t>(k) * d * d,
                           rp.area_adjacent.end());
  out.rebuild_prefix();
  return out;
}

VPath restrict_path(const VPath& p, int stride) {
  if (stride < 1 || p.grid.cells % stride != 0)
    throw std::invalid_argument("restrict_path: stride must divide the cell count");
  Grid g(p.grid.t0, p.grid.t1, p.grid.cells / stride);
  VPath out(g, p.dim_v);
  for (int i = 0; i <= g.cells; ++i)
    for (int j = 0; j < p.dim_v; ++j) out.at(i, j) = p.at(i * stride, j);
  return out;
}

double holder_seminorm(const VPath& p, double exponent) {
  if (!(exponent > 0.0) || exponent > 1.0)
    throw std::invalid_argument("holder_seminorm: exponent in (0,1]");
  if (p.grid.nodes() < 2) throw std::invalid_argument("holder_seminorm: empty grid");
  double sup = 0.0;
  for (int i = 0; i < p.grid.cells; ++i)
    for (int j = i + 1; j <= p.grid.cells; ++j) {
      double dt = p.grid.time(j) - p.grid.time(i);
      double s = 0.0;
      for (int k = 0; k < p.dim_v; ++k) {
        double d = p.at(j, k) - p.at(i, k);
        s += d * d;
      }
      sup = std::max(sup, std::sqrt(s) / std::pow(dt, exponent));
    }
  return sup;
}

double holder_seminorm_weighted(const VPath& p, double exponent, double beta) {
  if (!(exponent > 0.0) || exponent > 1.0)
    throw std::invalid_argument("holder_seminorm_weighted: exponent in (0,1]");
  double sup = 0.0;
  for (int i = 1; i < p.grid.cells; ++i) {
    double si = p.grid.time(i) - p.grid.t0;
    for (int j = i + 1; j <= p.grid.cells; ++j) {
      double dt = p.grid.time(j) - p.grid.time(i);
      double s = 0.0;
      for (int k = 0; k < p.dim_v; ++k) {
        double d = p.at(j, k) - p.at(i, k);
        s += d * d;
      }
      sup = std::max(sup, std::pow(si, beta) * std::sqrt(s) / std::pow(dt, exponent));
    }
  }
  return sup;
}

double holder_seminorm(const std::vector<Vec>& y, const Grid& g, double exponent) {
  double sup = 0.0;
  int n = static_cast<int>(y.size()) - 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      double dt = g.time(j) - g.time(i);
      sup = std::max(sup, nrm2(sub(y[j], y[i])) / std::pow(dt, exponent));
    }
  return sup;
}

double holder_seminorm_weighted(const std::vector<Vec>& y, const Grid& g, double exponent,
                                double beta) {
  double sup = 0.0;
  int n = static_cast<int>(y.size()) - 1;
  for (int i = 1; i < n; ++i) {
    double si = g.time(i) - g.t0;
    for (int j = i + 1; j <= n; ++j) {
      double dt = g.time(j) - g.time(i);
      sup = std::max(sup, std::pow(si, beta) * nrm2(sub(y[j], y[i])) / std::pow(dt, exponent));
    }
  }
  return sup;
}

double sup_norm(const std::vector<Vec>& y) {
  double m = 0.0;
  for (const auto& v : y) m = std::max(m, nrm2(v));
  return m;
}

double area_seminorm(const GridRoughPath& rp, double exponent) {
  double sup = 0.0;
  int n = rp.grid().cells;
  int d = rp.dim_v();
  for (int i = 0; i < n; ++i) {
    const double* ps = &rp.area_prefix[static_cast<std::size_t>(i) * d * d];
    for (int j = i + 1; j <= n; ++j) {
      const double* pt = &rp.area_prefix[static_cast<std::size_t>(j) * d * d];
      double dt = rp.grid().time(j) - rp.grid().time(i);
      double s = 0.0;
      for (int ii = 0; ii < d; ++ii) {
        double base_i = rp.path.at(i, ii) - rp.path.at(0, ii);
        for (int jj = 0; jj < d; ++jj) {
          double v = pt[ii * d + jj] - ps[ii * d + jj] -
                     base_i * (rp.path.at(j, jj) - rp.path.at(i, jj));
          s += v * v;
        }
      }
      sup = std::max(sup, std::sqrt(s) / std::pow(dt, exponent));
    }
  }
  return sup;
}


double two_parameter_seminorm(const std::function<double(int, int)>& size, const Grid& g,
                              int cells, double exponent, double beta_weight) {
  double sup = 0.0;
  for (int i = 0; i < cells; ++i) {
    if (beta_weight >= 0.0 && i == 0) continue;
    double wi = beta_weight >= 0.0 ? std::pow(g.time(i) - g.t0, beta_weight) : 1.0;
    for (int j = i + 1; j <= cells; ++j) {
      double dt = g.time(j) - g.time(i);
      sup = std::max(sup, wi * size(i, j) / std::pow(dt, exponent));
    }
  }
  return sup;
}

}  // namespace roughflow
