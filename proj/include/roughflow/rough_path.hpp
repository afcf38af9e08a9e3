#ifndef ROUGHFLOW_ROUGH_PATH_HPP
#define ROUGHFLOW_ROUGH_PATH_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "roughflow/grid.hpp"
#include "roughflow/linalg.hpp"

namespace roughflow {

/// V-valued path sampled at grid nodes, stored node-major.
struct VPath {
  Grid grid;
  int dim_v = 1;
  std::vector<double> values;  // nodes * dim_v

  VPath() = default;
  VPath(const Grid& g, int dv) : grid(g), dim_v(dv), values(static_cast<std::size_t>(g.nodes()) * dv, 0.0) {}

  double& at(int node, int comp) { return values[static_cast<std::size_t>(node) * dim_v + comp]; }
  double at(int node, int comp) const { return values[static_cast<std::size_t>(node) * dim_v + comp]; }

  Vec value(int node) const {
    Vec r(dim_v);
    for (int j = 0; j < dim_v; ++j) r[j] = at(node, j);
    return r;
  }
  Vec increment(int s_node, int t_node) const {
    Vec r(dim_v);
    for (int j = 0; j < dim_v; ++j) r[j] = at(t_node, j) - at(s_node, j);
    return r;
  }
};

/// Trace-class covariance of the driving noise: finitely many retained modes.
struct QCovariance {
  std::vector<double> eigenvalues;

  explicit QCovariance(std::vector<double> eig);
  int dim_v() const { return static_cast<int>(eigenvalues.size()); }
  double trace() const;
};

/// Component n is sqrt(lambda_n) times an independent fBm sample.
VPath assemble_qfbm(const QCovariance& q, double hurst, const Grid& grid, std::uint64_t seed);

/// alpha-Hoelder rough path on a grid: the path plus one second-order increment
/// tensor per adjacent cell; arbitrary-pair tensors come from Chen composition
/// of the adjacent ones (prefix form, O(1) per query after O(n) setup).
struct GridRoughPath {
  VPath path;
  double alpha = 0.4;
  std::vector<double> area_adjacent;  // cells * dim_v * dim_v, row-major
  std::vector<double> area_prefix;    // nodes * dim_v * dim_v; prefix[i] = area over [t_0, t_i]

  int dim_v() const { return path.dim_v; }
  const Grid& grid() const { return path.grid; }

  Matrix adjacent_area(int cell) const;
  void rebuild_prefix();
};

/// Second-order process of the piecewise-linear interpolation: per adjacent
/// cell exactly half the outer square of the increment.
GridRoughPath lift_piecewise_linear(const VPath& path, double alpha);

/// Chen composition over [t_s, t_t] (node indices, s <= t).
Matrix chen_reconstruct(const GridRoughPath& rp, int s_node, int t_node);

/// Defect of Chen's relation for the node triple s <= u <= t (should vanish).
double chen_defect(const GridRoughPath& rp, int s_node, int u_node, int t_node);

/// Inhomogeneous alpha-Hoelder rough path distance on the common (coarser) node set.
double rough_metric(const GridRoughPath& a, const GridRoughPath& b, double alpha);

/// Wiener shift: path moved to start at 0 at time tau, areas re-sliced.
GridRoughPath shift_rough_path(const GridRoughPath& rp, double tau);

/// Restriction of a path to a coarser dyadic subgrid (every `stride`-th node).
VPath restrict_path(const VPath& p, int stride);

/// sup over node pairs of |increment| / (t-s)^exponent.
double holder_seminorm(const VPath& p, double exponent);

/// sup over 0 < s < t of s^beta |increment| / (t-s)^exponent.
double holder_seminorm_weighted(const VPath& p, double exponent, double beta);

/// Same seminorms for a W-valued node sequence on a grid.
double holder_seminorm(const std::vector<Vec>& y, const Grid& g, double exponent);
double holder_seminorm_weighted(const std::vector<Vec>& y, const Grid& g, double exponent,
                                double beta);
double sup_norm(const std::vector<Vec>& y);

/// sup over node pairs of |area(s,t)|_F / (t-s)^exponent (exponent ~ 2 alpha).
double area_seminorm(const GridRoughPath& rp, double exponent);

/// Seminorm of a two-parameter quantity given by its size on node pairs:
/// sup |z_{ts}| / (t-s)^exponent, optionally weighted by s^beta (beta >= 0).
double two_parameter_seminorm(const std::function<double(int, int)>& size, const Grid& g,
                              int cells, double exponent, double beta_weight = -1.0);

}  // namespace roughflow

#endif
