#ifndef ROUGHFLOW_SEWING_HPP
#define ROUGHFLOW_SEWING_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughflow/grid.hpp"
#include "roughflow/linalg.hpp"
#include "roughflow/semigroup.hpp"

namespace roughflow {

/// Two-parameter approximation term on grid nodes, with its declared size and
/// defect exponents. eval(u, u) must vanish; rho_decl > 1 is required for the
/// compensated sums to converge.
struct Germ {
  std::function<Vec(int u_node, int v_node)> eval;
  double alpha_decl = 0.4;
  double rho_decl = 1.1;
};

/// Operator-argument variant: evaluated per supplied E, never materialized.
struct OperatorGerm {
  std::function<Vec(int u_node, int v_node, const Tensor3& E)> eval;
  double alpha_decl = 0.4;
  double rho_decl = 1.1;
};

inline Germ bind_operator_germ(const OperatorGerm& g, const Tensor3& E) {
  return Germ{[&g, &E](int u, int v) { return g.eval(u, v, E); }, g.alpha_decl, g.rho_decl};
}

class SewingNonConvergence : public std::runtime_error {
 public:
  SewingNonConvergence(const std::string& what, double defect)
      : std::runtime_error(what), last_defect(defect) {}
  double last_defect;
};

/// Compensated dyadic Riemann sums of a germ over [s, t]. prefix[i] holds the
/// twisted increment from s to the i-th partition node, so any partition pair
/// is recoverable and hat-additivity holds by construction.
struct SewnIncrements {
  Grid grid;
  int s_node = 0, t_node = 0;
  int level_used = 1;
  int stride = 1;  // grid cells per partition cell
  std::vector<Vec> prefix;
  std::vector<double> level_diffs;  // |N^n - N^{n-1}|, n = 1..level (N^0 = germ itself)
  double defect_estimate = 0.0;     // last successive-level difference
  double germ_gap = 0.0;            // |value - Xi_{ts}|

  const Vec& value() const { return prefix.back(); }
  double time_of(int i_part) const { return grid.time(s_node + i_part * stride); }
  int parts() const { return static_cast<int>(prefix.size()) - 1; }

  /// Twisted increment between partition nodes i <= j.
  Vec increment(int i_part, int j_part, const SpectralSemigroup& sg) const;
};

/// Level-n compensated sum with per-level difference diagnostics.
SewnIncrements sew(const Germ& germ, const SpectralSemigroup& sg, const Grid& grid, int s_node,
                   int t_node, int level);

/// Smallest level whose successive-level difference falls below tol (capped).
SewnIncrements sew_adaptive(const Germ& germ, const SpectralSemigroup& sg, const Grid& grid,
                            int s_node, int t_node, double tol, int max_level = 12);

/// Residual of the shift property: the sewn increments of `germ` over [s, t]
/// against those of `shifted_germ` (built from the shifted data) over
/// [s - tau, t - tau]. Sup over partition pairs at the given level.
double check_shift_property(const Germ& germ, const Grid& grid, const Germ& shifted_germ,
                            const Grid& shifted_grid, const SpectralSemigroup& sg, int tau_node,
                            int s_node, int t_node, int level);

struct DepsTracking {
  SewnIncrements sewn;
  double premise_sup = 0.0;   // sup |S(v-u) Xi_{vu}|_{D_eps} / (v-u)^{alpha'}
  double integral_sup = 0.0;  // sup |(inc)_{ji}|_{D_eps} / ((tj-ti)^{alpha'} + (tj-ti)^{rho-eps})
};

DepsTracking sew_with_deps_tracking(const Germ& germ, const SpectralSemigroup& sg,
                                    const Grid& grid, int s_node, int t_node, int level,
                                    double eps, double alpha_prime);

struct GermValidation {
  double alpha_slope = 0.0;
  double rho_slope = 0.0;
  bool alpha_consistent = true;
  bool rho_consistent = true;
};

/// Log-log regression of germ size and twisted-defect scale against declared
/// exponents; flags slope deviations above 0.3.
GermValidation validate_germ(const Germ& germ, const SpectralSemigroup& sg, const Grid& grid,
                             int s_node, int t_node, int max_level = 7);

/// Grid-depth twisted integral along a node range: out[k] is the compensated
/// sum from i0 to i0+k using one germ evaluation per grid cell.
std::vector<Vec> integrate_germ_path(const Germ& germ, const SpectralSemigroup& sg,
                                     const Grid& grid, int i0, int i1);

/// Least-squares slope of log2(y) against x (x already in levels/log2 units).
double fit_log2_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace roughflow

#endif
