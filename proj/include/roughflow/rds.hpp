#ifndef ROUGHFLOW_RDS_HPP
#define ROUGHFLOW_RDS_HPP

#include <cstdint>
#include <vector>

#include "roughflow/solver.hpp"

namespace roughflow {

struct CocycleProbe {
  double t = 0.0;
  double tau = 0.0;
  Vec xi;
  std::uint64_t seed = 0;
  double residual = 0.0;
};

/// Evaluates the cocycle residual over a (t, tau) lattice for one driver.
std::vector<CocycleProbe> cocycle_lattice(const GridRoughPath& rp, const SpectralSemigroup& sg,
                                          const CoefficientG& g, const CoefficientF& f,
                                          const Vec& xi, const std::vector<double>& ts,
                                          const std::vector<double>& taus, std::uint64_t seed,
                                          const SolverOptions& opts);

/// |phi(t+tau, w, xi) - phi(t, theta_tau w, phi(tau, w, xi))| with both legs
/// solved independently; tau and t must be grid nodes.
double cocycle_residual(const GridRoughPath& rp, const SpectralSemigroup& sg,
                        const CoefficientG& g, const CoefficientF& f, const Vec& xi, double t,
                        double tau, const SolverOptions& opts);

/// Shift compatibility: sup over [0, t] of the theta_tau-solved path against
/// the time-translated restriction of the [0, t+tau] solution.
double shift_compatibility_residual(const GridRoughPath& rp, const SpectralSemigroup& sg,
                                    const CoefficientG& g, const CoefficientF& f, const Vec& xi,
                                    double t, double tau, const SolverOptions& opts);

struct ConvergenceRow {
  int level = 0;
  double driver_distance = 0.0;  // d_alpha(lift_n, lift_max)
  double solution_distance = 0.0;  // sup |y_n - y_max| on common nodes
  double chen_defect = 0.0;
};

/// Lift the same realization at several dyadic levels (subsampling the finest)
/// and track rough-path and solution distances to the finest level.
std::vector<ConvergenceRow> driver_convergence_study(const VPath& finest_path, double alpha,
                                                     const SpectralSemigroup& sg,
                                                     const CoefficientG& g,
                                                     const CoefficientF& f, const Vec& xi,
                                                     double t_final,
                                                     const std::vector<int>& levels,
                                                     const SolverOptions& opts);

}  // namespace roughflow

#endif
