#ifndef ROUGHFLOW_SCENARIO_HPP
#define ROUGHFLOW_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roughflow/coefficients.hpp"
#include "roughflow/rough_path.hpp"
#include "roughflow/solver.hpp"

namespace roughflow {

/// Scenario configuration: a flat key = value file (see README for the schema).
struct Scenario {
  double hurst = 0.45;
  double alpha = -1.0;        // -1: derive as hurst - 0.05
  double alpha_prime = -1.0;  // -1: derive as hurst - 0.02
  double beta = -1.0;         // -1: derive as (1 - alpha)/2 + 0.02
  std::vector<double> q_eigenvalues = {1.0, 0.5};
  std::string semigroup_spec = "dirichlet_laplacian(4, 1.0)";
  int dim_w = 4;
  std::string g_spec = "nemytskii(0.5)";
  std::string f_spec = "zero";
  std::vector<double> xi;
  double t_final = 1.0;
  int level = 8;
  std::uint64_t seed = 42;
  int seeds = 5;
  double tol = 1e-11;
  int max_iter = 60;
  int e_samples = 32;
  std::vector<int> converge_levels = {5, 6, 7, 8};
  std::vector<double> cocycle_fractions = {0.25, 0.5, 0.75};

  double resolved_alpha() const { return alpha > 0 ? alpha : hurst - 0.05; }
  double resolved_alpha_prime() const { return alpha_prime > 0 ? alpha_prime : hurst - 0.02; }
  double resolved_beta() const {
    return beta > 0 ? beta : (1.0 - resolved_alpha()) / 2.0 + 0.02;
  }

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  SpectralSemigroup build_semigroup() const;
  CoefficientG build_g(const SpectralSemigroup& sg) const;
  CoefficientF build_f() const;
  Vec build_xi(const SpectralSemigroup& sg) const;
  QCovariance build_q() const;
  /// Sampled Q-fBm driver lifted at the scenario level (optionally overridden).
  GridRoughPath build_driver(int level_override = -1, std::int64_t seed_override = -1) const;
  SolverOptions build_solver_options() const;
};

Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text);

}  // namespace roughflow

#endif
