#ifndef ROUGHFLOW_SOLVER_HPP
#define ROUGHFLOW_SOLVER_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "roughflow/coefficients.hpp"
#include "roughflow/convolution.hpp"
#include "roughflow/sewing.hpp"

namespace roughflow {

struct SolverOptions {
  double alpha = 0.4;
  double beta = 0.32;          // needs alpha + 2 beta > 1
  double tol = 1e-11;
  int max_iter = 60;
  int e_samples = 32;          // |E| <= 1 ball sample count for remainder norms
  std::uint64_t e_seed = 2024;
  int probe_nodes = 9;         // coarse node count for z probes
  int probe_es = 4;            // random probe tensors for the Picard metric
  double t_max_segment = 1.0;  // hard cap on local horizons
  int max_halvings = 12;
  int max_pair_nodes = 257;    // cap on node count for norm pair enumeration
  int duhamel = 1;             // quadrature points per cell for the drift term
};

/// Solution pair (y, z): y at the window's grid nodes, z as a deferred
/// two-parameter operator-argument evaluator backed by the sewn building
/// blocks (leaf) or the junction formula (concatenation).
class ControlledPair {
 public:
  struct Leaf;

  static ControlledPair make_leaf(std::shared_ptr<Leaf> core);
  static ControlledPair concatenate(ControlledPair left, ControlledPair right,
                                    std::shared_ptr<const ConvolutionContext> ctx_full);

  int cells() const { return static_cast<int>(y_.size()) - 1; }
  const std::vector<Vec>& path() const { return y_; }
  const Vec& value(int node) const { return y_[node]; }

  /// z_{ts}(E) between window node indices.
  Vec z(int s_node, int t_node, const Tensor3& E) const;

  bool is_leaf() const { return leaf_ != nullptr; }
  const Leaf& leaf() const { return *leaf_; }

  struct Leaf {
    std::shared_ptr<const ConvolutionContext> ctx;
    const CoefficientG* g = nullptr;
    int cells = 0;
    std::vector<Vec> y;   // the pair's path
    std::vector<Vec> yb;  // germ-base path (previous iterate; = y at the fixed point)

    Vec xi_z_cell(int cell, const Tensor3& E) const;  // per-cell z germ
    Vec z(int s_node, int t_node, const Tensor3& E) const;
  };

 private:
  std::vector<Vec> y_;
  std::shared_ptr<Leaf> leaf_;
  std::shared_ptr<ControlledPair> left_, right_;
  int junction_ = -1;
  std::shared_ptr<const ConvolutionContext> ctx_full_;
};

struct RemainderReport {
  double ry_norm_2beta = 0.0;
  double rz_norm_alpha2beta = 0.0;
  double y_inf_d2beta = 0.0;
  double phi_t = 0.0;
};

struct SegmentDiagnostics {
  int start_node = 0;
  int cells = 0;
  int iterations = 0;
  double final_delta = 0.0;
  double horizon = 0.0;
  double phi_t = 0.0;
};

struct SolveReport {
  double alpha = 0.0, beta = 0.0;
  double y_sup = 0.0;
  double y_betabeta = 0.0;
  double z_alpha_probe = 0.0;
  double z_alphabeta_probe = 0.0;
  RemainderReport remainders;
  double fixed_point_residual = 0.0;
  double x_constraint_residual = 0.0;
  double chen_defect_sup = 0.0;
  ConvolutionDefects algebraic;  // defect sups over a sampled lattice
  AnalyticEstimates estimates;
  std::vector<SegmentDiagnostics> segments;
  int total_iterations = 0;
};

/// The y-germ of a pair: omega^S(G(y_u)) + z(DG(y_u)); declared exponents
/// (alpha, alpha + 2 beta).
Germ germ_y(const ConvolutionContext& ctx, const CoefficientG& g, const ControlledPair& pair,
            double alpha, double beta);

/// The operator-argument z-germ built from (y, ytilde).
OperatorGerm germ_z(const ConvolutionContext& ctx, const CoefficientG& g,
                    const std::vector<Vec>& y, const std::vector<Vec>& ytilde, double alpha,
                    double beta);

/// One application of the solution map on [0, cells] of the context's grid.
ControlledPair apply_solution_map(std::shared_ptr<const ConvolutionContext> ctx,
                                  const CoefficientG& g, const CoefficientF& f, const Vec& xi,
                                  const ControlledPair& pair, int cells);

struct PicardResult {
  ControlledPair pair;
  int iterations = 0;
  bool converged = false;
  double final_delta = 0.0;
};

/// Iterate the solution map from (S(.)xi, induced z) until the pair stops
/// moving; throws on non-contraction after max_iter.
PicardResult picard_fixed_point(std::shared_ptr<const ConvolutionContext> ctx,
                                const CoefficientG& g, const CoefficientF& f, const Vec& xi,
                                int cells, const SolverOptions& opts,
                                bool throw_on_failure = true);

RemainderReport remainders(const ControlledPair& pair, const ConvolutionContext& ctx,
                           const CoefficientG& g, const SolverOptions& opts);

/// Heuristic contraction horizon from the recorded empirical constants.
double local_horizon(double r, const AnalyticEstimates& est, const GridRoughPath& rp,
                     const CoefficientG& g, const SolverOptions& opts);

struct GlobalSolveResult {
  ControlledPair pair;
  SolveReport report;
};

/// Segment-wise global solve: local horizon, Picard fixed point, Wiener-shifted
/// driver, concatenation. forced_boundaries (node indices) override the horizon
/// heuristic when non-empty.
GlobalSolveResult solve_global(const GridRoughPath& rp, const SpectralSemigroup& sg,
                               const CoefficientG& g, const CoefficientF& f, const Vec& xi,
                               double t_final, const SolverOptions& opts,
                               const std::vector<int>& forced_boundaries = {});

/// Residual of the defining z-constraint (twisted Chen for the pair) over a
/// sampled (s, tau, t, E) set.
double x_constraint_residual(const ControlledPair& pair, const ConvolutionContext& ctx,
                             int samples = 32, std::uint64_t seed = 7);

/// Deterministic random tensor with unit operator norm.
Tensor3 random_unit_tensor(int dim_w, int dim_v, std::uint64_t seed);

}  // namespace roughflow

#endif
