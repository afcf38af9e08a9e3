#include "roughflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughflow {

namespace {

std::vector<int> strided_nodes(int cells, int max_nodes) {
  std::vector<int> nodes;
  int stride = std::max(1, (cells + max_nodes - 2) / (max_nodes - 1));
  for (int i = 0; i < cells; i += stride) nodes.push_back(i);
  nodes.push_back(cells);
  return nodes;
}

double weighted_pair_delta(const std::vector<Vec>& a, const std::vector<Vec>& b, const Grid& g,
                           double beta) {
  // sup |a-b| plus the discrete beta,beta seminorm of the difference on a
  // strided node set.
  int cells = static_cast<int>(a.size()) - 1;
  double sup = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, nrm2(sub(a[i], b[i])));
  auto nodes = strided_nodes(cells, 65);
  double semi = 0.0;
  for (std::size_t p = 1; p + 1 < nodes.size(); ++p) {
    double si = g.time(nodes[p]) - g.t0;
    for (std::size_t q = p + 1; q < nodes.size(); ++q) {
      double dt = g.time(nodes[q]) - g.time(nodes[p]);
      Vec d = sub(sub(a[nodes[q]], b[nodes[q]]), sub(a[nodes[p]], b[nodes[p]]));
      semi = std::max(semi, std::pow(si, beta) * nrm2(d) / std::pow(dt, beta));
    }
  }
  return sup + semi;
}

}  // namespace

Tensor3 random_unit_tensor(int dim_w, int dim_v, std::uint64_t seed) {
  GaussianStream gs(split_seed(seed, 0xE));
  Tensor3 e(dim_w, dim_w, dim_v);
  for (auto& v : e.a) v = gs.next();
  double n = operator_norm(e);
  if (n > 0.0) e *= 1.0 / n;
  return e;
}

// ---------------------------------------------------------------------------
// ControlledPair

ControlledPair ControlledPair::make_leaf(std::shared_ptr<Leaf> core) {
  ControlledPair p;
  p.y_ = core->y;
  p.leaf_ = std::move(core);
  return p;
}

ControlledPair ControlledPair::concatenate(ControlledPair left, ControlledPair right,
                                           std::shared_ptr<const ConvolutionContext> ctx_full) {
  double scale = std::max(1.0, sup_norm(left.y_));
  if (nrm2(sub(left.y_.back(), right.y_.front())) > 1e-8 * scale)
    throw std::invalid_argument("concatenate: mismatched junction value");
  if (right.cells() == 0) return left;
  ControlledPair p;
  p.junction_ = left.cells();
  p.y_ = left.y_;
  p.y_.insert(p.y_.end(), right.y_.begin() + 1, right.y_.end());
  p.left_ = std::make_shared<ControlledPair>(std::move(left));
  p.right_ = std::make_shared<ControlledPair>(std::move(right));
  p.ctx_full_ = std::move(ctx_full);
  return p;
}

Vec ControlledPair::Leaf::xi_z_cell(int cell, const Tensor3& E) const {
  Vec g = ctx->c_cell(E, this->g->eval(yb[cell]), cell);
  axpy(1.0, ctx->a_cell(E, y[cell], cell), g);
  return g;
}

Vec ControlledPair::Leaf::z(int s_node, int t_node, const Tensor3& E) const {
  const SpectralSemigroup& sg = ctx->semigroup();
  double h = ctx->grid().dt();
  Vec acc(ctx->dim_w(), 0.0);
  for (int c = s_node; c < t_node; ++c) {
    sg.apply_inplace(h, acc);
    axpy(1.0, xi_z_cell(c, E), acc);
  }
  Matrix Ey = tensor_apply_w(E, y[s_node]);
  Vec corr = (t_node - s_node == 1) ? ctx->omega_s_cell(Ey, s_node)
                                    : ctx->omega_s(Ey, s_node, t_node);
  axpy(-1.0, corr, acc);
  return acc;
}

Vec ControlledPair::z(int s_node, int t_node, const Tensor3& E) const {
  if (s_node > t_node) throw std::invalid_argument("ControlledPair::z: need s <= t");
  if (s_node == t_node) return Vec(y_.front().size(), 0.0);
  if (leaf_) return leaf_->z(s_node, t_node, E);
  if (t_node <= junction_) return left_->z(s_node, t_node, E);
  if (s_node >= junction_) return right_->z(s_node - junction_, t_node - junction_, E);
  // Straddling block: omega^S_{tJ}(E (dy)_{Js}) + z2_{t-J,0}(E) + S(t-J) z1_{Js}(E).
  const ConvolutionContext& ctx = *ctx_full_;
  Vec dy = sub(y_[junction_], y_[s_node]);
  Vec out = ctx.omega_s(tensor_apply_w(E, dy), junction_, t_node);
  axpy(1.0, right_->z(0, t_node - junction_, E), out);
  double dt = ctx.grid().dt() * (t_node - junction_);
  Vec zl = ctx.semigroup().apply(dt, left_->z(s_node, junction_, E));
  axpy(1.0, zl, out);
  return out;
}

// ---------------------------------------------------------------------------
// Germs

Germ germ_y(const ConvolutionContext& ctx, const CoefficientG& g, const ControlledPair& pair,
            double alpha, double beta) {
  Germ out;
  out.alpha_decl = alpha;
  out.rho_decl = alpha + 2.0 * beta;
  out.eval = [&ctx, &g, &pair](int u, int v) {
    Matrix K = g.eval(pair.value(u));
    Vec r = (v - u == 1) ? ctx.omega_s_cell(K, u) : ctx.omega_s(K, u, v);
    Tensor3 dg = g.derivative(pair.value(u));
    axpy(1.0, pair.z(u, v, dg), r);
    return r;
  };
  return out;
}

OperatorGerm germ_z(const ConvolutionContext& ctx, const CoefficientG& g,
                    const std::vector<Vec>& y, const std::vector<Vec>& ytilde, double alpha,
                    double beta) {
  OperatorGerm out;
  out.alpha_decl = alpha;
  out.rho_decl = alpha + 2.0 * beta;
  out.eval = [&ctx, &g, &y, &ytilde](int u, int v, const Tensor3& E) {
    Vec r = ctx.b_process(E, g.eval(y[u]), u, v, -1);
    Vec a = (v - u == 1) ? ctx.a_cell(E, ytilde[u], u) : ctx.a_process(E, ytilde[u], u, v);
    axpy(1.0, a, r);
    return r;
  };
  return out;
}

// ---------------------------------------------------------------------------
// Solution map and Picard iteration

ControlledPair apply_solution_map(std::shared_ptr<const ConvolutionContext> ctx,
                                  const CoefficientG& g, const CoefficientF& f, const Vec& xi,
                                  const ControlledPair& pair, int cells) {
  if (pair.cells() < cells)
    throw std::invalid_argument("apply_solution_map: pair shorter than requested window");
  const SpectralSemigroup& sg = ctx->semigroup();
  double h = ctx->grid().dt();

  auto core = std::make_shared<ControlledPair::Leaf>();
  core->ctx = ctx;
  core->g = &g;
  core->cells = cells;
  core->yb.assign(pair.path().begin(), pair.path().begin() + cells + 1);
  core->y.resize(cells + 1);
  core->y[0] = xi;

  for (int c = 0; c < cells; ++c) {
    Vec next = sg.apply(h, core->y[c]);
    const Vec& yu = pair.value(c);
    if (!g.is_zero()) {
      Matrix K = g.eval(yu);
      axpy(1.0, ctx->omega_s_cell(K, c), next);
      Tensor3 dg = g.derivative(yu);
      axpy(1.0, pair.z(c, c + 1, dg), next);
    }
    if (!f.is_zero()) {
      // composite midpoint for int S(t_{c+1}-r) F(y_r) dr on the cell
      Vec ymid = add(pair.value(c), pair.value(c + 1));
      scale_inplace(ymid, 0.5);
      Vec fv = f.eval(ymid);
      sg.apply_inplace(0.5 * h, fv);
      axpy(h, fv, next);
    }
    core->y[c + 1] = std::move(next);
  }
  return ControlledPair::make_leaf(std::move(core));
}

PicardResult picard_fixed_point(std::shared_ptr<const ConvolutionContext> ctx,
                                const CoefficientG& g, const CoefficientF& f, const Vec& xi,
                                int cells, const SolverOptions& opts, bool throw_on_failure) {
  const SpectralSemigroup& sg = ctx->semigroup();
  const Grid& grid = ctx->grid();
  if (cells < 1 || cells > grid.cells)
    throw std::invalid_argument("picard_fixed_point: bad cell count");

  // pair_0 = (S(.) xi, induced z)
  auto core0 = std::make_shared<ControlledPair::Leaf>();
  core0->ctx = ctx;
  core0->g = &g;
  core0->cells = cells;
  core0->y.resize(cells + 1);
  core0->y[0] = xi;
  for (int c = 0; c < cells; ++c) core0->y[c + 1] = sg.apply(grid.dt(), core0->y[c]);
  core0->yb = core0->y;
  ControlledPair pair = ControlledPair::make_leaf(std::move(core0));

  // z probes: coarse pairs and a few fixed tensors
  auto pnodes = strided_nodes(cells, opts.probe_nodes);
  std::vector<Tensor3> probes;
  for (int e = 0; e < opts.probe_es; ++e)
    probes.push_back(random_unit_tensor(sg.dim_w(), ctx->dim_v(), split_seed(opts.e_seed, e)));
  auto eval_probes = [&](const ControlledPair& p) {
    std::vector<Vec> vals;
    for (std::size_t i = 0; i + 1 < pnodes.size(); ++i)
      for (std::size_t j = i + 1; j < pnodes.size(); ++j)
        for (const auto& E : probes) vals.push_back(p.z(pnodes[i], pnodes[j], E));
    return vals;
  };
  std::vector<Vec> zprev = eval_probes(pair);

  PicardResult res{pair, 0, false, 0.0};
  double best = 1e300;
  int worse_in_row = 0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    ControlledPair next = apply_solution_map(ctx, g, f, xi, res.pair, cells);
    double dy = weighted_pair_delta(next.path(), res.pair.path(), grid, opts.beta);
    std::vector<Vec> znew = eval_probes(next);
    double dz = 0.0;
    for (std::size_t i = 0; i < znew.size(); ++i)
      dz = std::max(dz, nrm2(sub(znew[i], zprev[i])));
    res.pair = std::move(next);
    res.iterations = it;
    res.final_delta = dy + dz;
    zprev = std::move(znew);
    if (res.final_delta < opts.tol) {
      res.converged = true;
      return res;
    }
    if (res.final_delta < best) {
      best = res.final_delta;
      worse_in_row = 0;
    } else if (++worse_in_row >= 4 && it >= 8) {
      break;  // no contraction
    }
    if (!std::isfinite(res.final_delta)) break;
  }
  if (throw_on_failure)
    throw std::runtime_error(
        "picard_fixed_point: no contraction after " + std::to_string(res.iterations) +
        " iterations (delta " + std::to_string(res.final_delta) + "); reduce the horizon");
  return res;
}

// ---------------------------------------------------------------------------
// Remainders

RemainderReport remainders(const ControlledPair& pair, const ConvolutionContext& ctx,
                           const CoefficientG& g, const SolverOptions& opts) {
  RemainderReport rep;
  const SpectralSemigroup& sg = ctx.semigroup();
  const Grid& grid = ctx.grid();
  int cells = pair.cells();
  double two_beta = 2.0 * opts.beta;

  for (int i = 0; i <= cells; ++i)
    rep.y_inf_d2beta = std::max(rep.y_inf_d2beta, sg.d_gamma_norm(two_beta, pair.value(i)));

  // R^Y over strided pairs plus all adjacent cells.
  auto nodes = strided_nodes(cells, opts.max_pair_nodes);
  auto ry_at = [&](int i, int j) {
    Vec r = sub(pair.value(j), sg.apply(grid.dt() * (j - i), pair.value(i)));
    Matrix K = g.eval(pair.value(i));
    Vec w = (j - i == 1) ? ctx.omega_s_cell(K, i) : ctx.omega_s(K, i, j);
    axpy(-1.0, w, r);
    return nrm2(r) / std::pow(grid.dt() * (j - i), two_beta);
  };
  for (std::size_t p = 0; p + 1 < nodes.size(); ++p)
    for (std::size_t q = p + 1; q < nodes.size(); ++q)
      rep.ry_norm_2beta = std::max(rep.ry_norm_2beta, ry_at(nodes[p], nodes[q]));
  for (int c = 0; c < cells; ++c) rep.ry_norm_2beta = std::max(rep.ry_norm_2beta, ry_at(c, c + 1));

  // R^Z over a coarse pair set; |E| <= 1 ball sampled plus canonical DG directions.
  auto znodes = strided_nodes(cells, 9);
  std::vector<Tensor3> es;
  for (int e = 0; e < opts.e_samples; ++e)
    es.push_back(random_unit_tensor(sg.dim_w(), ctx.dim_v(), split_seed(opts.e_seed, 100 + e)));
  double a2b = opts.alpha + two_beta;
  for (std::size_t p = 0; p + 1 < znodes.size(); ++p) {
    int i = znodes[p];
    std::vector<Tensor3> local = es;
    if (!g.is_zero()) {
      Tensor3 dg = g.derivative(pair.value(i));
      double n = operator_norm(dg);
      if (n > 1e-14) {
        dg *= 1.0 / n;
        local.push_back(dg);
      }
    }
    Matrix K = g.eval(pair.value(i));
    for (std::size_t q = p + 1; q < znodes.size(); ++q) {
      int j = znodes[q];
      double w = std::pow(grid.dt() * (j - i), a2b);
      for (const auto& E : local) {
        Vec r = pair.z(i, j, E);
        axpy(-1.0, ctx.b_process(E, K, i, j, -1), r);
        rep.rz_norm_alpha2beta = std::max(rep.rz_norm_alpha2beta, nrm2(r) / w);
      }
    }
  }
  rep.phi_t = rep.y_inf_d2beta + rep.ry_norm_2beta + rep.rz_norm_alpha2beta;
  return rep;
}

double local_horizon(double r, const AnalyticEstimates& est, const GridRoughPath& rp,
                     const CoefficientG& g, const SolverOptions& opts) {
  if (g.is_zero()) return opts.t_max_segment;
  double wnorm = holder_seminorm(rp.path, opts.alpha);
  double anorm = area_seminorm(rp, 2.0 * opts.alpha);
  // The contraction content of the solution map is carried by DG (the germ's
  // y-sensitivity): first order through omega^S, second order through b/c.
  // The recorded estimate sups scale the heuristic but are not multiplied in
  // full (their worst cases never co-occur); halve-and-retry covers the gap.
  double scale = 0.25 * std::max(0.25, std::min(4.0, 0.5 * (est.omega_s_sup + est.b_sup)));
  double chat = (1.0 + std::max(1.0, r)) * scale *
                std::max(1e-6, g.bound_dg() * (wnorm + g.bound_g() * (wnorm * wnorm + anorm)));
  double t = std::pow(1.0 / (2.0 * chat), 1.0 / opts.alpha);
  t = std::min(t, opts.t_max_segment);
  if (t < rp.grid().dt())
    throw std::runtime_error("local_horizon: contraction horizon underflows the grid spacing");
  return t;
}

double x_constraint_residual(const ControlledPair& pair, const ConvolutionContext& ctx,
                             int samples, std::uint64_t seed) {
  const SpectralSemigroup& sg = ctx.semigroup();
  int cells = pair.cells();
  if (cells < 2) return 0.0;
  auto nodes = strided_nodes(cells, 9);
  double sup = 0.0;
  for (int e = 0; e < samples; ++e) {
    Tensor3 E = random_unit_tensor(sg.dim_w(), ctx.dim_v(), split_seed(seed, e));
    for (std::size_t a = 0; a + 2 < nodes.size(); ++a)
      for (std::size_t b = a + 1; b + 1 < nodes.size(); ++b)
        for (std::size_t c = b + 1; c < nodes.size(); ++c) {
          int s = nodes[a], tau = nodes[b], t = nodes[c];
          Vec lhs = pair.z(s, t, E);
          axpy(-1.0, pair.z(tau, t, E), lhs);
          Vec lower = sg.apply(ctx.grid().dt() * (t - tau), pair.z(s, tau, E));
          axpy(-1.0, lower, lhs);
          Vec dy = sub(pair.value(tau), pair.value(s));
          axpy(-1.0, ctx.omega_s(tensor_apply_w(E, dy), tau, t), lhs);
          sup = std::max(sup, nrm2(lhs));
        }
  }
  return sup;
}

// ---------------------------------------------------------------------------
// Global solve

GlobalSolveResult solve_global(const GridRoughPath& rp, const SpectralSemigroup& sg,
                               const CoefficientG& g, const CoefficientF& f, const Vec& xi,
                               double t_final, const SolverOptions& opts,
                               const std::vector<int>& forced_boundaries) {
  if (!(t_final > 0.0)) throw std::invalid_argument("solve_global: T must be positive");
  const Grid& grid = rp.grid();
  int total = grid.index_of(grid.t0 + t_final);
  if (total < 1) throw std::invalid_argument("solve_global: horizon below one grid cell");

  auto sg_alias = std::shared_ptr<const SpectralSemigroup>(std::shared_ptr<void>(), &sg);
  auto rp_alias = std::shared_ptr<const GridRoughPath>(std::shared_ptr<void>(), &rp);
  auto ctx0 = std::make_shared<const ConvolutionContext>(rp_alias, sg_alias);

  SolveReport report;
  report.alpha = opts.alpha;
  report.beta = opts.beta;

  // Analytic-estimate constants for the horizon heuristic and the report.
  Tensor3 e_probe = random_unit_tensor(sg.dim_w(), rp.dim_v(), split_seed(opts.e_seed, 0x51));
  Matrix k_probe = g.is_zero() ? Matrix(sg.dim_w(), rp.dim_v()) : g.eval(xi);
  if (g.is_zero())
    for (int k = 0; k < sg.dim_w(); ++k)
      for (int j = 0; j < rp.dim_v(); ++j) k_probe(k, j) = 1.0 / (1.0 + k + j);
  report.estimates = ctx0->measure_analytic_estimates(e_probe, k_probe, opts.alpha);

  double r = std::max(1.0, nrm2(xi));

  ControlledPair global;
  bool have_global = false;
  int done = 0;
  std::size_t forced_idx = 0;
  while (done < total) {
    int horizon_cells;
    if (!forced_boundaries.empty()) {
      if (forced_idx >= forced_boundaries.size() || forced_boundaries[forced_idx] <= done)
        throw std::invalid_argument("solve_global: forced boundaries must increase to T");
      horizon_cells = std::min(total, forced_boundaries[forced_idx]) - done;
      ++forced_idx;
    } else {
      double t_loc;
      try {
        t_loc = local_horizon(r, report.estimates, rp, g, opts);
      } catch (const std::runtime_error&) {
        t_loc = grid.dt();  // heuristic underflow: fall back to single cells
      }
      horizon_cells = std::max(1, std::min(total - done, static_cast<int>(t_loc / grid.dt())));
    }

    double tau = grid.dt() * done;
    std::shared_ptr<const GridRoughPath> window_rp;
    std::shared_ptr<const ConvolutionContext> window_ctx;
    if (done == 0) {
      window_rp = rp_alias;
      window_ctx = ctx0;
    } else {
      window_rp = std::make_shared<const GridRoughPath>(shift_rough_path(rp, tau));
      window_ctx = std::make_shared<const ConvolutionContext>(window_rp, sg_alias);
    }
    Vec xi_k = have_global ? global.value(done) : xi;

    PicardResult res;
    int halvings = 0;
    while (true) {
      res = picard_fixed_point(window_ctx, g, f, xi_k, horizon_cells, opts, false);
      if (res.converged) break;
      if (!forced_boundaries.empty())
        throw std::runtime_error("solve_global: Picard failed on a forced segment at node " +
                                 std::to_string(done));
      if (horizon_cells == 1 || ++halvings > opts.max_halvings)
        throw std::runtime_error("solve_global: Picard failed at node " + std::to_string(done) +
                                 " after horizon halving (delta " +
                                 std::to_string(res.final_delta) + ")");
      horizon_cells = std::max(1, horizon_cells / 2);
    }

    SegmentDiagnostics seg;
    seg.start_node = done;
    seg.cells = horizon_cells;
    seg.iterations = res.iterations;
    seg.final_delta = res.final_delta;
    seg.horizon = grid.dt() * horizon_cells;
    seg.phi_t = remainders(res.pair, *window_ctx, g, opts).phi_t;
    report.segments.push_back(seg);
    report.total_iterations += res.iterations;

    if (!have_global) {
      global = std::move(res.pair);
      have_global = true;
    } else {
      global = ControlledPair::concatenate(std::move(global), std::move(res.pair), ctx0);
    }
    done += horizon_cells;
  }

  // Diagnostics on the assembled solution.
  report.y_sup = sup_norm(global.path());
  report.y_betabeta =
      report.y_sup + holder_seminorm_weighted(global.path(), grid, opts.beta, opts.beta);
  {
    auto nodes = strided_nodes(total, 9);
    Tensor3 E = random_unit_tensor(sg.dim_w(), rp.dim_v(), split_seed(opts.e_seed, 0x52));
    for (std::size_t p = 0; p + 1 < nodes.size(); ++p)
      for (std::size_t q = p + 1; q < nodes.size(); ++q) {
        double dt = grid.dt() * (nodes[q] - nodes[p]);
        double zn = nrm2(global.z(nodes[p], nodes[q], E));
        report.z_alpha_probe = std::max(report.z_alpha_probe, zn / std::pow(dt, opts.alpha));
        if (nodes[p] > 0) {
          double si = grid.dt() * nodes[p];
          report.z_alphabeta_probe =
              std::max(report.z_alphabeta_probe, std::pow(si, opts.beta) * zn /
                                                     std::pow(dt, opts.alpha + opts.beta));
        }
      }
  }
  report.remainders = remainders(global, *ctx0, g, opts);

  ControlledPair reapplied = apply_solution_map(ctx0, g, f, xi, global, total);
  double fp = 0.0;
  for (int i = 0; i <= total; ++i)
    fp = std::max(fp, nrm2(sub(reapplied.value(i), global.value(i))));
  report.fixed_point_residual = fp;
  report.x_constraint_residual = x_constraint_residual(global, *ctx0, 8, opts.e_seed);

  {
    auto nodes = strided_nodes(grid.cells, 17);
    for (std::size_t a = 0; a + 2 < nodes.size(); ++a)
      for (std::size_t b = a + 1; b + 1 < nodes.size(); ++b)
        for (std::size_t c = b + 1; c < nodes.size(); ++c)
          report.chen_defect_sup = std::max(
              report.chen_defect_sup, chen_defect(rp, nodes[a], nodes[b], nodes[c]));
    int s = nodes[0], tau = nodes[nodes.size() / 2], t = nodes.back();
    report.algebraic = ctx0->algebraic_defects(e_probe, k_probe, xi, s, tau, t);
  }
  return {std::move(global), std::move(report)};
}

}  // namespace roughflow
