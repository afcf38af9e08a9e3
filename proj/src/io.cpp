#include "roughflow/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace roughflow {

namespace {

void put(std::ostream& os, double v) { os << std::setprecision(17) << v; }

}  // namespace

std::string serialize_rough_path(const GridRoughPath& rp) {
  std::ostringstream os;
  os << "# roughpath v1\n";
  os << "level " << rp.grid().level() << "\n";
  os << "cells " << rp.grid().cells << "\n";
  os << "t0 ";
  put(os, rp.grid().t0);
  os << "\nt1 ";
  put(os, rp.grid().t1);
  os << "\ndim_v " << rp.dim_v() << "\nalpha ";
  put(os, rp.alpha);
  os << "\nnodes\n";
  for (int i = 0; i <= rp.grid().cells; ++i) {
    put(os, rp.grid().time(i));
    for (int j = 0; j < rp.dim_v(); ++j) {
      os << ' ';
      put(os, rp.path.at(i, j));
    }
    os << '\n';
  }
  os << "areas\n";
  int d = rp.dim_v();
  for (int c = 0; c < rp.grid().cells; ++c) {
    os << c;
    for (int e = 0; e < d * d; ++e) {
      os << ' ';
      put(os, rp.area_adjacent[static_cast<std::size_t>(c) * d * d + e]);
    }
    os << '\n';
  }
  return os.str();
}

GridRoughPath parse_rough_path(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  int level = -1, cells = -1, dim_v = 0;
  double t0 = 0, t1 = 1, alpha = 0.4;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# roughpath", 0) != 0)
    throw std::invalid_argument("rough path parse: missing header");
  while (is >> tok) {
    if (tok == "level") is >> level;
    else if (tok == "cells") is >> cells;
    else if (tok == "t0") is >> t0;
    else if (tok == "t1") is >> t1;
    else if (tok == "dim_v") is >> dim_v;
    else if (tok == "alpha") is >> alpha;
    else if (tok == "nodes") break;
    else throw std::invalid_argument("rough path parse: unexpected token '" + tok + "'");
  }
  if (cells < 1 || dim_v < 1) throw std::invalid_argument("rough path parse: bad dimensions");
  Grid grid(t0, t1, cells);
  VPath path(grid, dim_v);
  for (int i = 0; i <= cells; ++i) {
    double t;
    is >> t;
    for (int j = 0; j < dim_v; ++j) is >> path.at(i, j);
  }
  is >> tok;
  if (tok != "areas") throw std::invalid_argument("rough path parse: missing areas section");
  GridRoughPath rp;
  rp.path = std::move(path);
  rp.alpha = alpha;
  rp.area_adjacent.assign(static_cast<std::size_t>(cells) * dim_v * dim_v, 0.0);
  for (int c = 0; c < cells; ++c) {
    int idx;
    is >> idx;
    for (int e = 0; e < dim_v * dim_v; ++e)
      is >> rp.area_adjacent[static_cast<std::size_t>(c) * dim_v * dim_v + e];
  }
  if (!is) throw std::invalid_argument("rough path parse: truncated file");
  rp.rebuild_prefix();
  return rp;
}

void write_rough_path_file(const GridRoughPath& rp, const std::string& path) {
  write_text_file(path, serialize_rough_path(rp));
}

GridRoughPath read_rough_path_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_rough_path(buf.str());
}

std::string trajectory_csv(const ControlledPair& pair, const Grid& grid) {
  std::ostringstream os;
  int dw = static_cast<int>(pair.value(0).size());
  os << "t";
  for (int k = 1; k <= dw; ++k) os << ",y_" << k;
  os << "\n";
  for (int i = 0; i <= pair.cells(); ++i) {
    put(os, grid.time(i));
    for (int k = 0; k < dw; ++k) {
      os << ',';
      put(os, pair.value(i)[k]);
    }
    os << '\n';
  }
  return os.str();
}

std::string report_json(const SolveReport& r) {
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["norms"] = {{"y_sup", r.y_sup},
                {"y_betabeta", r.y_betabeta},
                {"z_alpha_probe", r.z_alpha_probe},
                {"z_alphabeta_probe", r.z_alphabeta_probe}};
  j["remainders"] = {{"ry_norm_2beta", r.remainders.ry_norm_2beta},
                     {"rz_norm_alpha2beta", r.remainders.rz_norm_alpha2beta},
                     {"y_inf_d2beta", r.remainders.y_inf_d2beta},
                     {"phi_t", r.remainders.phi_t}};
  j["residuals"] = {{"fixed_point", r.fixed_point_residual},
                    {"x_constraint", r.x_constraint_residual},
                    {"chen_defect_sup", r.chen_defect_sup},
                    {"algebraic_omega_s", r.algebraic.omega_s},
                    {"algebraic_a", r.algebraic.a},
                    {"algebraic_c", r.algebraic.c},
                    {"algebraic_b", r.algebraic.b}};
  j["analytic_estimates"] = {{"omega_s_sup", r.estimates.omega_s_sup},
                             {"a_sup", r.estimates.a_sup},
                             {"c_sup", r.estimates.c_sup},
                             {"b_sup", r.estimates.b_sup}};
  j["total_iterations"] = r.total_iterations;
  nlohmann::ordered_json segs = nlohmann::ordered_json::array();
  for (const auto& s : r.segments) {
    segs.push_back({{"start_node", s.start_node},
                    {"cells", s.cells},
                    {"iterations", s.iterations},
                    {"final_delta", s.final_delta},
                    {"horizon", s.horizon},
                    {"phi_t", s.phi_t}});
  }
  j["segments"] = segs;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << content;
}

}  // namespace roughflow
