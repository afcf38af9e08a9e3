#include "roughflow/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace roughflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
  return out;
}

// name(arg1, arg2, ...) -> {name, args}
std::pair<std::string, std::vector<double>> parse_callish(const std::string& s) {
  std::size_t open = s.find('(');
  if (open == std::string::npos) return {trim(s), {}};
  std::size_t close = s.rfind(')');
  if (close == std::string::npos || close < open)
    throw std::invalid_argument("config: malformed value '" + s + "'");
  return {trim(s.substr(0, open)), parse_double_list(s.substr(open + 1, close - open - 1))};
}

}  // namespace

void Scenario::validate() const {
  double a = resolved_alpha(), b = resolved_beta();
  if (!(hurst > 1.0 / 3.0 && hurst <= 0.5))
    throw std::invalid_argument("config: hurst must lie in (1/3, 1/2]");
  if (!(a > 1.0 / 3.0)) throw std::invalid_argument("config: alpha must exceed 1/3");
  if (!(a < hurst)) throw std::invalid_argument("config: alpha < hurst is required");
  if (!(resolved_alpha_prime() > a && resolved_alpha_prime() < hurst + 1e-12))
    throw std::invalid_argument("config: need alpha < alpha_prime < hurst");
  if (!(a + 2.0 * b > 1.0)) throw std::invalid_argument("config: alpha + 2 beta > 1 is required");
  if (!(b > 0.0 && b < a)) throw std::invalid_argument("config: beta must lie in (0, alpha)");
  if (dim_w < 1) throw std::invalid_argument("config: dim_w >= 1 is required");
  if (q_eigenvalues.empty()) throw std::invalid_argument("config: q_eigenvalues must be nonempty");
  for (double l : q_eigenvalues)
    if (!(l >= 0.0)) throw std::invalid_argument("config: q_eigenvalues must be >= 0");
  if (!(t_final > 0.0)) throw std::invalid_argument("config: T > 0 is required");
  if (level < 1 || level > 14) throw std::invalid_argument("config: level must lie in 1..14");
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol > 0 is required");
  const char* cap = std::getenv("ROUGHFLOW_MAX_LEVEL");
  if (cap != nullptr && level > std::atoi(cap))
    throw std::invalid_argument("config: level exceeds ROUGHFLOW_MAX_LEVEL");
}

SpectralSemigroup Scenario::build_semigroup() const {
  auto [name, args] = parse_callish(semigroup_spec);
  if (name == "identity") {
    int d = args.empty() ? dim_w : static_cast<int>(args[0]);
    return SpectralSemigroup::identity(d);
  }
  if (name == "dirichlet_laplacian") {
    int d = args.empty() ? dim_w : static_cast<int>(args[0]);
    double scale = args.size() > 1 ? args[1] : 1.0;
    return SpectralSemigroup::dirichlet_laplacian(d, scale);
  }
  if (name == "explicit") {
    if (args.empty()) throw std::invalid_argument("config: explicit semigroup needs eigenvalues");
    return SpectralSemigroup(args);
  }
  throw std::invalid_argument("config: unknown semigroup preset '" + name + "'");
}

CoefficientG Scenario::build_g(const SpectralSemigroup& sg) const {
  auto [name, args] = parse_callish(g_spec);
  int dv = static_cast<int>(q_eigenvalues.size());
  if (name == "zero") return CoefficientG::zero(sg.dim_w(), dv);
  if (name == "constant") {
    double c = args.empty() ? 1.0 : args[0];
    Matrix K(sg.dim_w(), dv);
    for (int k = 0; k < sg.dim_w(); ++k)
      for (int j = 0; j < dv; ++j) K(k, j) = c / (1.0 + k + j);
    return CoefficientG::constant(std::move(K));
  }
  if (name == "nemytskii") {
    double scale = args.empty() ? 0.5 : args[0];
    double shift = args.size() > 1 ? args[1] : 0.0;
    return CoefficientG::nemytskii_default(sg, resolved_beta(), dv, scale, shift);
  }
  throw std::invalid_argument("config: unknown g spec '" + name + "'");
}

CoefficientF Scenario::build_f() const {
  auto [name, args] = parse_callish(f_spec);
  if (name == "zero") return CoefficientF::zero(dim_w);
  if (name == "tanh") return CoefficientF::tanh_drift(dim_w, args.empty() ? 1.0 : args[0]);
  throw std::invalid_argument("config: unknown f spec '" + name + "'");
}

Vec Scenario::build_xi(const SpectralSemigroup& sg) const {
  if (!xi.empty()) {
    if (static_cast<int>(xi.size()) != sg.dim_w())
      throw std::invalid_argument("config: xi dimension does not match dim_w");
    return xi;
  }
  Vec v(sg.dim_w());
  for (int k = 0; k < sg.dim_w(); ++k) v[k] = std::pow(0.5, k);
  return v;
}

QCovariance Scenario::build_q() const { return QCovariance(q_eigenvalues); }

GridRoughPath Scenario::build_driver(int level_override, std::int64_t seed_override) const {
  int lv = level_override > 0 ? level_override : level;
  std::uint64_t sd = seed_override >= 0 ? static_cast<std::uint64_t>(seed_override) : seed;
  Grid grid = Grid::dyadic(0.0, t_final, lv);
  VPath path = assemble_qfbm(build_q(), hurst, grid, sd);
  return lift_piecewise_linear(path, resolved_alpha());
}

SolverOptions Scenario::build_solver_options() const {
  SolverOptions o;
  o.alpha = resolved_alpha();
  o.beta = resolved_beta();
  o.tol = tol;
  o.max_iter = max_iter;
  o.e_samples = e_samples;
  return o;
}

Scenario parse_scenario_text(const std::string& text) {
  Scenario sc;
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected 'key = value', got '" + line + "'");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const auto& [key, value] : kv) {
    if (key == "hurst") sc.hurst = std::stod(value);
    else if (key == "alpha") sc.alpha = (value == "auto") ? -1.0 : std::stod(value);
    else if (key == "alpha_prime") sc.alpha_prime = (value == "auto") ? -1.0 : std::stod(value);
    else if (key == "beta") sc.beta = (value == "auto") ? -1.0 : std::stod(value);
    else if (key == "q_eigenvalues") sc.q_eigenvalues = parse_double_list(value);
    else if (key == "semigroup") sc.semigroup_spec = value;
    else if (key == "dim_w") sc.dim_w = std::stoi(value);
    else if (key == "g") sc.g_spec = value;
    else if (key == "f") sc.f_spec = value;
    else if (key == "xi") sc.xi = parse_double_list(value);
    else if (key == "T") sc.t_final = std::stod(value);
    else if (key == "level") sc.level = std::stoi(value);
    else if (key == "seed") sc.seed = std::stoull(value);
    else if (key == "seeds") sc.seeds = std::stoi(value);
    else if (key == "tol") sc.tol = std::stod(value);
    else if (key == "max_iter") sc.max_iter = std::stoi(value);
    else if (key == "e_samples") sc.e_samples = std::stoi(value);
    else if (key == "converge_levels") sc.converge_levels = parse_int_list(value);
    else if (key == "cocycle_fractions") sc.cocycle_fractions = parse_double_list(value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

}  // namespace roughflow
