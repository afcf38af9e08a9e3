#ifndef ROUGHFLOW_GRID_HPP
#define ROUGHFLOW_GRID_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace roughflow {

/// Uniform time grid on [t0, t1] with `cells` intervals (cells + 1 nodes).
/// Dyadic grids (cells = 2^level) are the common case; Wiener-shifted windows
/// and solve segments reuse the same spacing with arbitrary cell counts.
struct Grid {
  double t0 = 0.0;
  double t1 = 1.0;
  int cells = 1;

  Grid() = default;
  Grid(double a, double b, int n) : t0(a), t1(b), cells(n) {
    if (!(b > a)) throw std::invalid_argument("Grid: t1 must exceed t0");
    if (n < 1) throw std::invalid_argument("Grid: need at least one cell");
  }

  static Grid dyadic(double a, double b, int level) {
    if (level < 0 || level > 30) throw std::invalid_argument("Grid: bad dyadic level");
    return Grid(a, b, 1 << level);
  }

  int nodes() const { return cells + 1; }
  double dt() const { return (t1 - t0) / cells; }
  double time(int i) const { return t0 + (t1 - t0) * (static_cast<double>(i) / cells); }

  /// log2(cells), or -1 when the cell count is not a power of two.
  int level() const {
    int n = cells, lv = 0;
    while (n > 1) {
      if (n & 1) return -1;
      n >>= 1;
      ++lv;
    }
    return lv;
  }

  /// Nearest node index for time t; throws if t is not a grid node.
  int index_of(double t) const {
    double x = (t - t0) / dt();
    int i = static_cast<int>(std::lround(x));
    if (i < 0 || i > cells || std::abs(x - i) > 1e-8 * std::max(1.0, std::abs(x)) + 1e-9)
      throw std::invalid_argument("Grid: time " + std::to_string(t) + " is not a grid node");
    return i;
  }

  bool is_node(double t) const {
    double x = (t - t0) / dt();
    int i = static_cast<int>(std::lround(x));
    return i >= 0 && i <= cells && std::abs(x - i) <= 1e-8 * std::max(1.0, std::abs(x)) + 1e-9;
  }

  /// Alignment: equal spacing up to rounding and shared node lattice, or one
  /// grid's nodes form a subset of the other's (dyadic refinement).
  bool aligned_with(const Grid& o) const {
    double h1 = dt(), h2 = o.dt();
    double hf = std::min(h1, h2), hc = std::max(h1, h2);
    double ratio = hc / hf;
    double r = std::lround(ratio);
    if (std::abs(ratio - r) > 1e-9) return false;
    // Origins must sit on the fine lattice.
    double off = (o.t0 - t0) / hf;
    return std::abs(off - std::lround(off)) < 1e-8;
  }
};

}  // namespace roughflow

#endif
