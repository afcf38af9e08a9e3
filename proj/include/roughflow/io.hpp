#ifndef ROUGHFLOW_IO_HPP
#define ROUGHFLOW_IO_HPP

#include <string>

#include "roughflow/rough_path.hpp"
#include "roughflow/solver.hpp"

namespace roughflow {

/// Columnar text format for rough paths: a header (level, t0, t1, dim_v,
/// alpha), one node row per line (t, components), then one adjacent-area row
/// per cell (row-major tensor entries). Round-trips exactly (17 significant
/// digits).
std::string serialize_rough_path(const GridRoughPath& rp);
GridRoughPath parse_rough_path(const std::string& text);

void write_rough_path_file(const GridRoughPath& rp, const std::string& path);
GridRoughPath read_rough_path_file(const std::string& path);

/// Trajectory CSV: t, y_1..y_dimW.
std::string trajectory_csv(const ControlledPair& pair, const Grid& grid);

/// Solve report as JSON text.
std::string report_json(const SolveReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace roughflow

#endif
