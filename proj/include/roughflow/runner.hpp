#ifndef ROUGHFLOW_RUNNER_HPP
#define ROUGHFLOW_RUNNER_HPP

#include <string>

#include "roughflow/scenario.hpp"

namespace roughflow {

/// Executes one CLI command against a scenario, writing data files into
/// out_dir. Commands: solve, verify, converge, cocycle. Returns the process
/// exit status (0 on success; verify returns 1 when any invariant row fails).
int run_command(const Scenario& sc, const std::string& command, const std::string& out_dir);

}  // namespace roughflow

#endif
