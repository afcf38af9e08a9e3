// Scenario runner: parses a key = value config, executes one command, and
// writes data files plus plot scripts into the output directory.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "roughflow/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"roughflow: parabolic rough evolution equation solver"};

  std::string config_path;
  std::string out_dir = "out";
  std::string command = "solve";
  long long seed_override = -1;
  int level_override = -1;

  app.add_option("--config", config_path, "scenario config file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--command", command, "solve | verify | converge | cocycle");
  app.add_option("--seed", seed_override, "override the scenario seed");
  app.add_option("--level", level_override, "override the dyadic grid level");

  CLI11_PARSE(app, argc, argv);

  try {
    roughflow::Scenario sc = roughflow::parse_scenario_file(config_path);
    if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);
    if (level_override > 0) sc.level = level_override;
    return roughflow::run_command(sc, command, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
