#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "shockamr/cases.hpp"

namespace shockamr {

/// Settings of one `run` invocation. INI sections: [run] for the keys named
/// like the CLI flags (case, scheme, variant, q, indicator, max_cells,
/// max_steps, uniform, out, seed, snapshots), [solver] (tol1, tol2, dU_tol,
/// max_iters, linear = direct|iterative) and [stabilization] (sigma, eps, zeta).
struct RunConfig {
  std::string case_name;
  std::string scheme = "high";     // low | high
  std::string variant = "smooth";  // sharp | smooth
  double q = 2.0;
  std::string indicator = "graph";  // kelly | graph
  std::optional<std::size_t> max_cells;
  int max_steps = 30;
  std::optional<std::pair<int, int>> uniform;
  std::string out = "out";
  std::uint64_t seed = 0;
  std::string snapshots = "final";  // none | final | all
  std::optional<double> tol1, tol2, dU_tol, sigma, eps, zeta;
  std::optional<int> max_iters;
  std::optional<std::string> linear;
};

/// Parses "A..B".
std::pair<int, int> parse_range(const std::string& s);
/// Reads an INI file on top of cfg. Throws ConfigError.
void load_config(const std::string& path, RunConfig& cfg);
/// Case with the configuration applied. Throws ConfigError.
CaseDefinition configure_case(const RunConfig& cfg);

/// Runs the adaptive loop or the uniform sweep, writing <out>/<case>.csv and
/// VTK snapshots. Returns 0 when every solve converged, 1 otherwise.
int run(const RunConfig& cfg, std::ostream& log);

/// Command-line entry point: exit 0 on success, 1 on solver failure, 2 on
/// configuration errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shockamr
