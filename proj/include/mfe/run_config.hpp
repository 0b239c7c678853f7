#ifndef MFE_RUN_CONFIG_HPP
#define MFE_RUN_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfe/functional.hpp"
#include "mfe/grid.hpp"
#include "mfe/mountain_pass.hpp"

namespace mfe {

struct GridConfig {
  double length = 0.0;
  int n = 0;
};

/// Inclusive linear range lo..hi sampled at `steps` points (steps >= 1).
struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;

  std::vector<double> values() const;
};

struct SweepConfig {
  SweepRange alpha1;
  SweepRange alpha2;
};

/// One run description, parsed from a JSON config file plus CLI overrides.
/// Exactly one of `params` (single solve) or `sweep` must be present for the
/// commands that compute; referenced weight files are loaded up front so a
/// bad config produces no outputs.
struct RunConfig {
  std::optional<GridConfig> grid;
  std::string weight = "const:1";
  std::optional<InteractionParams> params;
  std::optional<SweepConfig> sweep;
  SolverConfig solver;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> formats = {"field", "json", "csv"};
  int jobs = 0;  // 0: hardware concurrency

  bool wants(const std::string& format) const;
};

/// Parses the JSON text of a config file. Unknown keys are rejected.
RunConfig parse_run_config(const std::string& json_text);

RunConfig load_run_config(const std::filesystem::path& path);

/// Builds the weight for `grid` from RunConfig::weight: preset strings are
/// generated, anything else is read as a field file whose grid must match.
WeightField resolve_weight(const TorusGrid& grid, const std::string& spec);

}  // namespace mfe

#endif  // MFE_RUN_CONFIG_HPP
