#ifndef MFE_COMMANDS_HPP
#define MFE_COMMANDS_HPP

#include <filesystem>

#include "mfe/run_config.hpp"

namespace mfe {

// CLI exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitNoEndpoint = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitConfigError = 4;

/// Single mountain-pass run. Writes solution.field, result.json and
/// trajectory.csv (subject to the configured formats) into the output
/// directory. Nothing is written when the config fails validation.
int cmd_solve(const RunConfig& cfg);

/// Parameter sweep over the configured (alpha1, alpha2) grid; one CSV row
/// per point in alpha1-major order. Points run concurrently; per-point seeds
/// derive from the base seed plus the row-major point index, so the output
/// bytes do not depend on scheduling.
int cmd_sweep(const RunConfig& cfg);

/// Re-evaluates a stored field: functional report, residual, exponential
/// masses, Moser-Trudinger deficits, concentration. Writes diagnose.json.
int cmd_diagnose(const std::filesystem::path& field_file, const RunConfig& cfg);

/// Prints the first nonzero eigenvalue and the gate product mu1 * V; also
/// the rho-weighted eigenvalue when a non-unit weight is configured.
int cmd_eigen(const RunConfig& cfg);

}  // namespace mfe

#endif  // MFE_COMMANDS_HPP
