#pragma once

// Config-driven commands behind the cm-lax executable. Each returns a
// process exit code and writes its outputs under the run directory.

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cmlax::cli
{

enum ExitCode : int
{
  kOk = 0,
  kConfigError = 2,
  kConstraintViolation = 3,
  kNumericalError = 4
};

/// Residual above which initial quiver data is rejected as off-shell.
inline constexpr double kInitialConstraintTolerance = 1.0e-7;

struct RunOptions
{
  std::optional<std::string> out;     // overrides output.directory
  std::optional<std::string> format;  // overrides output.format
  std::string subdirectory;           // appended to the output directory (sweeps)
};

int cmd_simulate(const std::string &config_path, const RunOptions &options, std::ostream &out,
                 std::ostream &err);

/// direction is "particle" or "quiver"; writes converted.json, a full config
/// whose initial data is in the requested form.
int cmd_convert(const std::string &config_path, const std::string &direction,
                const RunOptions &options, std::ostream &out, std::ostream &err);

/// Values of the configured Hamiltonians and the matrix of |{H_a, H_b}| at the
/// initial state.
int cmd_invariants(const std::string &config_path, const RunOptions &options, std::ostream &out,
                   std::ostream &err);

using Command =
  std::function<int(const std::string &, const RunOptions &, std::ostream &, std::ostream &)>;

/// Worker count for sweeps: CM_LAX_THREADS if set to a positive integer,
/// otherwise the hardware concurrency; never more than `jobs`.
std::size_t thread_cap(std::size_t jobs);

/// Runs `command` on each config. With more than one config every run writes to
/// its own subdirectory named after the config file. Output of each run is
/// buffered and printed in input order. Returns the largest exit code.
int run_sweep(const Command &command, const std::vector<std::string> &configs,
              const RunOptions &options, bool parallel, std::ostream &out, std::ostream &err);

}  // namespace cmlax::cli
