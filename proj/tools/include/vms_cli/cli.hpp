#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vms/integrate.hpp"
#include "vms/model.hpp"

namespace vms::cli {

/// Exit codes shared by all commands.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Thrown for malformed arguments; mapped to kUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::filesystem::path model;
  Formulation formulation = Formulation::Decoupled;
  double dt = 1e-3;
  double duration = 1.0;
  std::filesystem::path out;
  std::uint64_t seed = 1;
  bool gravity = true;
  std::optional<std::filesystem::path> init;
  std::optional<std::filesystem::path> inputs;
};

/// Comma-separated doubles. Throws UsageError on malformed entries.
std::vector<double> parse_list(const std::string& text);

/**
 * Initial state. Without an init file: identity base, q = 0 and velocities
 * drawn from N(0, 0.25) with the given seed. The init file is JSON with
 * optional keys h, q, v, qdot; h is {rotation, translation} for a floating
 * base and [theta, x, y] for a planar base.
 */
State initial_state(const VmsModel& model, const std::optional<std::filesystem::path>& init, std::uint64_t seed);

/// JSON {"segments": [{"start", "base_wrench", "joint_torque", "ee_wrench"}]}.
InputSchedule load_schedule(const VmsModel& model, const std::filesystem::path& path);

std::string csv_header(const VmsModel& model);
void write_csv(const VmsModel& model, const std::vector<TrajectoryRecord>& records, std::ostream& out);

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& model, int samples, std::uint64_t seed, std::ostream& out,
                 std::ostream& err);
int cmd_inspect(const std::filesystem::path& model, const std::string& q, const std::string& h, std::ostream& out,
                std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vms::cli
