#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vms/dynamics.hpp"
#include "vms/model.hpp"

namespace vms {

struct Sample {
  State state;
  Inputs inputs;
};

/**
 * Deterministic random states for a model: q uniform in [-1, 1], momenta
 * standard normal scaled by the mass-matrix diagonal, base configuration from
 * a standard-normal twist (floating) or chart (planar), standard-normal inputs
 * with gravity enabled.
 */
class StateSampler {
 public:
  StateSampler(const VmsModel& model, std::uint64_t seed) : model_(model), rng_(seed) {}

  Sample next();
  JointConfig random_base();
  Eigen::VectorXd normal(int size);

 private:
  const VmsModel& model_;
  std::mt19937_64 rng_;
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;

  bool pass() const { return max_residual <= threshold; }  // false for NaN
};

struct ValidationReport {
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  /// `CHECK name max_residual threshold PASS|FAIL` lines after a header.
  std::string format() const;
};

/// Runs every structural, gradient, power-balance and equivalence check on
/// `samples` random states and reports the worst residual of each.
ValidationReport validate(const VmsModel& model, int samples, std::uint64_t seed);

}  // namespace vms
