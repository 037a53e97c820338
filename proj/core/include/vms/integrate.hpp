#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vms/dynamics.hpp"
#include "vms/model.hpp"

namespace vms {

enum class Formulation { Standard, Decoupled, Lagrangian };

/// "ph", "ph-decoupled", "lagrangian".
const char* to_string(Formulation f);
/// Throws std::invalid_argument for unknown names.
Formulation parse_formulation(std::string_view name);

/**
 * Integration variables of a formulation: the base configuration h and a
 * vector z, which is (p, q, pi), (p_hat, q, pi_hat) or (v_hat, q, q_dot).
 */
struct FlowState {
  JointConfig h;
  Eigen::VectorXd z;
};

FlowState to_flow(const VmsModel& model, Formulation f, const State& x);
State from_flow(const VmsModel& model, Formulation f, const FlowState& y);

struct FlowRate {
  Eigen::VectorXd z_dot;
  Eigen::VectorXd base_velocity;  // body velocity of the base, joint coordinates
};

FlowRate flow_rate(const VmsModel& model, Formulation f, const FlowState& y, const Inputs& inputs);

/// Carries the step index of the failing step.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(long step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/**
 * One classical RK4 step. Vector parts advance by RK4; a floating base
 * advances multiplicatively by an RK4 Munthe-Kaas update so h stays on SE(3);
 * a planar base advances its chart by RK4 on the chi-mapped rates.
 */
FlowState step_rk4(const VmsModel& model, Formulation f, const FlowState& y, const Inputs& inputs, double dt);
State step_rk4(const VmsModel& model, Formulation f, const State& x, const Inputs& inputs, double dt);

/// Inverse of the right-trivialized exponential differential, truncated at
/// third order: u_dot for h = h0 exp(u) driven by body twist V.
Twist dexp_inv(const Twist& u, const Twist& V);

enum class TransportConvention { InverseTranspose, Transpose };

/// Chosen once, on first use, by integrating a torque-free asymmetric body and
/// keeping the transport whose spatial momentum stays constant.
TransportConvention transport_convention();

/// Base momentum expressed in the spatial frame.
Eigen::VectorXd transported_momentum(const VmsModel& model, const JointConfig& h, const Eigen::VectorXd& p,
                                     TransportConvention convention);
Eigen::VectorXd transported_momentum(const VmsModel& model, const JointConfig& h, const Eigen::VectorXd& p);

/// Piecewise-constant inputs: segment k applies from starts[k] until the next start.
class InputSchedule {
 public:
  InputSchedule() = default;
  explicit InputSchedule(Inputs constant) { add(0.0, std::move(constant)); }

  /// Segments must be added in increasing start time.
  void add(double start, Inputs inputs);
  const Inputs& at(double t) const;
  void set_gravity(bool enabled);
  bool empty() const { return segments_.empty(); }

 private:
  struct Segment {
    double start;
    Inputs inputs;
  };
  std::vector<Segment> segments_;
  Inputs default_ = Inputs::Zero();
};

struct TrajectoryRecord {
  double t = 0.0;
  State state;  // coupled momenta, whatever the formulation
  double H_kin = 0.0;
  double H_pot = 0.0;
  double power_in = 0.0;  // actuator and end-effector port power
  Eigen::VectorXd momentum_transport;
};

TrajectoryRecord make_record(const VmsModel& model, double t, const State& x, const Inputs& inputs);

/// Returns round(duration / dt) + 1 records, starting with the initial state.
std::vector<TrajectoryRecord> simulate(const VmsModel& model, Formulation f, const State& initial,
                                       const InputSchedule& schedule, double dt, double duration);

}  // namespace vms
