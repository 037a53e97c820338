#include "vms/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace vms {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd stack3(const VectorXd& a, const VectorXd& b, const VectorXd& c) {
  VectorXd out(a.size() + b.size() + c.size());
  out << a, b, c;
  return out;
}

// Base configuration displaced from h0 by a stage increment.
JointConfig base_at(const VmsModel& model, const JointConfig& h0, const VectorXd& delta) {
  switch (model.base.joint.type) {
    case JointType::Floating:
      return Pose(std::get<Pose>(h0) * exp_se3(Twist(delta), 1.0));
    case JointType::Planar: {
      const PlanarConfig& c = std::get<PlanarConfig>(h0);
      return PlanarConfig{c.theta + delta(0), c.x + delta(1), c.y + delta(2)};
    }
    default:
      return h0;
  }
}

// Rate of the stage increment given the base velocity at that stage.
VectorXd increment_rate(const VmsModel& model, const JointConfig& h, const VectorXd& delta, const VectorXd& v) {
  switch (model.base.joint.type) {
    case JointType::Floating:
      return dexp_inv(Twist(delta), Twist(v));
    case JointType::Planar:
      return planar_chi_matrix(std::get<PlanarConfig>(h).theta) * v;
    default:
      return VectorXd::Zero(0);
  }
}

int increment_size(const VmsModel& model) { return model.b(); }

VmsModel self_test_body() {
  VmsModel model;
  model.base.joint = JointKind::Floating();
  Eigen::Matrix3d I;
  I << 0.9, 0.05, -0.02, 0.05, 1.7, 0.08, -0.02, 0.08, 2.6;
  model.base.inertia = spatial_inertia_from_primitives(2.0, Eigen::Vector3d(0.1, -0.2, 0.15), I);
  model.potential = Potential::None;
  return model;
}

}  // namespace

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::Standard:
      return "ph";
    case Formulation::Decoupled:
      return "ph-decoupled";
    case Formulation::Lagrangian:
      return "lagrangian";
  }
  return "?";
}

Formulation parse_formulation(std::string_view name) {
  if (name == "ph") return Formulation::Standard;
  if (name == "ph-decoupled") return Formulation::Decoupled;
  if (name == "lagrangian") return Formulation::Lagrangian;
  throw std::invalid_argument("unknown formulation '" + std::string(name) +
                              "' (expected ph, ph-decoupled or lagrangian)");
}

FlowState to_flow(const VmsModel& model, Formulation f, const State& x) {
  if (f == Formulation::Standard) return {x.h, stack3(x.p, x.q, x.pi)};
  const MassBlocks blocks = mass_blocks(model, x.q);
  if (f == Formulation::Decoupled) {
    const DecoupledState d = decouple(blocks, x);
    return {x.h, stack3(d.p_hat, x.q, d.pi_hat)};
  }
  const VelocityState s = to_velocity_state(blocks, x);
  return {x.h, stack3(s.v_hat, x.q, s.q_dot)};
}

State from_flow(const VmsModel& model, Formulation f, const FlowState& y) {
  const int b = model.b();
  const int n = model.n();
  const VectorXd first = y.z.head(b);
  const VectorXd q = y.z.segment(b, n);
  const VectorXd last = y.z.tail(n);
  if (f == Formulation::Standard) return {y.h, q, first, last};
  const MassBlocks blocks = mass_blocks(model, q);
  if (f == Formulation::Decoupled) return recouple(blocks, {y.h, q, first, last});
  return from_velocity_state(blocks, {y.h, q, first, last});
}

FlowRate flow_rate(const VmsModel& model, Formulation f, const FlowState& y, const Inputs& inputs) {
  const int b = model.b();
  const int n = model.n();
  const VectorXd first = y.z.head(b);
  const VectorXd q = y.z.segment(b, n);
  const VectorXd last = y.z.tail(n);
  switch (f) {
    case Formulation::Standard: {
      const PhVectorField field = ph_standard_field(model, {y.h, q, first, last}, inputs);
      return {field.rate(), field.base_velocity};
    }
    case Formulation::Decoupled: {
      const PhVectorField field = ph_decoupled_field(model, {y.h, q, first, last}, inputs);
      return {field.rate(), field.base_velocity};
    }
    case Formulation::Lagrangian: {
      const Accelerations acc = reduced_el_accelerations(model, {y.h, q, first, last}, inputs);
      const MassBlocks blocks = mass_blocks(model, q);
      return {stack3(acc.v_hat_dot, last, acc.q_ddot), first - blocks.A * last};
    }
  }
  throw std::invalid_argument("unknown formulation");
}

Twist dexp_inv(const Twist& u, const Twist& V) {
  const Matrix6d ad = ad_op(u);
  const Twist uV = ad * V;
  return V + 0.5 * uV + (1.0 / 12.0) * (ad * uV);
}

FlowState step_rk4(const VmsModel& model, Formulation f, const FlowState& y, const Inputs& inputs, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const int nd = increment_size(model);
  const VectorXd zero = VectorXd::Zero(nd);

  auto stage = [&](const VectorXd& delta, const VectorXd& z, VectorXd& k, VectorXd& K) {
    const FlowState s{base_at(model, y.h, delta), z};
    const FlowRate r = flow_rate(model, f, s, inputs);
    k = r.z_dot;
    K = increment_rate(model, s.h, delta, r.base_velocity);
  };

  VectorXd k1, k2, k3, k4, K1, K2, K3, K4;
  stage(zero, y.z, k1, K1);
  stage(0.5 * dt * K1, y.z + 0.5 * dt * k1, k2, K2);
  stage(0.5 * dt * K2, y.z + 0.5 * dt * k2, k3, K3);
  stage(dt * K3, y.z + dt * k3, k4, K4);

  FlowState next;
  next.z = y.z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  next.h = base_at(model, y.h, (dt / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4));
  if (auto* H = std::get_if<Pose>(&next.h)) *H = H->normalized();
  return next;
}

State step_rk4(const VmsModel& model, Formulation f, const State& x, const Inputs& inputs, double dt) {
  return from_flow(model, f, step_rk4(model, f, to_flow(model, f, x), inputs, dt));
}

VectorXd transported_momentum(const VmsModel& model, const JointConfig& h, const VectorXd& p,
                              TransportConvention convention) {
  if (model.b() == 0) return VectorXd::Zero(0);
  const Pose H = base_pose(model, h);
  const MatrixXd S = model.base_s_matrix();
  const MatrixXd T = S.completeOrthogonalDecomposition().pseudoInverse() * adjoint(H) * S;
  if (convention == TransportConvention::InverseTranspose) return T.transpose().partialPivLu().solve(p);
  return T.transpose() * p;
}

TransportConvention transport_convention() {
  static const TransportConvention chosen = [] {
    const VmsModel body = self_test_body();
    Twist v;
    v << 0.4, -0.7, 0.9, 0.3, 0.2, -0.5;
    State x = state_from_velocities(body, Pose::Identity(), Eigen::VectorXd(0), v, Eigen::VectorXd(0));
    const Inputs none = Inputs::Zero(false);
    const VectorXd inv0 = transported_momentum(body, x.h, x.p, TransportConvention::InverseTranspose);
    const VectorXd tr0 = transported_momentum(body, x.h, x.p, TransportConvention::Transpose);
    for (int i = 0; i < 500; ++i) x = step_rk4(body, Formulation::Standard, x, none, 2e-3);
    const double inv_drift =
        (transported_momentum(body, x.h, x.p, TransportConvention::InverseTranspose) - inv0).norm() / inv0.norm();
    const double tr_drift =
        (transported_momentum(body, x.h, x.p, TransportConvention::Transpose) - tr0).norm() / tr0.norm();
    const TransportConvention c =
        inv_drift <= tr_drift ? TransportConvention::InverseTranspose : TransportConvention::Transpose;
    if (std::min(inv_drift, tr_drift) > 1e-8) {
      throw std::logic_error("momentum transport self-test failed: no convention conserves spatial momentum");
    }
    return c;
  }();
  return chosen;
}

VectorXd transported_momentum(const VmsModel& model, const JointConfig& h, const VectorXd& p) {
  return transported_momentum(model, h, p, transport_convention());
}

void InputSchedule::add(double start, Inputs inputs) {
  if (!segments_.empty() && !(start > segments_.back().start)) {
    throw std::invalid_argument("input schedule segments must have increasing start times");
  }
  segments_.push_back({start, std::move(inputs)});
}

const Inputs& InputSchedule::at(double t) const {
  const Inputs* current = &default_;
  for (const Segment& s : segments_) {
    if (s.start <= t) current = &s.inputs;
  }
  return *current;
}

void InputSchedule::set_gravity(bool enabled) {
  default_.gravity = enabled;
  for (Segment& s : segments_) s.inputs.gravity = enabled;
}

TrajectoryRecord make_record(const VmsModel& model, double t, const State& x, const Inputs& inputs) {
  const FkCache cache = forward_kinematics(model, x.h, x.q);
  const MassBlocks blocks = mass_blocks(model, cache);
  TrajectoryRecord r;
  r.t = t;
  r.state = x;
  r.H_kin = kinetic_energy(blocks, x);
  r.H_pot = gravity_active(model, inputs) ? potential_energy(model, cache) : 0.0;
  r.power_in = supplied_power(model, cache, inputs, velocities(blocks, x));
  r.momentum_transport = transported_momentum(model, x.h, x.p);
  return r;
}

std::vector<TrajectoryRecord> simulate(const VmsModel& model, Formulation f, const State& initial,
                                       const InputSchedule& schedule, double dt, double duration) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(duration >= dt * (1.0 - 1e-12))) throw std::invalid_argument("duration must be at least one time step");
  const long steps = std::lround(duration / dt);

  std::vector<TrajectoryRecord> records;
  records.reserve(static_cast<size_t>(steps + 1));
  records.push_back(make_record(model, 0.0, initial, schedule.at(0.0)));
  FlowState y = to_flow(model, f, initial);
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double t_next = static_cast<double>(k + 1) * dt;
    try {
      y = step_rk4(model, f, y, schedule.at(t), dt);
      if (!y.z.allFinite()) throw std::runtime_error("state became non-finite");
      records.push_back(make_record(model, t_next, from_flow(model, f, y), schedule.at(t_next)));
    } catch (const std::exception& e) {
      throw SimulationError(k, e.what());
    }
  }
  return records;
}

}  // namespace vms
