#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vms/inertia.hpp"
#include "vms/joints.hpp"
#include "vms/kinematics.hpp"
#include "vms/model.hpp"

namespace vms {

/**
 * External and actuator inputs. Empty base_wrench / joint_torque vectors mean
 * zero; otherwise their sizes must be b and n.
 *
 * base_wrench acts on the base in its body frame, projected onto the base
 * joint subspace. ee_wrench acts at the end-effector frame and enters the
 * joint forces only, through the manipulator Jacobian transpose.
 */
struct Inputs {
  Eigen::VectorXd base_wrench;
  Eigen::VectorXd joint_torque;
  Wrench ee_wrench = Wrench::Zero();
  bool gravity = true;  // effective only when the model's potential is UniformGravity

  static Inputs Zero(bool gravity = true) {
    Inputs in;
    in.gravity = gravity;
    return in;
  }
};

/// Coupled momentum state: base momentum p (b) and joint momentum pi (n).
struct State {
  JointConfig h;
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  Eigen::VectorXd pi;
};

/// Inertially decoupled momentum state: p_hat = p, pi_hat = pi - A^T p.
struct DecoupledState {
  JointConfig h;
  Eigen::VectorXd q;
  Eigen::VectorXd p_hat;
  Eigen::VectorXd pi_hat;
};

/// Locked-velocity state: v_hat = v + A q_dot.
struct VelocityState {
  JointConfig h;
  Eigen::VectorXd q;
  Eigen::VectorXd v_hat;
  Eigen::VectorXd q_dot;
};

struct Velocities {
  Eigen::VectorXd v;      // base body velocity in joint coordinates (b)
  Eigen::VectorXd q_dot;  // n
};

/// Throws std::invalid_argument when vector sizes or h do not match the model.
void check_state(const VmsModel& model, const JointConfig& h, const Eigen::VectorXd& q);

/// Legendre transform: p = M_b v + M_bm q_dot, pi = M_bm^T v + M_m q_dot.
State state_from_velocities(const VmsModel& model, const JointConfig& h, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& v, const Eigen::VectorXd& q_dot);

Velocities velocities(const MassBlocks& blocks, const State& x);
DecoupledState decouple(const MassBlocks& blocks, const State& x);
State recouple(const MassBlocks& blocks, const DecoupledState& x);
VelocityState to_velocity_state(const MassBlocks& blocks, const State& x);
State from_velocity_state(const MassBlocks& blocks, const VelocityState& x);

double kinetic_energy(const MassBlocks& blocks, const State& x);
double kinetic_energy(const MassBlocks& blocks, const DecoupledState& x);

/// True when the model carries a gravity potential and the inputs enable it.
bool gravity_active(const VmsModel& model, const Inputs& inputs);

/// -sum_bodies m g^T c, c the body's center of mass in the spatial frame.
double potential_energy(const VmsModel& model, const FkCache& cache);

/// Joint force of gravity, -dH_pot/dq (n).
Eigen::VectorXd gravity_joint_force(const VmsModel& model, const FkCache& cache);

/// Base wrench of gravity, -chi_h^*(dH_pot/dh): total weight of the locked system in the base frame (b).
Eigen::VectorXd gravity_base_wrench(const VmsModel& model, const FkCache& cache);

/// tau = tau_act + J_e^T W_e - g(q).
Eigen::VectorXd total_joint_force(const VmsModel& model, const FkCache& cache, const Inputs& inputs);

/// w = w_act - chi_h^*(dH_pot/dh).
Eigen::VectorXd total_base_wrench(const VmsModel& model, const FkCache& cache, const Inputs& inputs);

/// Port power of the actuators and the end-effector wrench (gravity excluded).
double supplied_power(const VmsModel& model, const FkCache& cache, const Inputs& inputs, const Velocities& vel);

/// ad~_p on the base algebra (b x b, skew).
Eigen::MatrixXd base_ad_tilde(const VmsModel& model, const Eigen::VectorXd& p);

// Structure matrices. State ordering is (p, q, pi) with sizes (b, n, n).
Eigen::MatrixXd interconnection(const Eigen::MatrixXd& ad_tilde, int n);
Eigen::MatrixXd interconnection_decoupled(const Eigen::MatrixXd& ad_tilde, const Eigen::MatrixXd& A,
                                          const Eigen::MatrixXd& B);
Eigen::MatrixXd input_map(int b, int n);
Eigen::MatrixXd input_map_decoupled(const Eigen::MatrixXd& A);

/// Tangent map of (p, q, pi) -> (p, q, pi - A^T p).
Eigen::MatrixXd phi_map(const Eigen::MatrixXd& A, const Eigen::MatrixXd& L);

// Auxiliary maps built from the finite-difference mass partials.
Eigen::MatrixXd l_map(const MassPartials& d, const Eigen::VectorXd& p);  // column k = dA_k^T p
Eigen::MatrixXd b_map(const Eigen::MatrixXd& ad_tilde, const Eigen::MatrixXd& A, const Eigen::MatrixXd& L);
Eigen::MatrixXd n_b_map(const MassPartials& d, const Eigen::VectorXd& p_hat);     // column k = 1/2 dMb_inv_k p_hat
Eigen::MatrixXd n_m_hat_map(const MassPartials& d, const Eigen::VectorXd& pi_hat);  // column k = 1/2 dMm_hat_inv_k pi_hat
Eigen::MatrixXd e_b_map(const MassPartials& d, const Eigen::VectorXd& v_hat);     // column k = 1/2 dMb_k v_hat
Eigen::MatrixXd p_b_map(const MassPartials& d, const Eigen::VectorXd& q_dot);     // 1/2 sum_k dMb_k q_dot_k
Eigen::MatrixXd c_m_hat_map(const MassPartials& d, const Eigen::VectorXd& q_dot);  // Christoffel form of M_m_hat
Eigen::MatrixXd c1_hat_map(const Eigen::MatrixXd& Pb, const Eigen::MatrixXd& Eb, const Eigen::MatrixXd& Cm_hat);
Eigen::MatrixXd c2_hat_map(const Eigen::MatrixXd& ad_tilde, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B_hat);

/// Hamel coefficients for the quasi-velocities (v_hat, q_dot).
/// Upper-case indices range over the base algebra (b), lower-case over joints (n).
class HamelCoefficients {
 public:
  HamelCoefficients(int b, int n);

  int b() const { return b_; }
  int n() const { return n_; }

  double& IJ(int I, int J, int K) { return IJ_[idx(I, J, K, b_)]; }
  double& Ij(int I, int j, int K) { return Ij_[idx(I, j, K, n_)]; }
  double& iJ(int i, int J, int K) { return iJ_[idx(i, J, K, b_)]; }
  double& ij(int i, int j, int K) { return ij_[idx(i, j, K, n_)]; }
  double IJ(int I, int J, int K) const { return IJ_[idx(I, J, K, b_)]; }
  double Ij(int I, int j, int K) const { return Ij_[idx(I, j, K, n_)]; }
  double iJ(int i, int J, int K) const { return iJ_[idx(i, J, K, b_)]; }
  double ij(int i, int j, int K) const { return ij_[idx(i, j, K, n_)]; }

 private:
  size_t idx(int a, int c, int K, int cols) const { return static_cast<size_t>((a * cols + c) * b_ + K); }

  int b_;
  int n_;
  std::vector<double> IJ_, Ij_, iJ_, ij_;
};

HamelCoefficients hamel_coefficients(const StructureConstants& c, const MassBlocks& blocks, const MassPartials& d);

/// Structure constants of the base algebra, empty for a fixed base.
StructureConstants base_structure_constants(const VmsModel& model);

/**
 * Right-hand side of a port-Hamiltonian formulation.
 *
 * For the coupled form the rates are (p_dot, q_dot, pi_dot) and `output` is
 * v; for the decoupled form they are (p_hat_dot, q_dot, pi_hat_dot) and
 * `output` is v_hat. `base_velocity` is always the true base velocity v that
 * drives the base configuration.
 */
struct PhVectorField {
  Eigen::VectorXd p_dot;
  Eigen::VectorXd q_dot;
  Eigen::VectorXd pi_dot;
  Eigen::VectorXd output;
  Eigen::VectorXd base_velocity;
  Eigen::VectorXd gradient;  // dH/dx, same ordering as the state
  Eigen::VectorXd w;         // total base wrench (hat w = w)
  Eigen::VectorXd tau;       // total joint force (tau_hat = tau - A^T w for the decoupled form)
  double hamiltonian = 0.0;

  Eigen::VectorXd rate() const;  // stacked (p_dot, q_dot, pi_dot)
};

PhVectorField ph_standard_field(const VmsModel& model, const State& x, const Inputs& inputs);
PhVectorField ph_decoupled_field(const VmsModel& model, const DecoupledState& x, const Inputs& inputs);

struct Accelerations {
  Eigen::VectorXd v_hat_dot;
  Eigen::VectorXd q_ddot;
};

/// Solves M_hat (v_hat_dot; q_ddot) + (C1_hat + C2_hat)(v_hat; q_dot) = (w_hat; tau_hat).
Accelerations reduced_el_accelerations(const VmsModel& model, const VelocityState& x, const Inputs& inputs);

/// Residual of the Boltzmann-Hamel equations, stacked (base b; joints n).
Eigen::VectorXd boltzmann_hamel_residual(const VmsModel& model, const VelocityState& x, const Accelerations& acc,
                                         const Inputs& inputs);

}  // namespace vms
