#include "vms/dynamics.hpp"

#include <stdexcept>
#include <string>

namespace vms {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void check_size(const VectorXd& v, int expected, const char* what) {
  if (v.size() != expected) {
    throw std::invalid_argument(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                                std::to_string(expected));
  }
}

VectorXd or_zero(const VectorXd& v, int size, const char* what) {
  if (v.size() == 0) return VectorXd::Zero(size);
  check_size(v, size, what);
  return v;
}

// Body-frame weight wrench (c x f; f) of a body with spatial orientation R.
Wrench weight_wrench(const Matrix6d& inertia, const Eigen::Matrix3d& R, const Eigen::Vector3d& g) {
  const MassProperties mp = mass_properties(inertia);
  const Eigen::Vector3d f = mp.mass * R.transpose() * g;
  Wrench W;
  W << mp.com.cross(f), f;
  return W;
}

MatrixXd d_full(const MassPartials& d, int k) {
  const int b = static_cast<int>(d.dMb[static_cast<size_t>(k)].rows());
  const int n = d.n();
  MatrixXd M(b + n, b + n);
  M.topLeftCorner(b, b) = d.dMb[static_cast<size_t>(k)];
  M.topRightCorner(b, n) = d.dMbm[static_cast<size_t>(k)];
  M.bottomLeftCorner(n, b) = d.dMbm[static_cast<size_t>(k)].transpose();
  M.bottomRightCorner(n, n) = d.dMm[static_cast<size_t>(k)];
  return M;
}

VectorXd stack(const VectorXd& a, const VectorXd& b) {
  VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

VectorXd stack(const VectorXd& a, const VectorXd& b, const VectorXd& c) {
  VectorXd out(a.size() + b.size() + c.size());
  out << a, b, c;
  return out;
}

}  // namespace

void check_state(const VmsModel& model, const JointConfig& h, const VectorXd& q) {
  check_config(model.base.joint, h);
  check_size(q, model.n(), "joint vector q");
}

State state_from_velocities(const VmsModel& model, const JointConfig& h, const VectorXd& q, const VectorXd& v,
                            const VectorXd& q_dot) {
  check_state(model, h, q);
  check_size(v, model.b(), "base velocity");
  check_size(q_dot, model.n(), "joint velocity");
  const MassBlocks blocks = mass_blocks(model, q);
  return {h, q, blocks.Mb * v + blocks.Mbm * q_dot, blocks.Mbm.transpose() * v + blocks.Mm * q_dot};
}

Velocities velocities(const MassBlocks& blocks, const State& x) {
  const int b = blocks.b();
  const VectorXd y = blocks.full().llt().solve(stack(x.p, x.pi));
  return {y.head(b), y.tail(blocks.n())};
}

DecoupledState decouple(const MassBlocks& blocks, const State& x) {
  return {x.h, x.q, x.p, x.pi - blocks.A.transpose() * x.p};
}

State recouple(const MassBlocks& blocks, const DecoupledState& x) {
  return {x.h, x.q, x.p_hat, x.pi_hat + blocks.A.transpose() * x.p_hat};
}

VelocityState to_velocity_state(const MassBlocks& blocks, const State& x) {
  const DecoupledState d = decouple(blocks, x);
  return {x.h, x.q, blocks.Mb_inv * d.p_hat, blocks.Mm_hat_inv * d.pi_hat};
}

State from_velocity_state(const MassBlocks& blocks, const VelocityState& x) {
  return recouple(blocks, {x.h, x.q, blocks.Mb * x.v_hat, blocks.Mm_hat * x.q_dot});
}

double kinetic_energy(const MassBlocks& blocks, const State& x) {
  const Velocities vel = velocities(blocks, x);
  return 0.5 * (x.p.dot(vel.v) + x.pi.dot(vel.q_dot));
}

double kinetic_energy(const MassBlocks& blocks, const DecoupledState& x) {
  return 0.5 * (x.p_hat.dot(blocks.Mb_inv * x.p_hat) + x.pi_hat.dot(blocks.Mm_hat_inv * x.pi_hat));
}

bool gravity_active(const VmsModel& model, const Inputs& inputs) {
  return inputs.gravity && model.potential == Potential::UniformGravity;
}

double potential_energy(const VmsModel& model, const FkCache& cache) {
  const Eigen::Vector3d& g = model.gravity;
  const MassProperties base = mass_properties(model.base.inertia);
  double H = -base.mass * g.dot(cache.base * base.com);
  for (int i = 0; i < model.n(); ++i) {
    const MassProperties mp = mass_properties(model.links[static_cast<size_t>(i)].inertia);
    H -= mp.mass * g.dot(cache.base * (cache.links[static_cast<size_t>(i)] * mp.com));
  }
  return H;
}

VectorXd gravity_joint_force(const VmsModel& model, const FkCache& cache) {
  VectorXd tau = VectorXd::Zero(model.n());
  for (int i = 0; i < model.n(); ++i) {
    const Pose& H = cache.links[static_cast<size_t>(i)];
    const Wrench W =
        weight_wrench(model.links[static_cast<size_t>(i)].inertia, cache.base.rotation() * H.rotation(), model.gravity);
    tau += link_jacobian_base(model, cache, i).transpose() * W;
  }
  return tau;
}

VectorXd gravity_base_wrench(const VmsModel& model, const FkCache& cache) {
  if (model.b() == 0) return VectorXd::Zero(0);
  Wrench total = weight_wrench(model.base.inertia, cache.base.rotation(), model.gravity);
  for (int i = 0; i < model.n(); ++i) {
    const Pose& H = cache.links[static_cast<size_t>(i)];
    const Wrench W =
        weight_wrench(model.links[static_cast<size_t>(i)].inertia, cache.base.rotation() * H.rotation(), model.gravity);
    total += adjoint(H.inverse()).transpose() * W;
  }
  return model.base_s_matrix().transpose() * total;
}

VectorXd total_joint_force(const VmsModel& model, const FkCache& cache, const Inputs& inputs) {
  VectorXd tau = or_zero(inputs.joint_torque, model.n(), "joint torque input");
  if (model.n() > 0) tau += end_effector_jacobian(model, cache).transpose() * inputs.ee_wrench;
  if (gravity_active(model, inputs)) tau += gravity_joint_force(model, cache);
  return tau;
}

VectorXd total_base_wrench(const VmsModel& model, const FkCache& cache, const Inputs& inputs) {
  VectorXd w = or_zero(inputs.base_wrench, model.b(), "base wrench input");
  if (gravity_active(model, inputs)) w += gravity_base_wrench(model, cache);
  return w;
}

double supplied_power(const VmsModel& model, const FkCache& cache, const Inputs& inputs, const Velocities& vel) {
  double power = or_zero(inputs.base_wrench, model.b(), "base wrench input").dot(vel.v);
  VectorXd tau = or_zero(inputs.joint_torque, model.n(), "joint torque input");
  if (model.n() > 0) tau += end_effector_jacobian(model, cache).transpose() * inputs.ee_wrench;
  return power + tau.dot(vel.q_dot);
}

MatrixXd base_ad_tilde(const VmsModel& model, const VectorXd& p) {
  const int b = model.b();
  check_size(p, b, "base momentum");
  if (b == 0) return MatrixXd(0, 0);
  if (b == 6) return ad_dual_tilde(Wrench(p));
  return ad_dual_tilde(p, model.base_s_matrix());
}

MatrixXd interconnection(const MatrixXd& ad_tilde, int n) {
  const int b = static_cast<int>(ad_tilde.rows());
  MatrixXd J = MatrixXd::Zero(b + 2 * n, b + 2 * n);
  J.topLeftCorner(b, b) = ad_tilde;
  J.block(b, b + n, n, n) = MatrixXd::Identity(n, n);
  J.block(b + n, b, n, n) = -MatrixXd::Identity(n, n);
  return J;
}

MatrixXd interconnection_decoupled(const MatrixXd& ad_tilde, const MatrixXd& A, const MatrixXd& B) {
  const int b = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  MatrixXd J = MatrixXd::Zero(b + 2 * n, b + 2 * n);
  J.topLeftCorner(b, b) = ad_tilde;
  J.block(0, b + n, b, n) = -ad_tilde * A;
  J.block(b, b + n, n, n) = MatrixXd::Identity(n, n);
  J.block(b + n, 0, n, b) = -A.transpose() * ad_tilde;
  J.block(b + n, b, n, n) = -MatrixXd::Identity(n, n);
  J.block(b + n, b + n, n, n) = -B;
  return J;
}

MatrixXd input_map(int b, int n) {
  MatrixXd G = MatrixXd::Zero(b + 2 * n, b + n);
  G.topLeftCorner(b, b) = MatrixXd::Identity(b, b);
  G.bottomRightCorner(n, n) = MatrixXd::Identity(n, n);
  return G;
}

MatrixXd input_map_decoupled(const MatrixXd& A) {
  const int b = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  MatrixXd G = input_map(b, n);
  G.block(b + n, 0, n, b) = -A.transpose();
  return G;
}

MatrixXd phi_map(const MatrixXd& A, const MatrixXd& L) {
  const int b = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  MatrixXd Phi = MatrixXd::Identity(b + 2 * n, b + 2 * n);
  Phi.block(b + n, 0, n, b) = -A.transpose();
  Phi.block(b + n, b, n, n) = -L;
  return Phi;
}

MatrixXd l_map(const MassPartials& d, const VectorXd& p) {
  const int n = d.n();
  MatrixXd L(n, n);
  for (int k = 0; k < n; ++k) L.col(k) = d.dA[static_cast<size_t>(k)].transpose() * p;
  return L;
}

MatrixXd b_map(const MatrixXd& ad_tilde, const MatrixXd& A, const MatrixXd& L) {
  return -A.transpose() * ad_tilde * A + L - L.transpose();
}

MatrixXd n_b_map(const MassPartials& d, const VectorXd& p_hat) {
  const int n = d.n();
  MatrixXd N(p_hat.size(), n);
  for (int k = 0; k < n; ++k) N.col(k) = 0.5 * d.dMb_inv[static_cast<size_t>(k)] * p_hat;
  return N;
}

MatrixXd n_m_hat_map(const MassPartials& d, const VectorXd& pi_hat) {
  const int n = d.n();
  MatrixXd N(n, n);
  for (int k = 0; k < n; ++k) N.col(k) = 0.5 * d.dMm_hat_inv[static_cast<size_t>(k)] * pi_hat;
  return N;
}

MatrixXd e_b_map(const MassPartials& d, const VectorXd& v_hat) {
  const int n = d.n();
  MatrixXd E(v_hat.size(), n);
  for (int k = 0; k < n; ++k) E.col(k) = 0.5 * d.dMb[static_cast<size_t>(k)] * v_hat;
  return E;
}

MatrixXd p_b_map(const MassPartials& d, const VectorXd& q_dot) {
  if (d.n() == 0) return MatrixXd();
  return 0.5 * directional(d.dMb, q_dot);
}

MatrixXd c_m_hat_map(const MassPartials& d, const VectorXd& q_dot) {
  const int n = d.n();
  MatrixXd C = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double c = 0.0;
      for (int k = 0; k < n; ++k) {
        const auto& dk = d.dMm_hat[static_cast<size_t>(k)];
        const auto& dj = d.dMm_hat[static_cast<size_t>(j)];
        const auto& di = d.dMm_hat[static_cast<size_t>(i)];
        c += 0.5 * (dk(i, j) + dj(i, k) - di(j, k)) * q_dot(k);
      }
      C(i, j) = c;
    }
  }
  return C;
}

MatrixXd c1_hat_map(const MatrixXd& Pb, const MatrixXd& Eb, const MatrixXd& Cm_hat) {
  const int b = static_cast<int>(Eb.rows());
  const int n = static_cast<int>(Cm_hat.rows());
  MatrixXd C(b + n, b + n);
  C.topLeftCorner(b, b) = Pb.size() == 0 ? MatrixXd::Zero(b, b) : Pb;
  C.topRightCorner(b, n) = Eb;
  C.bottomLeftCorner(n, b) = -Eb.transpose();
  C.bottomRightCorner(n, n) = Cm_hat;
  return C;
}

MatrixXd c2_hat_map(const MatrixXd& ad_tilde, const MatrixXd& A, const MatrixXd& B_hat) {
  const int b = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  MatrixXd C(b + n, b + n);
  C.topLeftCorner(b, b) = -ad_tilde;
  C.topRightCorner(b, n) = ad_tilde * A;
  C.bottomLeftCorner(n, b) = A.transpose() * ad_tilde;
  C.bottomRightCorner(n, n) = B_hat;
  return C;
}

HamelCoefficients::HamelCoefficients(int b, int n)
    : b_(b),
      n_(n),
      IJ_(static_cast<size_t>(b * b * b), 0.0),
      Ij_(static_cast<size_t>(b * n * b), 0.0),
      iJ_(static_cast<size_t>(n * b * b), 0.0),
      ij_(static_cast<size_t>(n * n * b), 0.0) {}

StructureConstants base_structure_constants(const VmsModel& model) {
  if (model.b() == 0) return StructureConstants(0);
  return structure_constants(model.base.joint);
}

HamelCoefficients hamel_coefficients(const StructureConstants& c, const MassBlocks& blocks, const MassPartials& d) {
  const int b = blocks.b();
  const int n = blocks.n();
  const MatrixXd& A = blocks.A;  // A_i^I = A(I, i)
  HamelCoefficients g(b, n);
  for (int I = 0; I < b; ++I)
    for (int J = 0; J < b; ++J)
      for (int K = 0; K < b; ++K) g.IJ(I, J, K) = c(I, J, K);
  for (int I = 0; I < b; ++I)
    for (int j = 0; j < n; ++j)
      for (int K = 0; K < b; ++K) {
        double s = 0.0;
        for (int J = 0; J < b; ++J) s += c(I, J, K) * A(J, j);
        g.Ij(I, j, K) = -s;
        g.iJ(j, I, K) = s;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int K = 0; K < b; ++K) {
        double s = 0.0;
        for (int I = 0; I < b; ++I)
          for (int J = 0; J < b; ++J) s += c(I, J, K) * A(I, i) * A(J, j);
        g.ij(i, j, K) = s + d.dA[static_cast<size_t>(j)](K, i) - d.dA[static_cast<size_t>(i)](K, j);
      }
  return g;
}

VectorXd PhVectorField::rate() const { return stack(p_dot, q_dot, pi_dot); }

PhVectorField ph_standard_field(const VmsModel& model, const State& x, const Inputs& inputs) {
  check_state(model, x.h, x.q);
  check_size(x.p, model.b(), "base momentum");
  check_size(x.pi, model.n(), "joint momentum");
  const int n = model.n();
  const FkCache cache = forward_kinematics(model, x.h, x.q);
  const MassBlocks blocks = mass_blocks(model, cache);
  const MassPartials d = mass_partials(model, x.q);

  Eigen::LLT<MatrixXd> llt(blocks.full());
  if (llt.info() != Eigen::Success) throw SingularMassMatrix("mass matrix is not positive definite");
  const VectorXd y = llt.solve(stack(x.p, x.pi));
  const VectorXd v = y.head(model.b());
  const VectorXd q_dot = y.tail(n);

  VectorXd dHdq(n);
  for (int k = 0; k < n; ++k) dHdq(k) = -0.5 * y.dot(d_full(d, k) * y);

  PhVectorField f;
  f.w = total_base_wrench(model, cache, inputs);
  f.tau = total_joint_force(model, cache, inputs);
  f.p_dot = base_ad_tilde(model, x.p) * v + f.w;
  f.q_dot = q_dot;
  f.pi_dot = -dHdq + f.tau;
  f.output = v;
  f.base_velocity = v;
  f.gradient = stack(v, dHdq, q_dot);
  f.hamiltonian = 0.5 * (x.p.dot(v) + x.pi.dot(q_dot));
  return f;
}

PhVectorField ph_decoupled_field(const VmsModel& model, const DecoupledState& x, const Inputs& inputs) {
  check_state(model, x.h, x.q);
  check_size(x.p_hat, model.b(), "base momentum");
  check_size(x.pi_hat, model.n(), "decoupled joint momentum");
  const FkCache cache = forward_kinematics(model, x.h, x.q);
  const MassBlocks blocks = mass_blocks(model, cache);
  const MassPartials d = mass_partials(model, x.q);
  const MatrixXd& A = blocks.A;

  const VectorXd v_hat = blocks.Mb_inv * x.p_hat;
  const VectorXd q_dot = blocks.Mm_hat_inv * x.pi_hat;
  const MatrixXd adt = base_ad_tilde(model, x.p_hat);
  const MatrixXd B = b_map(adt, A, l_map(d, x.p_hat));
  const VectorXd dHdq = n_b_map(d, x.p_hat).transpose() * x.p_hat + n_m_hat_map(d, x.pi_hat).transpose() * x.pi_hat;

  PhVectorField f;
  f.w = total_base_wrench(model, cache, inputs);
  f.tau = total_joint_force(model, cache, inputs) - A.transpose() * f.w;
  const VectorXd v = v_hat - A * q_dot;
  f.p_dot = adt * v + f.w;
  f.q_dot = q_dot;
  f.pi_dot = -A.transpose() * (adt * v_hat) - dHdq - B * q_dot + f.tau;
  f.output = v_hat;
  f.base_velocity = v;
  f.gradient = stack(v_hat, dHdq, q_dot);
  f.hamiltonian = 0.5 * (x.p_hat.dot(v_hat) + x.pi_hat.dot(q_dot));
  return f;
}

Accelerations reduced_el_accelerations(const VmsModel& model, const VelocityState& x, const Inputs& inputs) {
  check_state(model, x.h, x.q);
  check_size(x.v_hat, model.b(), "locked base velocity");
  check_size(x.q_dot, model.n(), "joint velocity");
  const int b = model.b();
  const int n = model.n();
  const FkCache cache = forward_kinematics(model, x.h, x.q);
  const MassBlocks blocks = mass_blocks(model, cache);
  const MassPartials d = mass_partials(model, x.q);
  const MatrixXd& A = blocks.A;

  const VectorXd p = blocks.Mb * x.v_hat;
  const MatrixXd adt = base_ad_tilde(model, p);
  const MatrixXd B_hat = b_map(adt, A, l_map(d, p));
  const MatrixXd C = c1_hat_map(p_b_map(d, x.q_dot), e_b_map(d, x.v_hat), c_m_hat_map(d, x.q_dot)) +
                     c2_hat_map(adt, A, B_hat);

  const VectorXd w = total_base_wrench(model, cache, inputs);
  const VectorXd tau_hat = total_joint_force(model, cache, inputs) - A.transpose() * w;
  const VectorXd rhs = stack(w, tau_hat) - C * stack(x.v_hat, x.q_dot);
  return {blocks.Mb_inv * rhs.head(b), blocks.Mm_hat_inv * rhs.tail(n)};
}

VectorXd boltzmann_hamel_residual(const VmsModel& model, const VelocityState& x, const Accelerations& acc,
                                  const Inputs& inputs) {
  check_state(model, x.h, x.q);
  check_size(x.v_hat, model.b(), "locked base velocity");
  check_size(x.q_dot, model.n(), "joint velocity");
  check_size(acc.v_hat_dot, model.b(), "locked base acceleration");
  check_size(acc.q_ddot, model.n(), "joint acceleration");
  const int b = model.b();
  const int n = model.n();
  const FkCache cache = forward_kinematics(model, x.h, x.q);
  const MassBlocks blocks = mass_blocks(model, cache);
  const MassPartials d = mass_partials(model, x.q);
  const HamelCoefficients g = hamel_coefficients(base_structure_constants(model), blocks, d);
  const VectorXd& v = x.v_hat;
  const VectorXd& qd = x.q_dot;

  const VectorXd p = blocks.Mb * v;  // dl/dv_hat
  VectorXd p_rate = blocks.Mb * acc.v_hat_dot;
  VectorXd pi_rate = blocks.Mm_hat * acc.q_ddot;
  if (n > 0) {
    p_rate += directional(d.dMb, qd) * v;
    pi_rate += directional(d.dMm_hat, qd) * qd;
  }

  const VectorXd w = total_base_wrench(model, cache, inputs);
  const VectorXd tau_hat = total_joint_force(model, cache, inputs) - blocks.A.transpose() * w;

  VectorXd r(b + n);
  for (int I = 0; I < b; ++I) {
    double s = p_rate(I) - w(I);
    for (int K = 0; K < b; ++K) {
      for (int J = 0; J < b; ++J) s += g.IJ(I, J, K) * v(J) * p(K);
      for (int j = 0; j < n; ++j) s += g.Ij(I, j, K) * qd(j) * p(K);
    }
    r(I) = s;
  }
  for (int i = 0; i < n; ++i) {
    const auto& dMb = d.dMb[static_cast<size_t>(i)];
    const auto& dMm = d.dMm_hat[static_cast<size_t>(i)];
    const double dl_dq = 0.5 * v.dot(dMb * v) + 0.5 * qd.dot(dMm * qd);
    double s = pi_rate(i) - dl_dq - tau_hat(i);
    for (int K = 0; K < b; ++K) {
      for (int J = 0; J < b; ++J) s += g.iJ(i, J, K) * v(J) * p(K);
      for (int j = 0; j < n; ++j) s += g.ij(i, j, K) * qd(j) * p(K);
    }
    r(b + i) = s;
  }
  return r;
}

}  // namespace vms
