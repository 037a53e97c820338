#include "vms/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vms/inertia.hpp"
#include "vms/kinematics.hpp"

namespace vms {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double rel(const MatrixXd& a, const MatrixXd& b) { return (a - b).norm() / (1.0 + b.norm()); }
double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }
double skew_residual(const MatrixXd& M) { return (M + M.transpose()).norm() / (1.0 + M.norm()); }

VectorXd stack(const VectorXd& a, const VectorXd& b) {
  VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

class Accumulator {
 public:
  void add(const std::string& name, double residual, double threshold) {
    for (CheckResult& c : results_) {
      if (c.name == name) {
        if (!std::isnan(c.max_residual) && (std::isnan(residual) || residual > c.max_residual)) {
          c.max_residual = residual;
        }
        return;
      }
    }
    results_.push_back({name, residual, threshold});
  }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::vector<CheckResult> results_;
};

// Central differences of a scalar function of a vector.
template <typename F>
VectorXd fd_gradient(const VectorXd& x, F&& f) {
  VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
    VectorXd xp = x;
    VectorXd xm = x;
    xp(k) += h;
    xm(k) -= h;
    g(k) = (f(xp) - f(xm)) / (xp(k) - xm(k));
  }
  return g;
}

// Accelerations recovered from a decoupled momentum rate.
struct AccelerationPair {
  VectorXd v_hat_dot;
  VectorXd q_ddot;
};

AccelerationPair accelerations_from_rate(const MassBlocks& blocks, const MassPartials& d, const VectorXd& rate,
                                         const VectorXd& v_hat, const VectorXd& q_dot) {
  const int b = blocks.b();
  const int n = blocks.n();
  VectorXd p_rate = rate.head(b);
  VectorXd pi_rate = rate.tail(n);
  if (n > 0) {
    p_rate -= e_b_map(d, v_hat) * q_dot + p_b_map(d, q_dot) * v_hat;
    pi_rate -= directional(d.dMm_hat, q_dot) * q_dot;
  }
  return {blocks.Mb_inv * p_rate, blocks.Mm_hat_inv * pi_rate};
}

void check_sample(const VmsModel& model, const Sample& s, Accumulator& acc) {
  const State& x = s.state;
  const Inputs& in = s.inputs;
  const int b = model.b();
  const int n = model.n();
  const FkCache cache = forward_kinematics(model, x.h, x.q);
  const MassBlocks blocks = mass_blocks(model, cache);
  const MassPartials d = mass_partials(model, x.q);
  const MatrixXd& A = blocks.A;

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(blocks.full(), Eigen::EigenvaluesOnly);
  acc.add("mass_matrix_definiteness", (b + n > 0 && eig.eigenvalues()(0) <= 0.0) ? 1.0 : 0.0, 0.0);

  // Power balance of both port-Hamiltonian forms.
  const PhVectorField f = ph_standard_field(model, x, in);
  const double power = f.w.dot(f.output) + f.tau.dot(f.q_dot);
  acc.add("power_balance", rel(f.gradient.dot(f.rate()), power), 1e-10);

  const DecoupledState xh = decouple(blocks, x);
  const PhVectorField g = ph_decoupled_field(model, xh, in);
  const double power_hat = g.w.dot(g.output) + g.tau.dot(g.q_dot);
  acc.add("power_balance_decoupled", rel(g.gradient.dot(g.rate()), power_hat), 1e-10);
  acc.add("supplied_power_agreement", rel(power_hat, power), 1e-10);

  // Structure matrices.
  const MatrixXd adt = base_ad_tilde(model, x.p);
  const MatrixXd L = l_map(d, x.p);
  const MatrixXd B = b_map(adt, A, L);
  acc.add("skew_interconnection", skew_residual(interconnection(adt, n)), 1e-12);
  acc.add("skew_interconnection_decoupled", skew_residual(interconnection_decoupled(adt, A, B)), 1e-12);
  acc.add("skew_B", skew_residual(B), 1e-12);

  const VectorXd& v_hat = g.output;
  const VectorXd& q_dot = g.q_dot;
  const MatrixXd Eb = e_b_map(d, v_hat);
  const MatrixXd Pb = n > 0 ? p_b_map(d, q_dot) : MatrixXd::Zero(b, b);
  const MatrixXd Cm = c_m_hat_map(d, q_dot);
  const MatrixXd C1 = c1_hat_map(Pb, Eb, Cm);
  acc.add("c1_hat_structure",
          (C1.topRightCorner(b, n) - Eb).norm() + (C1.bottomLeftCorner(n, b) + Eb.transpose()).norm(), 1e-12);

  // Mass-matrix rate and gradient identities.
  if (n > 0) {
    acc.add("mass_rate_identity_Mm_hat", rel(directional(d.dMm_hat, q_dot) * q_dot, (Cm + Cm.transpose()) * q_dot),
            1e-8);
    acc.add("mass_rate_identity_Mb", rel(directional(d.dMb, q_dot) * v_hat, Eb * q_dot + Pb * v_hat), 1e-8);
    acc.add("gradient_identity_Nb", rel(n_b_map(d, xh.p_hat).transpose() * xh.p_hat, -Eb.transpose() * v_hat), 1e-8);
    acc.add("gradient_identity_Nm_hat", rel(n_m_hat_map(d, xh.pi_hat).transpose() * xh.pi_hat, -Cm.transpose() * q_dot),
            1e-8);
    double inv = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto kk = static_cast<size_t>(k);
      inv = std::max(inv, rel(d.dMb_inv[kk], -blocks.Mb_inv * d.dMb[kk] * blocks.Mb_inv));
      inv = std::max(inv, rel(d.dMm_hat_inv[kk], -blocks.Mm_hat_inv * d.dMm_hat[kk] * blocks.Mm_hat_inv));
    }
    acc.add("inverse_derivative_identity", inv, 1e-9);
  }

  // Hamel coefficient antisymmetries.
  const HamelCoefficients gamma = hamel_coefficients(base_structure_constants(model), blocks, d);
  double hamel = 0.0;
  for (int K = 0; K < b; ++K) {
    for (int I = 0; I < b; ++I) {
      for (int J = 0; J < b; ++J) hamel = std::max(hamel, std::abs(gamma.IJ(I, J, K) + gamma.IJ(J, I, K)));
      for (int j = 0; j < n; ++j) hamel = std::max(hamel, std::abs(gamma.Ij(I, j, K) + gamma.iJ(j, I, K)));
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) hamel = std::max(hamel, std::abs(gamma.ij(i, j, K) + gamma.ij(j, i, K)));
  }
  acc.add("hamel_antisymmetry", hamel, 1e-12);

  // Momentum maps against the Legendre transform of the decoupled Lagrangian.
  const VectorXd v_leg = f.output + A * f.q_dot;
  acc.add("momentum_maps",
          std::max(b > 0 ? rel(blocks.Mb * v_leg, xh.p_hat) : 0.0, rel(blocks.Mm_hat * f.q_dot, xh.pi_hat)), 1e-10);

  // Equivalence of the three formulations.
  const VectorXd transported = phi_map(A, L) * f.rate();
  acc.add("phi_transport", rel(transported, g.rate()), 1e-7);

  const AccelerationPair from_std = accelerations_from_rate(blocks, d, transported, v_hat, q_dot);
  const AccelerationPair from_dec = accelerations_from_rate(blocks, d, g.rate(), v_hat, q_dot);
  const VelocityState vs{x.h, x.q, v_hat, q_dot};
  const Accelerations el = reduced_el_accelerations(model, vs, in);
  const VectorXd a_std = stack(from_std.v_hat_dot, from_std.q_ddot);
  const VectorXd a_dec = stack(from_dec.v_hat_dot, from_dec.q_ddot);
  const VectorXd a_el = stack(el.v_hat_dot, el.q_ddot);
  acc.add("acceleration_equivalence", std::max({rel(a_std, a_dec), rel(a_std, a_el), rel(a_dec, a_el)}), 1e-6);

  const VectorXd supplied = stack(stack(in.base_wrench, in.joint_torque), in.ee_wrench);
  acc.add("boltzmann_hamel_residual",
          boltzmann_hamel_residual(model, vs, el, in).norm() / (1.0 + supplied.norm()), 1e-7);

  // Hamiltonian gradients against finite differences.
  const VectorXd xs = stack(stack(x.p, x.q), x.pi);
  const VectorXd fd_std = fd_gradient(xs, [&](const VectorXd& y) {
    const VectorXd q = y.segment(b, n);
    return kinetic_energy(mass_blocks(model, q), State{x.h, q, y.head(b), y.tail(n)});
  });
  acc.add("gradient_fd_standard", rel(f.gradient, fd_std), 1e-6);

  const VectorXd xd = stack(stack(xh.p_hat, x.q), xh.pi_hat);
  const VectorXd fd_dec = fd_gradient(xd, [&](const VectorXd& y) {
    const VectorXd q = y.segment(b, n);
    return kinetic_energy(mass_blocks(model, q), DecoupledState{x.h, q, y.head(b), y.tail(n)});
  });
  acc.add("gradient_fd_decoupled", rel(g.gradient, fd_dec), 1e-6);

  if (model.potential == Potential::UniformGravity) {
    const VectorXd dq = fd_gradient(x.q, [&](const VectorXd& q) {
      return potential_energy(model, forward_kinematics(model, x.h, q));
    });
    double grav = rel(-dq, gravity_joint_force(model, cache));
    if (b > 0) {
      const MatrixXd S = model.base_s_matrix();
      const VectorXd dh = fd_gradient(VectorXd::Zero(b), [&](const VectorXd& e) {
        FkCache moved = cache;
        moved.base = cache.base * exp_se3(S * e, 1.0);
        return potential_energy(model, moved);
      });
      grav = std::max(grav, rel(-dh, gravity_base_wrench(model, cache)));
    }
    acc.add("gravity_gradient_fd", grav, 1e-6);
  }
}

}  // namespace

Sample StateSampler::next() {
  const int b = model_.b();
  const int n = model_.n();
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Sample s;
  s.state.h = random_base();
  s.state.q = VectorXd(n);
  for (int i = 0; i < n; ++i) s.state.q(i) = unit(rng_);
  const VectorXd diag = mass_blocks(model_, s.state.q).full().diagonal();
  const VectorXd m = normal(b + n).cwiseProduct(diag);
  s.state.p = m.head(b);
  s.state.pi = m.tail(n);
  s.inputs.base_wrench = normal(b);
  s.inputs.joint_torque = normal(n);
  s.inputs.ee_wrench = normal(6);
  s.inputs.gravity = true;
  return s;
}

JointConfig StateSampler::random_base() {
  switch (model_.base.joint.type) {
    case JointType::Floating:
      return exp_se3(Twist(normal(6)), 1.0);
    case JointType::Planar: {
      std::uniform_real_distribution<double> angle(-M_PI, M_PI);
      const double theta = angle(rng_);
      const VectorXd xy = normal(2);
      return PlanarConfig{theta, xy(0), xy(1)};
    }
    default:
      return std::monostate{};
  }
}

VectorXd StateSampler::normal(int size) {
  std::normal_distribution<double> dist(0.0, 1.0);
  VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = dist(rng_);
  return v;
}

bool ValidationReport::all_pass() const {
  for (const CheckResult& c : checks) {
    if (!c.pass()) return false;
  }
  return true;
}

std::string ValidationReport::format() const {
  std::ostringstream out;
  out << "seed " << seed << "\n";
  out << "samples " << samples << "\n";
  char line[256];
  for (const CheckResult& c : checks) {
    std::snprintf(line, sizeof line, "CHECK %s %.3e %.1e %s\n", c.name.c_str(), c.max_residual, c.threshold,
                  c.pass() ? "PASS" : "FAIL");
    out << line;
  }
  return out.str();
}

ValidationReport validate(const VmsModel& model, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sample count must be at least 1");
  StateSampler sampler(model, seed);
  Accumulator acc;
  for (int i = 0; i < samples; ++i) check_sample(model, sampler.next(), acc);
  ValidationReport report;
  report.seed = seed;
  report.samples = samples;
  report.checks = acc.take();
  return report;
}

}  // namespace vms
