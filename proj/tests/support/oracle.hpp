#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vms/dynamics.hpp"
#include "vms/model.hpp"

// Reference implementations used to cross-check the library. They work on
// 4x4 homogeneous matrices and matrix exponentials and share no code with the
// library beyond reading model data.
namespace oracle {

using Eigen::Matrix3d;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

std::filesystem::path model_path(const std::string& name);
vms::VmsModel fixture(const std::string& name);

/// Fixtures covering every base kind.
const std::vector<std::string>& fixture_names();

double rel(const MatrixXd& a, const MatrixXd& b);
double rel(double a, double b);

Matrix3d cross_matrix(const Vector3d& w);
Matrix4d twist_matrix(const Vector6d& V);
Vector6d twist_vector(const Matrix4d& X);
Matrix4d homogeneous(const Matrix3d& R, const Vector3d& t);

/// Matrix exponential of the 4x4 twist matrix (Pade, no closed form).
Matrix4d expm(const Vector6d& V, double t = 1.0);
Matrix3d rodrigues(const Vector3d& axis, double angle);

/// Twist transform by conjugation: returns the 6x6 matrix of U -> H U H^-1.
Matrix6d conjugation(const Matrix4d& H);
/// Bracket matrix of U -> [V, U] built from matrix commutators.
Matrix6d bracket(const Vector6d& V);

/// Base frame in the spatial frame from the raw configuration.
Matrix4d base_frame(const vms::VmsModel& model, const vms::JointConfig& h);
/// Link frames relative to the base, H_i^b.
std::vector<Matrix4d> link_frames(const vms::VmsModel& model, const VectorXd& q);
Matrix4d end_effector_frame(const vms::VmsModel& model, const VectorXd& q);
/// 6 x b basis of the base joint subspace.
MatrixXd base_basis(const vms::VmsModel& model);

/**
 * Body twist Jacobian of `frame` (a frame rigidly attached to link `link`, given
 * relative to the base) with respect to (v, q_dot): 6 x (b + n). Built from
 * the spatial joint axes; link = -1 denotes the base itself.
 */
MatrixXd body_jacobian(const vms::VmsModel& model, const VectorXd& q, int link, const Matrix4d& frame);

/// Full mass matrix as the sum of J^T I J over all bodies.
MatrixXd mass_matrix(const vms::VmsModel& model, const VectorXd& q);

/// Body mass and center of mass read directly from the spatial inertia.
double mass_of(const Matrix6d& inertia);
Vector3d com_of(const Matrix6d& inertia);

/// Height energy of all bodies in the uniform field `model.gravity`.
double potential(const vms::VmsModel& model, const vms::JointConfig& h, const VectorXd& q);

/// Weight wrench of all bodies, summed in the base frame with joints locked.
Vector6d weight_wrench_at_base(const vms::VmsModel& model, const vms::JointConfig& h, const VectorXd& q);

/// Euler-Poincare rate I V_dot = [V, .]^T I V + W for a single rigid body.
Vector6d euler_poincare_rate(const Matrix6d& inertia, const Vector6d& V, const Vector6d& W);

/**
 * Fixed-base manipulator accelerations from the Lagrangian
 * M q_ddot + C q_dot + g = tau + J_e^T W, with dM/dq and g by five-point
 * differences of the oracle mass matrix and potential.
 */
VectorXd manipulator_accelerations(const vms::VmsModel& model, const VectorXd& q, const VectorXd& q_dot,
                                   const VectorXd& tau, const Vector6d& ee_wrench, bool gravity);

/// Kinetic energy 1/2 y^T M(q)^-1 y from the oracle mass matrix.
double kinetic_energy_from_momentum(const vms::VmsModel& model, const VectorXd& q, const VectorXd& momentum);

/// Distance between two states: base frame difference plus momentum and joint differences.
double state_distance(const vms::VmsModel& model, const vms::State& a, const vms::State& b);

/// Central difference gradient of a scalar function.
template <typename F>
VectorXd central_gradient(const VectorXd& x, F&& f, double step = 1e-6) {
  VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = step * std::max(1.0, std::abs(x(k)));
    VectorXd xp = x;
    VectorXd xm = x;
    xp(k) += h;
    xm(k) -= h;
    g(k) = (f(xp) - f(xm)) / (xp(k) - xm(k));
  }
  return g;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  VectorXd normal(int size);
  VectorXd uniform(int size, double lo, double hi);
  Matrix4d random_pose();
  Vector6d unit_twist();

 private:
  std::mt19937_64 gen_;
};

}  // namespace oracle
