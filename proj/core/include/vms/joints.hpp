#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vms/liegroup.hpp"

namespace vms {

enum class JointType { Revolute, Prismatic, Planar, Floating, Fixed };

const char* to_string(JointType type);

/**
 * Joint subgroup of SE(3).
 *
 * Revolute joints rotate about `axis` through `point`; prismatic joints
 * translate along `axis`. Both vectors are expressed in the child frame.
 * Planar joints move in the xy-plane of the joint frame (normal along z).
 */
struct JointKind {
  JointType type = JointType::Fixed;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d point = Eigen::Vector3d::Zero();

  static JointKind Revolute(const Eigen::Vector3d& axis, const Eigen::Vector3d& point = Eigen::Vector3d::Zero());
  static JointKind Prismatic(const Eigen::Vector3d& axis);
  static JointKind Planar() { return {JointType::Planar, Eigen::Vector3d::UnitZ(), Eigen::Vector3d::Zero()}; }
  static JointKind Floating() { return {JointType::Floating, Eigen::Vector3d::UnitZ(), Eigen::Vector3d::Zero()}; }
  static JointKind Fixed() { return {}; }

  /// Dimension b of the joint velocity space.
  int dof() const;
};

/// Planar joint chart (theta, xi_x, xi_y). theta is unbounded during integration.
struct PlanarConfig {
  double theta = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// Configuration tagged by joint kind: Fixed -> monostate, 1-DoF -> double,
/// Planar -> PlanarConfig, Floating -> Pose.
using JointConfig = std::variant<std::monostate, double, PlanarConfig, Pose>;

/// Time derivative of a JointConfig: 1-DoF -> double, Planar -> chart rates
/// (theta_dot, x_dot, y_dot), Floating -> dH/dt as a 4x4 matrix.
using ConfigRate = std::variant<std::monostate, double, Eigen::Vector3d, Eigen::Matrix4d>;

/// Configuration at which joint_pose returns the zero pose.
JointConfig zero_config(const JointKind& kind);

/// Throws std::invalid_argument when the variant alternative does not match the kind.
void check_config(const JointKind& kind, const JointConfig& q);

/// Relative pose H_i^j(q) = Z * phi(q) of the joint frame.
Pose joint_pose(const JointKind& kind, const Pose& zero_pose, const JointConfig& q);

/// Config rate q_dot = chi_q(vel) for a joint velocity of dimension dof().
ConfigRate chi(const JointKind& kind, const JointConfig& q, const Eigen::VectorXd& vel);

/// 3x3 matrix of chi for planar joints; the identity block structure of the chart.
Eigen::Matrix3d planar_chi_matrix(double theta);

/// 6 x dof matrix S with body twist = S * vel. Fixed joints give a 6 x 0 matrix.
Eigen::MatrixXd s_matrix(const JointKind& kind);

/**
 * Structure constants c_IJ^K of the Lie algebra of a base joint, defined by
 * ad_{e_I} e_J = c_IJ^K e_K with e_I the columns of the joint's S matrix.
 */
class StructureConstants {
 public:
  explicit StructureConstants(int dim = 0) : dim_(dim), data_(static_cast<size_t>(dim * dim * dim), 0.0) {}

  int dim() const { return dim_; }
  double operator()(int I, int J, int K) const { return data_[index(I, J, K)]; }
  double& operator()(int I, int J, int K) { return data_[index(I, J, K)]; }

 private:
  size_t index(int I, int J, int K) const { return static_cast<size_t>((I * dim_ + J) * dim_ + K); }

  int dim_;
  std::vector<double> data_;
};

/// Computed from ad_op on the S basis. Throws std::invalid_argument unless
/// the kind is Planar or Floating.
StructureConstants structure_constants(const JointKind& kind);

/// [ad~_p]_IJ = -c_IJ^K p_K.
Eigen::MatrixXd ad_dual_tilde_from_constants(const StructureConstants& c, const Eigen::VectorXd& p);

}  // namespace vms
