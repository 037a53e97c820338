#pragma once

#include <Eigen/Dense>

namespace vms {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Rotation matrices are plain 3x3 orthonormal matrices with det = +1.
using Rotation = Eigen::Matrix3d;

/// se(3) element stacked angular-first: (omega; v).
using Twist = Vector6d;

/// Dual of a twist, stacked (torque; force). The pairing wrench.dot(twist) is power.
using Wrench = Vector6d;

bool is_rotation(const Eigen::Matrix3d& R, double tol = 1e-12);

/**
 * Element of SE(3) stored as (rotation, translation).
 *
 * For a pose H_b^a, rotation() is R_b^a and translation() is the origin of
 * frame {b} expressed in {a}. The 4x4 homogeneous matrix is only a view.
 */
class Pose {
 public:
  Pose() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}
  Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
      : rotation_(rotation), translation_(translation) {}

  static Pose Identity() { return Pose(); }
  static Pose FromMatrix(const Eigen::Matrix4d& H);
  static Pose Translation(const Eigen::Vector3d& t) { return Pose(Eigen::Matrix3d::Identity(), t); }

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Pose operator*(const Pose& rhs) const {
    return Pose(rotation_ * rhs.rotation_, rotation_ * rhs.translation_ + translation_);
  }
  Eigen::Vector3d operator*(const Eigen::Vector3d& point) const {
    return rotation_ * point + translation_;
  }

  Pose inverse() const {
    const Eigen::Matrix3d Rt = rotation_.transpose();
    return Pose(Rt, -Rt * translation_);
  }

  Eigen::Matrix4d matrix() const;

  /// Re-orthonormalize the rotation (polar projection). Integration drift only.
  Pose normalized() const;

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// Skew matrix such that hat3(w) * x == w.cross(x).
Eigen::Matrix3d hat3(const Eigen::Vector3d& w);
Eigen::Vector3d vee3(const Eigen::Matrix3d& W);

/// 4x4 matrix form of a twist.
Eigen::Matrix4d hat6(const Twist& V);

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& omega);
/// Rotation vector of R; valid for rotation angles in [0, pi).
Eigen::Vector3d log_so3(const Eigen::Matrix3d& R);

/// exp(hat6(V) * dt), closed form with a Taylor branch for small angles.
Pose exp_se3(const Twist& V, double dt = 1.0);
Twist log_se3(const Pose& H);

/// Ad_H = [[R, 0], [hat3(xi) R, R]]. Maps body twists of {b} to {a} for H = H_b^a.
Matrix6d adjoint(const Pose& H);

/// ad_V = [[hat3(w), 0], [hat3(v), hat3(w)]].
Matrix6d ad_op(const Twist& V);

/// Matrix X(p) with X(p) * v == ad_op(v)^T * p for all v. Skew-symmetric.
Matrix6d ad_dual_tilde(const Wrench& p);

/**
 * ad~ restricted to the subalgebra spanned by the columns of S (6 x b).
 *
 * Returns the b x b skew matrix X with X * vbar == (ad_g(vbar))^T * p, where
 * ad_g(vbar) = pinv(S) * ad_op(S vbar) * S is the bracket of the subalgebra.
 * Throws std::invalid_argument if p.size() != S.cols().
 */
Eigen::MatrixXd ad_dual_tilde(const Eigen::VectorXd& p, const Eigen::MatrixXd& S);

}  // namespace vms
