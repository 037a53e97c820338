#include "vms/liegroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vms {

namespace {

constexpr double kSmallAngle = 1e-8;
constexpr double kSeriesAngle = 1e-2;

// Coefficients sin(t)/t, (1-cos t)/t^2, (t - sin t)/t^3.
struct ExpCoefficients {
  double a;
  double b;
  double c;
};

ExpCoefficients exp_coefficients(double theta) {
  const double t2 = theta * theta;
  if (theta < kSmallAngle) return {1.0 - t2 / 6.0, 0.5 - t2 / 24.0, 1.0 / 6.0 - t2 / 120.0};
  const double half_sinc = std::sin(0.5 * theta) / theta;
  // (1 - cos t) written as 2 sin^2(t/2) and (t - sin t) by series below
  // kSeriesAngle: both forms cancel catastrophically for small t.
  const double c = theta < kSeriesAngle
                       ? 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0 - t2 * t2 * t2 / 362880.0
                       : (theta - std::sin(theta)) / (t2 * theta);
  return {std::sin(theta) / theta, 2.0 * half_sinc * half_sinc, c};
}

}  // namespace

bool is_rotation(const Eigen::Matrix3d& R, double tol) {
  if (!R.allFinite()) return false;
  const double orth = (R * R.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return orth <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

Pose Pose::FromMatrix(const Eigen::Matrix4d& H) {
  return Pose(H.topLeftCorner<3, 3>(), H.topRightCorner<3, 1>());
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d H = Eigen::Matrix4d::Identity();
  H.topLeftCorner<3, 3>() = rotation_;
  H.topRightCorner<3, 1>() = translation_;
  return H;
}

Pose Pose::normalized() const {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(rotation_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0) {
    Eigen::Matrix3d U = svd.matrixU();
    U.col(2) *= -1.0;
    R = U * svd.matrixV().transpose();
  }
  return Pose(R, translation_);
}

Eigen::Matrix3d hat3(const Eigen::Vector3d& w) {
  Eigen::Matrix3d W;
  W << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return W;
}

Eigen::Vector3d vee3(const Eigen::Matrix3d& W) {
  return Eigen::Vector3d(W(2, 1), W(0, 2), W(1, 0));
}

Eigen::Matrix4d hat6(const Twist& V) {
  Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
  T.topLeftCorner<3, 3>() = hat3(V.head<3>());
  T.topRightCorner<3, 1>() = V.tail<3>();
  return T;
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const ExpCoefficients k = exp_coefficients(theta);
  const Eigen::Matrix3d W = hat3(omega);
  return Eigen::Matrix3d::Identity() + k.a * W + k.b * W * W;
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& R) {
  const double cos_theta = std::clamp((R.trace() - 1.0) * 0.5, -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  const Eigen::Vector3d axis_part = vee3(R - R.transpose());  // 2 sin(theta) * axis
  if (theta < kSmallAngle) {
    return 0.5 * (1.0 + theta * theta / 6.0) * axis_part;
  }
  return theta / (2.0 * std::sin(theta)) * axis_part;
}

Pose exp_se3(const Twist& V, double dt) {
  const Eigen::Vector3d w = V.head<3>() * dt;
  const Eigen::Vector3d v = V.tail<3>() * dt;
  const double theta = w.norm();
  const ExpCoefficients k = exp_coefficients(theta);
  const Eigen::Matrix3d W = hat3(w);
  const Eigen::Matrix3d W2 = W * W;
  const Eigen::Matrix3d R = Eigen::Matrix3d::Identity() + k.a * W + k.b * W2;
  const Eigen::Matrix3d left_jacobian = Eigen::Matrix3d::Identity() + k.b * W + k.c * W2;
  return Pose(R, left_jacobian * v);
}

Twist log_se3(const Pose& H) {
  const Eigen::Vector3d w = log_so3(H.rotation());
  const double theta = w.norm();
  const Eigen::Matrix3d W = hat3(w);
  Eigen::Matrix3d inv_left_jacobian;
  if (theta < kSmallAngle) {
    inv_left_jacobian = Eigen::Matrix3d::Identity() - 0.5 * W + (1.0 / 12.0) * W * W;
  } else {
    const double half = 0.5 * theta;
    const double coeff = (1.0 - half * std::cos(half) / std::sin(half)) / (theta * theta);
    inv_left_jacobian = Eigen::Matrix3d::Identity() - 0.5 * W + coeff * W * W;
  }
  Twist V;
  V << w, inv_left_jacobian * H.translation();
  return V;
}

Matrix6d adjoint(const Pose& H) {
  const Eigen::Matrix3d& R = H.rotation();
  Matrix6d Ad = Matrix6d::Zero();
  Ad.topLeftCorner<3, 3>() = R;
  Ad.bottomLeftCorner<3, 3>() = hat3(H.translation()) * R;
  Ad.bottomRightCorner<3, 3>() = R;
  return Ad;
}

Matrix6d ad_op(const Twist& V) {
  const Eigen::Matrix3d W = hat3(V.head<3>());
  Matrix6d ad = Matrix6d::Zero();
  ad.topLeftCorner<3, 3>() = W;
  ad.bottomLeftCorner<3, 3>() = hat3(V.tail<3>());
  ad.bottomRightCorner<3, 3>() = W;
  return ad;
}

Matrix6d ad_dual_tilde(const Wrench& p) {
  // ad_v^T p = (p_w x w + p_f x v ; p_f x w)
  const Eigen::Matrix3d Pw = hat3(p.head<3>());
  const Eigen::Matrix3d Pf = hat3(p.tail<3>());
  Matrix6d X = Matrix6d::Zero();
  X.topLeftCorner<3, 3>() = Pw;
  X.topRightCorner<3, 3>() = Pf;
  X.bottomLeftCorner<3, 3>() = Pf;
  return X;
}

Eigen::MatrixXd ad_dual_tilde(const Eigen::VectorXd& p, const Eigen::MatrixXd& S) {
  if (S.rows() != 6 || p.size() != S.cols()) {
    throw std::invalid_argument("ad_dual_tilde: momentum has dimension " + std::to_string(p.size()) +
                                " but the subalgebra basis has " + std::to_string(S.cols()) +
                                " columns");
  }
  if (S.cols() == 0) return Eigen::MatrixXd(0, 0);
  // Lift p to a 6-wrench P with S^T P = p via the pseudo-inverse, then restrict.
  const Eigen::MatrixXd pinv = S.completeOrthogonalDecomposition().pseudoInverse();
  const Wrench P = pinv.transpose() * p;
  const Eigen::MatrixXd X = S.transpose() * ad_dual_tilde(P) * S;
  // Symmetric rounding noise from the triple product is removed.
  return 0.5 * (X - X.transpose());
}

}  // namespace vms
