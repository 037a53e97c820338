#include "vms/joints.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vms {

namespace {

void require_unit(const Eigen::Vector3d& axis, const char* what) {
  if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) + " axis must have unit norm");
  }
}

void require_dim(const JointKind& kind, const Eigen::VectorXd& vel) {
  if (vel.size() != kind.dof()) {
    throw std::invalid_argument(std::string("joint velocity for ") + to_string(kind.type) + " joint has dimension " +
                                std::to_string(vel.size()) + ", expected " + std::to_string(kind.dof()));
  }
}

}  // namespace

const char* to_string(JointType type) {
  switch (type) {
    case JointType::Revolute: return "revolute";
    case JointType::Prismatic: return "prismatic";
    case JointType::Planar: return "planar";
    case JointType::Floating: return "floating";
    case JointType::Fixed: return "fixed";
  }
  return "unknown";
}

JointKind JointKind::Revolute(const Eigen::Vector3d& axis, const Eigen::Vector3d& point) {
  require_unit(axis, "revolute");
  return {JointType::Revolute, axis, point};
}

JointKind JointKind::Prismatic(const Eigen::Vector3d& axis) {
  require_unit(axis, "prismatic");
  return {JointType::Prismatic, axis, Eigen::Vector3d::Zero()};
}

int JointKind::dof() const {
  switch (type) {
    case JointType::Revolute:
    case JointType::Prismatic: return 1;
    case JointType::Planar: return 3;
    case JointType::Floating: return 6;
    case JointType::Fixed: return 0;
  }
  return 0;
}

JointConfig zero_config(const JointKind& kind) {
  switch (kind.type) {
    case JointType::Revolute:
    case JointType::Prismatic: return 0.0;
    case JointType::Planar: return PlanarConfig{};
    case JointType::Floating: return Pose::Identity();
    case JointType::Fixed: return std::monostate{};
  }
  return std::monostate{};
}

void check_config(const JointKind& kind, const JointConfig& q) {
  bool ok = false;
  switch (kind.type) {
    case JointType::Revolute:
    case JointType::Prismatic: ok = std::holds_alternative<double>(q); break;
    case JointType::Planar: ok = std::holds_alternative<PlanarConfig>(q); break;
    case JointType::Floating: ok = std::holds_alternative<Pose>(q); break;
    case JointType::Fixed: ok = std::holds_alternative<std::monostate>(q); break;
  }
  if (!ok) {
    throw std::invalid_argument(std::string("configuration does not match ") + to_string(kind.type) + " joint");
  }
}

Eigen::Matrix3d planar_chi_matrix(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix3d X;
  X << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return X;
}

Pose joint_pose(const JointKind& kind, const Pose& zero_pose, const JointConfig& q) {
  check_config(kind, q);
  switch (kind.type) {
    case JointType::Revolute:
    case JointType::Prismatic: {
      const Twist S = s_matrix(kind).col(0);
      return zero_pose * exp_se3(S, std::get<double>(q));
    }
    case JointType::Planar: {
      const auto& c = std::get<PlanarConfig>(q);
      Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
      R(0, 0) = std::cos(c.theta);
      R(0, 1) = -std::sin(c.theta);
      R(1, 0) = std::sin(c.theta);
      R(1, 1) = std::cos(c.theta);
      return zero_pose * Pose(R, Eigen::Vector3d(c.x, c.y, 0.0));
    }
    case JointType::Floating: return zero_pose * std::get<Pose>(q);
    case JointType::Fixed: return zero_pose;
  }
  return zero_pose;
}

ConfigRate chi(const JointKind& kind, const JointConfig& q, const Eigen::VectorXd& vel) {
  check_config(kind, q);
  require_dim(kind, vel);
  switch (kind.type) {
    case JointType::Revolute:
    case JointType::Prismatic: return vel(0);
    case JointType::Planar: {
      const Eigen::Vector3d rates = planar_chi_matrix(std::get<PlanarConfig>(q).theta) * vel.head<3>();
      return rates;
    }
    case JointType::Floating: {
      const Twist V = vel.head<6>();
      const Eigen::Matrix4d Hdot = std::get<Pose>(q).matrix() * hat6(V);
      return Hdot;
    }
    case JointType::Fixed: return std::monostate{};
  }
  return std::monostate{};
}

Eigen::MatrixXd s_matrix(const JointKind& kind) {
  switch (kind.type) {
    case JointType::Revolute: {
      Eigen::MatrixXd S(6, 1);
      S << kind.axis, kind.point.cross(kind.axis);
      return S;
    }
    case JointType::Prismatic: {
      Eigen::MatrixXd S(6, 1);
      S << Eigen::Vector3d::Zero(), kind.axis;
      return S;
    }
    case JointType::Planar: {
      // Columns select (omega_z, v_x, v_y).
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(6, 3);
      S(2, 0) = 1.0;
      S(3, 1) = 1.0;
      S(4, 2) = 1.0;
      return S;
    }
    case JointType::Floating: return Eigen::MatrixXd::Identity(6, 6);
    case JointType::Fixed: return Eigen::MatrixXd(6, 0);
  }
  return Eigen::MatrixXd(6, 0);
}

StructureConstants structure_constants(const JointKind& kind) {
  if (kind.type != JointType::Planar && kind.type != JointType::Floating) {
    throw std::invalid_argument(std::string("structure constants requested for non-base joint kind ") +
                                to_string(kind.type));
  }
  const Eigen::MatrixXd S = s_matrix(kind);
  const int b = static_cast<int>(S.cols());
  const Eigen::MatrixXd pinv = S.completeOrthogonalDecomposition().pseudoInverse();
  StructureConstants c(b);
  for (int I = 0; I < b; ++I) {
    const Matrix6d ad = ad_op(S.col(I));
    for (int J = 0; J < b; ++J) {
      const Eigen::VectorXd bracket = pinv * (ad * S.col(J));
      for (int K = 0; K < b; ++K) c(I, J, K) = bracket(K);
    }
  }
  return c;
}

Eigen::MatrixXd ad_dual_tilde_from_constants(const StructureConstants& c, const Eigen::VectorXd& p) {
  const int b = c.dim();
  if (p.size() != b) throw std::invalid_argument("ad_dual_tilde_from_constants: dimension mismatch");
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(b, b);
  for (int I = 0; I < b; ++I)
    for (int J = 0; J < b; ++J)
      for (int K = 0; K < b; ++K) X(I, J) -= c(I, J, K) * p(K);
  return X;
}

}  // namespace vms
