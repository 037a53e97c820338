#include "vms/kinematics.hpp"

#include <stdexcept>
#include <string>

namespace vms {

namespace {

void check_q(const VmsModel& model, const Eigen::VectorXd& q) {
  if (q.size() != model.n()) {
    throw std::invalid_argument("joint vector has " + std::to_string(q.size()) + " entries, model has " +
                                std::to_string(model.n()) + " joints");
  }
}

// Columns Ad_{H_j^f} S_j for j <= last, where {f} is rigidly attached to link
// `last` at offset H_f^last. Relative poses are composed from the local joint
// transforms so that joints upstream of j never enter column j.
Eigen::MatrixXd chain_jacobian(const VmsModel& model, const FkCache& cache, const Pose& offset, int last) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, model.n());
  Pose frame_in_j = offset;  // H_f^j
  for (int j = last; j >= 0; --j) {
    const Twist S = s_matrix(model.links[static_cast<size_t>(j)].joint).col(0);
    J.col(j) = adjoint(frame_in_j.inverse()) * S;
    frame_in_j = cache.local[static_cast<size_t>(j)] * frame_in_j;
  }
  return J;
}

Eigen::MatrixXd with_base_block(const VmsModel& model, const Pose& frame_in_base, const Eigen::MatrixXd& Jb) {
  const int b = model.b();
  Eigen::MatrixXd J(6, b + model.n());
  if (b > 0) J.leftCols(b) = adjoint(frame_in_base.inverse()) * model.base_s_matrix();
  J.rightCols(model.n()) = Jb;
  return J;
}

void check_link(const VmsModel& model, int link) {
  if (link < 0 || link >= model.n()) {
    throw std::out_of_range("link index " + std::to_string(link) + " outside [0, " + std::to_string(model.n()) + ")");
  }
}

}  // namespace

Pose base_pose(const VmsModel& model, const JointConfig& h) {
  return joint_pose(model.base.joint, Pose::Identity(), h);
}

FkCache forward_kinematics(const VmsModel& model, const JointConfig& h, const Eigen::VectorXd& q) {
  FkCache cache = forward_kinematics(model, q);
  cache.base = base_pose(model, h);
  return cache;
}

FkCache forward_kinematics(const VmsModel& model, const Eigen::VectorXd& q) {
  check_q(model, q);
  FkCache cache;
  cache.links.reserve(model.links.size());
  cache.local.reserve(model.links.size());
  Pose parent = Pose::Identity();
  for (int i = 0; i < model.n(); ++i) {
    const LinkSpec& link = model.links[static_cast<size_t>(i)];
    cache.local.push_back(joint_pose(link.joint, link.zero_pose, q(i)));
    parent = parent * cache.local.back();
    cache.links.push_back(parent);
  }
  cache.end_effector = parent * model.end_effector;
  return cache;
}

Eigen::MatrixXd link_jacobian_base(const VmsModel& model, const FkCache& cache, int link) {
  check_link(model, link);
  return chain_jacobian(model, cache, Pose::Identity(), link);
}

Eigen::MatrixXd link_jacobian_spatial(const VmsModel& model, const FkCache& cache, int link) {
  check_link(model, link);
  const Pose& H = cache.links[static_cast<size_t>(link)];
  return with_base_block(model, H, chain_jacobian(model, cache, Pose::Identity(), link));
}

Eigen::MatrixXd end_effector_jacobian(const VmsModel& model, const FkCache& cache) {
  return chain_jacobian(model, cache, model.end_effector, model.n() - 1);
}

Eigen::MatrixXd end_effector_jacobian_spatial(const VmsModel& model, const FkCache& cache) {
  return with_base_block(model, cache.end_effector, end_effector_jacobian(model, cache));
}

}  // namespace vms
