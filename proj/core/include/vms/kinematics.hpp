#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vms/joints.hpp"
#include "vms/liegroup.hpp"
#include "vms/model.hpp"

namespace vms {

/// Poses of every frame of the chain. Link indices are 0-based: links[i] is H_{i+1}^b.
struct FkCache {
  Pose base;                 // H_b^s = phi_b(h)
  std::vector<Pose> links;   // H_i^b
  std::vector<Pose> local;   // H_i^{i-1}, joint motion included
  Pose end_effector;         // H_e^b
};

/// H_b^s for a base configuration (identity for fixed bases).
Pose base_pose(const VmsModel& model, const JointConfig& h);

/// Throws std::invalid_argument if q.size() != model.n() or h does not match the base kind.
FkCache forward_kinematics(const VmsModel& model, const JointConfig& h, const Eigen::VectorXd& q);

/// Configuration-only variant with the base at the identity; sufficient for
/// everything that depends on q alone (mass matrices, base-relative Jacobians).
FkCache forward_kinematics(const VmsModel& model, const Eigen::VectorXd& q);

/// J_i^{i,b}: 6 x n, columns after `link` are zero. Throws std::out_of_range.
Eigen::MatrixXd link_jacobian_base(const VmsModel& model, const FkCache& cache, int link);

/// J_i^{i,s} = [Ad_{H_b^i} S_b, J_i^{i,b}]: 6 x (b + n).
Eigen::MatrixXd link_jacobian_spatial(const VmsModel& model, const FkCache& cache, int link);

/// J_e = J_e^{e,b}: 6 x n manipulator Jacobian of the end effector.
Eigen::MatrixXd end_effector_jacobian(const VmsModel& model, const FkCache& cache);

/// [Ad_{H_b^e} S_b, J_e]: 6 x (b + n).
Eigen::MatrixXd end_effector_jacobian_spatial(const VmsModel& model, const FkCache& cache);

}  // namespace vms
