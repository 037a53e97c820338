#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vms/joints.hpp"
#include "vms/liegroup.hpp"

namespace vms {

/// Raised for unreadable or malformed model files and for invariant violations.
/// The message names the offending field (e.g. "links[1].inertia").
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BaseSpec {
  JointKind joint = JointKind::Floating();  // Floating, Planar or Fixed
  Matrix6d inertia = Matrix6d::Zero();      // spatial inertia in the base frame
};

struct LinkSpec {
  std::string name;
  Matrix6d inertia = Matrix6d::Zero();  // spatial inertia in the link frame
  JointKind joint;                      // Revolute or Prismatic
  Pose zero_pose;                       // parent frame -> link frame at q = 0
};

enum class Potential { None, UniformGravity };

/**
 * Vehicle-manipulator system: a moving base followed by a serial chain of
 * 1-DoF links. Link i's parent is link i-1, and link 0's parent is the base.
 */
struct VmsModel {
  BaseSpec base;
  std::vector<LinkSpec> links;
  Pose end_effector;  // frame {e} relative to the last link (or the base when n = 0)
  Eigen::Vector3d gravity = Eigen::Vector3d::Zero();  // m/s^2, spatial frame
  Potential potential = Potential::UniformGravity;

  int b() const { return base.joint.dof(); }
  int n() const { return static_cast<int>(links.size()); }
  Eigen::MatrixXd base_s_matrix() const { return s_matrix(base.joint); }
};

/// Mass properties recovered from a spatial inertia.
struct MassProperties {
  double mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();
};

/// Parallel-axis assembly of a spatial inertia about the frame origin.
/// Throws ModelError for negative mass.
Matrix6d spatial_inertia_from_primitives(double mass, const Eigen::Vector3d& com,
                                         const Eigen::Matrix3d& rot_inertia_at_com);

MassProperties mass_properties(const Matrix6d& spatial_inertia);

/// Checks every model invariant; throws ModelError naming the field.
void validate_model(const VmsModel& model);

/// Parses the JSON model format. `source` appears in error messages.
VmsModel parse_model(std::string_view text, std::string_view source = "<string>");
VmsModel load_model(const std::filesystem::path& path);

/// Canonical JSON form: inertias as 6x6 arrays, rotations as 3x3 arrays.
std::string serialize_model(const VmsModel& model);
void save_model(const VmsModel& model, const std::filesystem::path& path);

}  // namespace vms
