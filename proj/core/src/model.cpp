#include "vms/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vms {

namespace {

using nlohmann::json;

constexpr double kSymmetryTolerance = 1e-9;
constexpr double kMassBlockTolerance = 1e-9;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ModelError(field + ": " + what);
}

void require_keys(const json& obj, const std::string& field, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(field, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(field, "unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& field, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(field, "missing required key '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(field, "expected a finite number");
  return x;
}

Eigen::VectorXd vector(const json& j, const std::string& field, int size) {
  if (!j.is_array() || static_cast<int>(j.size()) != size) {
    fail(field, "expected an array of " + std::to_string(size) + " numbers");
  }
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

// Accepts nested rows or a flat row-major array.
Eigen::MatrixXd matrix(const json& j, const std::string& field, int rows, int cols) {
  Eigen::MatrixXd M(rows, cols);
  if (j.is_array() && static_cast<int>(j.size()) == rows * cols && !j.empty() && j[0].is_number()) {
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) M(r, c) = number(j[r * cols + c], field);
    return M;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    fail(field, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  }
  for (int r = 0; r < rows; ++r) {
    M.row(r) = vector(j[r], field + "[" + std::to_string(r) + "]", cols).transpose();
  }
  return M;
}

Eigen::Vector3d unit_axis(const json& j, const std::string& field) {
  Eigen::Vector3d a = vector(j, field, 3);
  const double len = a.norm();
  if (len < 1e-12) fail(field, "axis must be nonzero");
  if (std::abs(len - 1.0) > 1e-14) a /= len;
  return a;
}

Eigen::Matrix3d rotation(const json& j, const std::string& field) {
  if (j.is_object()) {
    require_keys(j, field, {"axis", "angle"});
    const Eigen::Vector3d axis = unit_axis(require(j, field, "axis"), field + ".axis");
    const double angle = number(require(j, field, "angle"), field + ".angle");
    return exp_so3(axis * angle);
  }
  Eigen::Matrix3d R = matrix(j, field, 3, 3);
  if (!is_rotation(R, 1e-6)) fail(field, "not a rotation matrix (orthonormal with det +1)");
  if (!is_rotation(R, 1e-14)) R = Pose(R, Eigen::Vector3d::Zero()).normalized().rotation();
  return R;
}

Pose pose(const json& j, const std::string& field) {
  require_keys(j, field, {"rotation", "translation"});
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
  if (j.contains("rotation")) R = rotation(j["rotation"], field + ".rotation");
  if (j.contains("translation")) t = vector(j["translation"], field + ".translation", 3);
  return Pose(R, t);
}

Matrix6d inertia_of(const json& body, const std::string& field, bool required) {
  const bool has_raw = body.contains("inertia");
  const bool has_prim = body.contains("primitives");
  if (has_raw && has_prim) fail(field, "give either 'inertia' or 'primitives', not both");
  if (has_raw) return matrix(body["inertia"], field + ".inertia", 6, 6);
  if (has_prim) {
    const std::string pf = field + ".primitives";
    const json& p = body["primitives"];
    require_keys(p, pf, {"mass", "com", "inertia"});
    const double m = number(require(p, pf, "mass"), pf + ".mass");
    Eigen::Vector3d com = Eigen::Vector3d::Zero();
    Eigen::Matrix3d I = Eigen::Matrix3d::Zero();
    if (p.contains("com")) com = vector(p["com"], pf + ".com", 3);
    if (p.contains("inertia")) I = matrix(p["inertia"], pf + ".inertia", 3, 3);
    if (m < 0) fail(pf + ".mass", "mass must be non-negative");
    if ((I - I.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) fail(pf + ".inertia", "not symmetric");
    return spatial_inertia_from_primitives(m, com, 0.5 * (I + I.transpose()));
  }
  if (required) fail(field, "missing 'inertia' or 'primitives'");
  return Matrix6d::Zero();
}

JointKind link_joint(const json& j, const std::string& field) {
  require_keys(j, field, {"kind", "axis", "point"});
  const json& kind = require(j, field, "kind");
  if (!kind.is_string()) fail(field + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "revolute") {
    const Eigen::Vector3d axis = unit_axis(require(j, field, "axis"), field + ".axis");
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
    if (j.contains("point")) point = vector(j["point"], field + ".point", 3);
    return JointKind{JointType::Revolute, axis, point};
  }
  if (k == "prismatic") {
    if (j.contains("point")) fail(field + ".point", "prismatic joints take no point");
    return JointKind{JointType::Prismatic, unit_axis(require(j, field, "axis"), field + ".axis"),
                     Eigen::Vector3d::Zero()};
  }
  fail(field + ".kind", "link joints must be 'revolute' or 'prismatic', got '" + k + "'");
}

void check_inertia(Matrix6d& I, const std::string& field) {
  if (!I.allFinite()) fail(field, "inertia has non-finite entries");
  const double asym = (I - I.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * std::max(1.0, I.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "inertia is not symmetric (max asymmetry " << asym << ")";
    fail(field, os.str());
  }
  I = 0.5 * (I + I.transpose());
  const Eigen::Matrix3d mass_block = I.bottomRightCorner<3, 3>();
  const double m = mass_block.trace() / 3.0;
  if (m < 0) fail(field, "negative mass");
  if ((mass_block - m * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > kMassBlockTolerance * std::max(1.0, m)) {
    fail(field, "linear block of the inertia must be m * I3");
  }
  Eigen::SelfAdjointEigenSolver<Matrix6d> eig(I, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, I.cwiseAbs().maxCoeff())) {
    fail(field, "inertia is not positive semi-definite");
  }
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat_json(const Eigen::MatrixXd& M) {
  json a = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) a.push_back(vec_json(M.row(r).transpose()));
  return a;
}

json pose_json(const Pose& H) {
  return json{{"rotation", mat_json(H.rotation())}, {"translation", vec_json(H.translation())}};
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Matrix6d spatial_inertia_from_primitives(double mass, const Eigen::Vector3d& com,
                                         const Eigen::Matrix3d& rot_inertia_at_com) {
  if (!(mass >= 0.0)) throw ModelError("primitives.mass: mass must be non-negative");
  const Eigen::Matrix3d C = hat3(com);
  Matrix6d I = Matrix6d::Zero();
  I.topLeftCorner<3, 3>() = rot_inertia_at_com + mass * (com.squaredNorm() * Eigen::Matrix3d::Identity() - com * com.transpose());
  I.topRightCorner<3, 3>() = mass * C;
  I.bottomLeftCorner<3, 3>() = -mass * C;
  I.bottomRightCorner<3, 3>() = mass * Eigen::Matrix3d::Identity();
  return I;
}

MassProperties mass_properties(const Matrix6d& I) {
  MassProperties mp;
  mp.mass = I.bottomRightCorner<3, 3>().trace() / 3.0;
  if (mp.mass > 0.0) {
    // Upper-right block is m * hat3(com), lower-left is -m * hat3(com).
    const Eigen::Matrix3d upper = I.topRightCorner<3, 3>() / mp.mass;
    const Eigen::Matrix3d lower = -I.bottomLeftCorner<3, 3>() / mp.mass;
    mp.com = 0.5 * (vee3(upper) + vee3(lower));
  }
  return mp;
}

void validate_model(const VmsModel& model) {
  const JointType bt = model.base.joint.type;
  if (bt != JointType::Floating && bt != JointType::Planar && bt != JointType::Fixed) {
    fail("base.kind", "base must be floating, planar or fixed");
  }
  Matrix6d Ib = model.base.inertia;
  check_inertia(Ib, "base.inertia");
  if (!model.gravity.allFinite()) fail("gravity", "non-finite entries");
  for (int i = 0; i < model.n(); ++i) {
    const LinkSpec& link = model.links[static_cast<size_t>(i)];
    const std::string field = "links[" + std::to_string(i) + "] (" + link.name + ")";
    if (link.joint.type != JointType::Revolute && link.joint.type != JointType::Prismatic) {
      fail(field + ".joint", "link joints must be revolute or prismatic");
    }
    if (std::abs(link.joint.axis.norm() - 1.0) > 1e-12) fail(field + ".joint.axis", "axis must have unit norm");
    if (!is_rotation(link.zero_pose.rotation(), 1e-12)) fail(field + ".zero_pose.rotation", "not a rotation");
    Matrix6d I = link.inertia;
    check_inertia(I, field + ".inertia");
    if ((I - link.inertia).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, I.cwiseAbs().maxCoeff())) {
      fail(field + ".inertia", "not symmetric");
    }
  }
  if (!is_rotation(model.end_effector.rotation(), 1e-12)) fail("end_effector.zero_pose.rotation", "not a rotation");
}

VmsModel parse_model(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ModelError(std::string(source) + ": parse error at " + line_col(text, e.byte) + ": " + e.what());
  }

  try {
    VmsModel model;
    require_keys(root, "model", {"base", "links", "end_effector", "gravity", "potential"});

    const json& base = require(root, "model", "base");
    require_keys(base, "base", {"kind", "inertia", "primitives"});
    const json& kind = require(base, "base", "kind");
    if (!kind.is_string()) fail("base.kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "floating") {
      model.base.joint = JointKind::Floating();
    } else if (k == "planar") {
      model.base.joint = JointKind::Planar();
    } else if (k == "fixed") {
      model.base.joint = JointKind::Fixed();
    } else {
      fail("base.kind", "expected 'floating', 'planar' or 'fixed', got '" + k + "'");
    }
    model.base.inertia = inertia_of(base, "base", model.base.joint.type != JointType::Fixed);
    check_inertia(model.base.inertia, "base.inertia");

    if (root.contains("links")) {
      const json& links = root["links"];
      if (!links.is_array()) fail("links", "expected an array");
      for (std::size_t i = 0; i < links.size(); ++i) {
        const std::string field = "links[" + std::to_string(i) + "]";
        const json& lj = links[i];
        require_keys(lj, field, {"name", "joint", "zero_pose", "inertia", "primitives"});
        LinkSpec link;
        if (lj.contains("name")) {
          if (!lj["name"].is_string()) fail(field + ".name", "expected a string");
          link.name = lj["name"].get<std::string>();
        } else {
          link.name = "link" + std::to_string(i + 1);
        }
        link.joint = link_joint(require(lj, field, "joint"), field + ".joint");
        if (lj.contains("zero_pose")) link.zero_pose = pose(lj["zero_pose"], field + ".zero_pose");
        link.inertia = inertia_of(lj, field, true);
        check_inertia(link.inertia, field + " (" + link.name + ").inertia");
        model.links.push_back(std::move(link));
      }
    }

    if (root.contains("end_effector")) {
      const json& ee = root["end_effector"];
      require_keys(ee, "end_effector", {"zero_pose"});
      if (ee.contains("zero_pose")) model.end_effector = pose(ee["zero_pose"], "end_effector.zero_pose");
    }
    if (root.contains("gravity")) model.gravity = vector(root["gravity"], "gravity", 3);
    if (root.contains("potential")) {
      const json& p = root["potential"];
      if (!p.is_string()) fail("potential", "expected a string");
      const std::string name = p.get<std::string>();
      if (name == "none") {
        model.potential = Potential::None;
      } else if (name == "uniform_gravity") {
        model.potential = Potential::UniformGravity;
      } else {
        fail("potential", "expected 'none' or 'uniform_gravity', got '" + name + "'");
      }
    }
    validate_model(model);
    return model;
  } catch (const ModelError& e) {
    throw ModelError(std::string(source) + ": " + e.what());
  } catch (const json::exception& e) {
    throw ModelError(std::string(source) + ": " + e.what());
  }
}

VmsModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(path.string() + ": cannot open model file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str(), path.string());
}

std::string serialize_model(const VmsModel& model) {
  json root;
  root["base"] = json{{"kind", to_string(model.base.joint.type)}, {"inertia", mat_json(model.base.inertia)}};
  json links = json::array();
  for (const LinkSpec& link : model.links) {
    json joint{{"kind", to_string(link.joint.type)}, {"axis", vec_json(link.joint.axis)}};
    if (link.joint.type == JointType::Revolute) joint["point"] = vec_json(link.joint.point);
    links.push_back(json{{"name", link.name},
                         {"joint", joint},
                         {"zero_pose", pose_json(link.zero_pose)},
                         {"inertia", mat_json(link.inertia)}});
  }
  root["links"] = links;
  root["end_effector"] = json{{"zero_pose", pose_json(model.end_effector)}};
  root["gravity"] = vec_json(model.gravity);
  root["potential"] = model.potential == Potential::None ? "none" : "uniform_gravity";
  return root.dump(2) + "\n";
}

void save_model(const VmsModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError(path.string() + ": cannot write model file");
  out << serialize_model(model);
}

}  // namespace vms
