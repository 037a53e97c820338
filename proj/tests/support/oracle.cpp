#include "oracle.hpp"

#include <cmath>
#include <variant>

#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

std::filesystem::path model_path(const std::string& name) {
  return std::filesystem::path(VMS_MODELS_DIR) / (name + ".json");
}

vms::VmsModel fixture(const std::string& name) { return vms::load_model(model_path(name)); }

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"free_body", "fixed_1link", "fixed_2link", "planar_2link",
                                                 "floating_2link"};
  return names;
}

double rel(const MatrixXd& a, const MatrixXd& b) { return (a - b).norm() / (1.0 + b.norm()); }
double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

Matrix3d cross_matrix(const Vector3d& w) {
  Matrix3d W;
  W << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  return W;
}

Matrix4d twist_matrix(const Vector6d& V) {
  Matrix4d X = Matrix4d::Zero();
  X.topLeftCorner<3, 3>() = cross_matrix(V.head<3>());
  X.topRightCorner<3, 1>() = V.tail<3>();
  return X;
}

Vector6d twist_vector(const Matrix4d& X) {
  Vector6d V;
  V << X(2, 1), X(0, 2), X(1, 0), X(0, 3), X(1, 3), X(2, 3);
  return V;
}

Matrix4d homogeneous(const Matrix3d& R, const Vector3d& t) {
  Matrix4d H = Matrix4d::Identity();
  H.topLeftCorner<3, 3>() = R;
  H.topRightCorner<3, 1>() = t;
  return H;
}

Matrix4d expm(const Vector6d& V, double t) {
  const Matrix4d X = twist_matrix(V * t);
  return X.exp();
}

Matrix3d rodrigues(const Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Matrix6d conjugation(const Matrix4d& H) {
  const Matrix4d Hinv = H.inverse();
  Matrix6d T;
  for (int k = 0; k < 6; ++k) T.col(k) = twist_vector(H * twist_matrix(Vector6d::Unit(k)) * Hinv);
  return T;
}

Matrix6d bracket(const Vector6d& V) {
  const Matrix4d X = twist_matrix(V);
  Matrix6d B;
  for (int k = 0; k < 6; ++k) {
    const Matrix4d U = twist_matrix(Vector6d::Unit(k));
    B.col(k) = twist_vector(X * U - U * X);
  }
  return B;
}

Matrix4d base_frame(const vms::VmsModel& model, const vms::JointConfig& h) {
  switch (model.base.joint.type) {
    case vms::JointType::Floating: {
      const auto& H = std::get<vms::Pose>(h);
      return homogeneous(H.rotation(), H.translation());
    }
    case vms::JointType::Planar: {
      const auto& c = std::get<vms::PlanarConfig>(h);
      return homogeneous(rodrigues(Vector3d::UnitZ(), c.theta), Vector3d(c.x, c.y, 0.0));
    }
    default: return Matrix4d::Identity();
  }
}

namespace {

Matrix4d joint_motion(const vms::JointKind& joint, double q) {
  if (joint.type == vms::JointType::Revolute) {
    const Matrix3d R = rodrigues(joint.axis, q);
    return homogeneous(R, (Matrix3d::Identity() - R) * joint.point);
  }
  return homogeneous(Matrix3d::Identity(), joint.axis.normalized() * q);
}

Matrix4d pose_matrix(const vms::Pose& H) { return homogeneous(H.rotation(), H.translation()); }

}  // namespace

std::vector<Matrix4d> link_frames(const vms::VmsModel& model, const VectorXd& q) {
  std::vector<Matrix4d> frames;
  Matrix4d T = Matrix4d::Identity();
  for (int i = 0; i < model.n(); ++i) {
    const auto& link = model.links[static_cast<size_t>(i)];
    T = T * pose_matrix(link.zero_pose) * joint_motion(link.joint, q(i));
    frames.push_back(T);
  }
  return frames;
}

Matrix4d end_effector_frame(const vms::VmsModel& model, const VectorXd& q) {
  const Matrix4d last = model.n() > 0 ? link_frames(model, q).back() : Matrix4d::Identity();
  return last * pose_matrix(model.end_effector);
}

MatrixXd base_basis(const vms::VmsModel& model) {
  switch (model.base.joint.type) {
    case vms::JointType::Floating: return MatrixXd::Identity(6, 6);
    case vms::JointType::Planar: {
      MatrixXd S = MatrixXd::Zero(6, 3);
      S(2, 0) = 1.0;
      S(3, 1) = 1.0;
      S(4, 2) = 1.0;
      return S;
    }
    default: return MatrixXd::Zero(6, 0);
  }
}

MatrixXd body_jacobian(const vms::VmsModel& model, const VectorXd& q, int link, const Matrix4d& frame) {
  const MatrixXd S = base_basis(model);
  const int b = static_cast<int>(S.cols());
  const int n = model.n();
  const Matrix4d Finv = frame.inverse();
  MatrixXd J = MatrixXd::Zero(6, b + n);
  for (int I = 0; I < b; ++I) J.col(I) = twist_vector(Finv * twist_matrix(S.col(I)) * frame);
  const std::vector<Matrix4d> T = link_frames(model, q);
  for (int j = 0; j <= link && j < n; ++j) {
    const auto& joint = model.links[static_cast<size_t>(j)].joint;
    const Matrix3d R = T[static_cast<size_t>(j)].topLeftCorner<3, 3>();
    const Vector3d axis = R * joint.axis.normalized();
    Vector6d xi;
    if (joint.type == vms::JointType::Revolute) {
      const Vector3d r = T[static_cast<size_t>(j)].topLeftCorner<3, 3>() * joint.point +
                         T[static_cast<size_t>(j)].topRightCorner<3, 1>();
      xi << axis, r.cross(axis);
    } else {
      xi << Vector3d::Zero(), axis;
    }
    J.col(b + j) = twist_vector(Finv * twist_matrix(xi) * frame);
  }
  return J;
}

MatrixXd mass_matrix(const vms::VmsModel& model, const VectorXd& q) {
  const MatrixXd Jb = body_jacobian(model, q, -1, Matrix4d::Identity());
  MatrixXd M = Jb.transpose() * model.base.inertia * Jb;
  const std::vector<Matrix4d> T = link_frames(model, q);
  for (int i = 0; i < model.n(); ++i) {
    const MatrixXd J = body_jacobian(model, q, i, T[static_cast<size_t>(i)]);
    M += J.transpose() * model.links[static_cast<size_t>(i)].inertia * J;
  }
  return M;
}

double mass_of(const Matrix6d& inertia) { return inertia.bottomRightCorner<3, 3>().trace() / 3.0; }

Vector3d com_of(const Matrix6d& inertia) {
  const double m = mass_of(inertia);
  if (m == 0.0) return Vector3d::Zero();
  const Matrix3d C = inertia.topRightCorner<3, 3>() / m;
  return Vector3d(C(2, 1), C(0, 2), C(1, 0));
}

double potential(const vms::VmsModel& model, const vms::JointConfig& h, const VectorXd& q) {
  const Matrix4d B = base_frame(model, h);
  auto height = [&](const Matrix6d& I, const Matrix4d& F) {
    const Vector3d c = (F * com_of(I).homogeneous()).head<3>();
    return -mass_of(I) * model.gravity.dot(c);
  };
  double V = height(model.base.inertia, B);
  const std::vector<Matrix4d> T = link_frames(model, q);
  for (int i = 0; i < model.n(); ++i) V += height(model.links[static_cast<size_t>(i)].inertia, B * T[static_cast<size_t>(i)]);
  return V;
}

Vector6d weight_wrench_at_base(const vms::VmsModel& model, const vms::JointConfig& h, const VectorXd& q) {
  const Matrix3d Rb = base_frame(model, h).topLeftCorner<3, 3>();
  auto weight = [&](const Matrix6d& I, const Matrix4d& F) {
    const Vector3d f = mass_of(I) * Rb.transpose() * model.gravity;
    const Vector3d point = (F * com_of(I).homogeneous()).head<3>();
    Vector6d W;
    W << point.cross(f), f;
    return W;
  };
  Vector6d W = weight(model.base.inertia, Matrix4d::Identity());
  const std::vector<Matrix4d> T = link_frames(model, q);
  for (int i = 0; i < model.n(); ++i) W += weight(model.links[static_cast<size_t>(i)].inertia, T[static_cast<size_t>(i)]);
  return W;
}

Vector6d euler_poincare_rate(const Matrix6d& inertia, const Vector6d& V, const Vector6d& W) {
  return inertia.ldlt().solve(bracket(V).transpose() * inertia * V + W);
}

namespace {

// Fourth-order five-point derivative of a q-dependent quantity along coordinate k.
template <typename F>
auto five_point(const VectorXd& q, Eigen::Index k, double step, F&& f) {
  auto at = [&](double s) {
    VectorXd y = q;
    y(k) += s * step;
    return f(y);
  };
  return ((8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * step)).eval();
}

}  // namespace

VectorXd manipulator_accelerations(const vms::VmsModel& model, const VectorXd& q, const VectorXd& q_dot,
                                   const VectorXd& tau, const Vector6d& ee_wrench, bool gravity) {
  const int n = model.n();
  const double step = 1e-3;
  std::vector<MatrixXd> dM;
  for (int k = 0; k < n; ++k) dM.push_back(five_point(q, k, step, [&](const VectorXd& y) { return mass_matrix(model, y); }));
  VectorXd coriolis = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        coriolis(i) += (dM[static_cast<size_t>(k)](i, j) - 0.5 * dM[static_cast<size_t>(i)](j, k)) * q_dot(j) * q_dot(k);
  VectorXd g = VectorXd::Zero(n);
  if (gravity) {
    for (int k = 0; k < n; ++k) {
      g(k) = five_point(q, k, step, [&](const VectorXd& y) {
        return Eigen::Matrix<double, 1, 1>(potential(model, std::monostate{}, y));
      })(0);
    }
  }
  const MatrixXd Je = body_jacobian(model, q, n - 1, end_effector_frame(model, q));
  const VectorXd rhs = tau + Je.transpose() * ee_wrench - coriolis - g;
  return mass_matrix(model, q).ldlt().solve(rhs);
}

double kinetic_energy_from_momentum(const vms::VmsModel& model, const VectorXd& q, const VectorXd& momentum) {
  return 0.5 * momentum.dot(mass_matrix(model, q).ldlt().solve(momentum));
}

double state_distance(const vms::VmsModel& model, const vms::State& a, const vms::State& b) {
  return (base_frame(model, a.h) - base_frame(model, b.h)).norm() + (a.q - b.q).norm() + (a.p - b.p).norm() +
         (a.pi - b.pi).norm();
}

VectorXd Rng::normal(int size) {
  std::normal_distribution<double> dist(0.0, 1.0);
  VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = dist(gen_);
  return v;
}

VectorXd Rng::uniform(int size, double lo, double hi) {
  VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = uniform(lo, hi);
  return v;
}

Matrix4d Rng::random_pose() { return expm(Vector6d(normal(6))); }

Vector6d Rng::unit_twist() {
  const Vector6d V = normal(6);
  return V / V.norm();
}

}  // namespace oracle
