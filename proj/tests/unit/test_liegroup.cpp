#include <cmath>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "vms/liegroup.hpp"

using namespace vms;
using Eigen::Matrix3d;
using Eigen::Matrix4d;
using Eigen::Vector3d;

namespace {

Pose to_pose(const Matrix4d& H) { return Pose::FromMatrix(H); }

}  // namespace

TEST(Hat3, ZeroVectorGivesZeroMatrix) { EXPECT_EQ(hat3(Vector3d::Zero()), Matrix3d::Zero()); }

TEST(Hat3, UnitZMatchesCrossProductDefinition) {
  Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  EXPECT_EQ(hat3(Vector3d::UnitZ()), expected);
}

TEST(Hat3, AgreesWithCrossProductAndVee) {
  oracle::Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const Vector3d w = rng.normal(3);
    const Vector3d x = rng.normal(3);
    EXPECT_LT((hat3(w) * x - w.cross(x)).norm(), 1e-14);
    EXPECT_EQ(vee3(hat3(w)), w);
  }
}

TEST(Hat6, MatchesHomogeneousTwistMatrix) {
  oracle::Rng rng(12);
  const Vector6d V = rng.normal(6);
  EXPECT_EQ(hat6(V), oracle::twist_matrix(V));
}

TEST(ExpSe3, ZeroTwistIsIdentity) {
  const Pose H = exp_se3(Twist::Zero(), 1.0);
  EXPECT_EQ(H.rotation(), Matrix3d::Identity());
  EXPECT_EQ(H.translation(), Vector3d::Zero());
}

TEST(ExpSe3, QuarterTurnAboutZMatchesRodrigues) {
  Twist V = Twist::Zero();
  V(2) = M_PI / 2;
  const Pose H = exp_se3(V, 1.0);
  Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LT((H.rotation() - expected).norm(), 1e-15);
  EXPECT_LT((H.rotation() - oracle::rodrigues(Vector3d::UnitZ(), M_PI / 2)).norm(), 1e-15);
  EXPECT_LT(H.translation().norm(), 1e-15);
}

TEST(ExpSe3, PureTranslation) {
  Twist V = Twist::Zero();
  V(3) = 1.0;
  const Pose H = exp_se3(V, 2.0);
  EXPECT_EQ(H.rotation(), Matrix3d::Identity());
  EXPECT_LT((H.translation() - Vector3d(2, 0, 0)).norm(), 1e-15);
}

TEST(ExpSe3, MatchesMatrixExponential) {
  oracle::Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    const Vector6d V = rng.normal(6);
    const double t = rng.uniform(-2.0, 2.0);
    EXPECT_LT((exp_se3(V, t).matrix() - oracle::expm(V, t)).norm(), 1e-12);
  }
}

TEST(ExpSe3, SmallAngleBranchIsContinuous) {
  oracle::Rng rng(14);
  for (double scale : {1e-12, 1e-9, 5e-9, 2e-8, 1e-7, 1e-5}) {
    Vector6d V = rng.normal(6);
    V.head<3>() = V.head<3>().normalized() * scale;
    EXPECT_LT((exp_se3(V, 1.0).matrix() - oracle::expm(V)).norm(), 1e-14) << "scale " << scale;
  }
}

TEST(ExpSe3, OneParameterSubgroup) {
  oracle::Rng rng(15);
  for (int k = 0; k < 100; ++k) {
    const Vector6d V = rng.normal(6);
    const double a = rng.uniform(-1, 1);
    const double c = rng.uniform(-1, 1);
    EXPECT_LT(((exp_se3(V, a) * exp_se3(V, c)).matrix() - exp_se3(V, a + c).matrix()).norm(), 1e-12);
  }
}

TEST(ExpSe3Property, UnitTwistsStayOrthonormalOverFullTurn) {
  oracle::Rng rng(16);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Vector6d V = rng.unit_twist();
    for (int s = 0; s <= 64; ++s) {
      const double t = 2.0 * M_PI * s / 64.0;
      const Matrix3d R = exp_se3(V, t).rotation();
      worst = std::max(worst, (R.transpose() * R - Matrix3d::Identity()).norm());
      EXPECT_GT(R.determinant(), 0.0);
    }
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(LogSo3, InvertsExpBelowPi) {
  oracle::Rng rng(17);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Vector3d axis = Vector3d(rng.normal(3)).normalized();
    const double angle = rng.uniform(0.0, M_PI - 1e-3);
    const Vector3d w = axis * angle;
    worst = std::max(worst, (log_so3(exp_so3(w)) - w).norm());
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(LogSe3, InvertsExpBelowPi) {
  oracle::Rng rng(18);
  for (int k = 0; k < 200; ++k) {
    Vector6d V = rng.normal(6);
    if (V.head<3>().norm() >= M_PI) V.head<3>() *= 0.9 * M_PI / V.head<3>().norm();
    EXPECT_LT((log_se3(exp_se3(V)) - V).norm(), 1e-9);
  }
}

TEST(Adjoint, IdentityPose) { EXPECT_EQ(adjoint(Pose::Identity()), Matrix6d::Identity()); }

TEST(Adjoint, PureTranslationHasHatBlock) {
  const Matrix6d Ad = adjoint(Pose::Translation(Vector3d(0, 0, 1)));
  EXPECT_EQ(Matrix3d(Ad.topLeftCorner<3, 3>()), Matrix3d::Identity());
  EXPECT_EQ(Matrix3d(Ad.bottomRightCorner<3, 3>()), Matrix3d::Identity());
  EXPECT_EQ(Matrix3d(Ad.topRightCorner<3, 3>()), Matrix3d::Zero());
  EXPECT_EQ(Matrix3d(Ad.bottomLeftCorner<3, 3>()), hat3(Vector3d(0, 0, 1)));
}

TEST(Adjoint, MatchesConjugationOfTwistMatrices) {
  oracle::Rng rng(19);
  for (int k = 0; k < 200; ++k) {
    const Matrix4d H = rng.random_pose();
    EXPECT_LT((adjoint(to_pose(H)) - oracle::conjugation(H)).norm(), 1e-12);
  }
}

TEST(Adjoint, InverseTransposePreservesPower) {
  oracle::Rng rng(20);
  for (int k = 0; k < 100; ++k) {
    const Pose H = to_pose(rng.random_pose());
    const Twist V = rng.normal(6);
    const Wrench W = rng.normal(6);
    const Wrench W_moved = adjoint(H).transpose().inverse() * W;
    EXPECT_NEAR(W_moved.dot(adjoint(H) * V), W.dot(V), 1e-12 * (1 + std::abs(W.dot(V))));
  }
}

TEST(AdjointProperty, GroupHomomorphism) {
  oracle::Rng rng(21);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Pose H1 = to_pose(rng.random_pose());
    const Pose H2 = to_pose(rng.random_pose());
    worst = std::max(worst, (adjoint(H1 * H2) - adjoint(H1) * adjoint(H2)).norm());
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(AdOp, ZeroTwist) { EXPECT_EQ(ad_op(Twist::Zero()), Matrix6d::Zero()); }

TEST(AdOp, UnitAngularZ) {
  Twist V = Twist::Zero();
  V(2) = 1.0;
  Matrix6d expected = Matrix6d::Zero();
  expected.topLeftCorner<3, 3>() = hat3(Vector3d::UnitZ());
  expected.bottomRightCorner<3, 3>() = hat3(Vector3d::UnitZ());
  EXPECT_EQ(ad_op(V), expected);
}

TEST(AdOp, MatchesMatrixCommutator) {
  oracle::Rng rng(22);
  for (int k = 0; k < 200; ++k) {
    const Vector6d V = rng.normal(6);
    EXPECT_LT((ad_op(V) - oracle::bracket(V)).norm(), 1e-13);
  }
}

TEST(AdOp, IsDerivativeOfAdjointAlongExp) {
  oracle::Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    const Vector6d V = rng.normal(6);
    const double h = 1e-6;
    const Matrix6d fd = (adjoint(exp_se3(V, h)) - adjoint(exp_se3(V, -h))) / (2 * h);
    EXPECT_LT((fd - ad_op(V)).norm(), 1e-8);
  }
}

TEST(AdDualTilde, ZeroMomentum) { EXPECT_EQ(ad_dual_tilde(Wrench::Zero()), Matrix6d::Zero()); }

TEST(AdDualTilde, DefinedByDualAdjoint) {
  oracle::Rng rng(24);
  for (int k = 0; k < 200; ++k) {
    const Wrench p = rng.normal(6);
    const Twist v = rng.normal(6);
    EXPECT_LT((ad_dual_tilde(p) * v - oracle::bracket(v).transpose() * p).norm(), 1e-13);
  }
}

TEST(AdDualTildeProperty, SkewSymmetric) {
  oracle::Rng rng(25);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Matrix6d X = ad_dual_tilde(Wrench(rng.normal(6)));
    worst = std::max(worst, (X + X.transpose()).norm());
  }
  EXPECT_LT(worst, 1e-14);
}

TEST(AdDualTilde, SubalgebraProjectionForPlanarSubspace) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(6, 3);
  S(2, 0) = 1.0;
  S(3, 1) = 1.0;
  S(4, 2) = 1.0;
  oracle::Rng rng(26);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd p = rng.normal(3);
    const Eigen::VectorXd vbar = rng.normal(3);
    // The planar algebra is closed: the full bracket of S vectors stays in span(S).
    const Eigen::Matrix<double, 6, 1> full_p = S * p;
    const Eigen::VectorXd expected = S.transpose() * oracle::bracket(S * vbar).transpose() * full_p;
    const Eigen::MatrixXd X = ad_dual_tilde(p, S);
    EXPECT_LT((X * vbar - expected).norm(), 1e-13);
    EXPECT_LT((X + X.transpose()).norm(), 1e-14);
  }
}

TEST(AdDualTilde, RejectsMismatchedSubspace) {
  EXPECT_THROW(ad_dual_tilde(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(6, 3)), std::invalid_argument);
}

TEST(Pose, InverseAndComposition) {
  oracle::Rng rng(27);
  for (int k = 0; k < 100; ++k) {
    const Matrix4d A = rng.random_pose();
    const Matrix4d B = rng.random_pose();
    const Pose a = to_pose(A);
    const Pose b = to_pose(B);
    EXPECT_LT(((a * b).matrix() - A * B).norm(), 1e-12);
    EXPECT_LT((a.inverse().matrix() - A.inverse()).norm(), 1e-12);
    const Vector3d x = rng.normal(3);
    EXPECT_LT((a * x - (A * x.homogeneous()).head<3>()).norm(), 1e-12);
  }
}

TEST(Pose, NormalizedRestoresOrthonormality) {
  Matrix3d R = exp_so3(Vector3d(0.3, -0.2, 0.9));
  R(0, 1) += 1e-7;
  const Pose H = Pose(R, Vector3d(1, 2, 3)).normalized();
  EXPECT_TRUE(is_rotation(H.rotation()));
  EXPECT_EQ(H.translation(), Vector3d(1, 2, 3));
  EXPECT_FALSE(is_rotation(R));
}
