#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vms/kinematics.hpp"
#include "vms/model.hpp"

namespace vms {

/// A mass matrix block that must be positive definite failed its Cholesky
/// factorization. This signals a modeling error (e.g. a massless base).
class SingularMassMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Locked (M_b), coupling (M_bm) and manipulator (M_m) inertias at q, plus the
 * local connection A = M_b^{-1} M_bm and the Schur complement
 * M_m_hat = M_m - A^T M_bm.
 */
struct MassBlocks {
  Eigen::MatrixXd Mb;          // b x b
  Eigen::MatrixXd Mbm;         // b x n
  Eigen::MatrixXd Mm;          // n x n
  Eigen::MatrixXd A;           // b x n
  Eigen::MatrixXd Mm_hat;      // n x n
  Eigen::MatrixXd Mb_inv;      // b x b
  Eigen::MatrixXd Mm_hat_inv;  // n x n

  int b() const { return static_cast<int>(Mb.rows()); }
  int n() const { return static_cast<int>(Mm.rows()); }

  /// Full mass matrix [[Mb, Mbm], [Mbm^T, Mm]].
  Eigen::MatrixXd full() const;
  /// Block-diagonal decoupled mass matrix diag(Mb, Mm_hat).
  Eigen::MatrixXd decoupled() const;
};

MassBlocks mass_blocks(const VmsModel& model, const Eigen::VectorXd& q);
MassBlocks mass_blocks(const VmsModel& model, const FkCache& cache);

/// Partial derivatives with respect to each q_k, k = 0..n-1.
struct MassPartials {
  std::vector<Eigen::MatrixXd> dMb;
  std::vector<Eigen::MatrixXd> dMbm;
  std::vector<Eigen::MatrixXd> dMm;
  std::vector<Eigen::MatrixXd> dMm_hat;
  std::vector<Eigen::MatrixXd> dA;
  std::vector<Eigen::MatrixXd> dMb_inv;
  std::vector<Eigen::MatrixXd> dMm_hat_inv;

  int n() const { return static_cast<int>(dMm.size()); }
};

/// Central-difference step used for coordinate k.
double partial_step(double qk);

/// Central finite differences of mass_blocks with step partial_step(q_k).
MassPartials mass_partials(const VmsModel& model, const Eigen::VectorXd& q);

/// sum_k d[k] * rate(k): time derivative of a block along q_dot.
Eigen::MatrixXd directional(const std::vector<Eigen::MatrixXd>& d, const Eigen::VectorXd& rate);

}  // namespace vms
