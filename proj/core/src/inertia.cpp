#include "vms/inertia.hpp"

#include <algorithm>
#include <cmath>

namespace vms {

namespace {

Eigen::MatrixXd symmetric(const Eigen::MatrixXd& M) { return 0.5 * (M + M.transpose()); }

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& M, const char* what) {
  if (M.rows() == 0) return Eigen::MatrixXd(0, 0);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw SingularMassMatrix(std::string(what) + " is not positive definite");
  }
  return symmetric(llt.solve(Eigen::MatrixXd::Identity(M.rows(), M.cols())));
}

}  // namespace

Eigen::MatrixXd MassBlocks::full() const {
  const int nb = b();
  const int nm = n();
  Eigen::MatrixXd M(nb + nm, nb + nm);
  M.topLeftCorner(nb, nb) = Mb;
  M.topRightCorner(nb, nm) = Mbm;
  M.bottomLeftCorner(nm, nb) = Mbm.transpose();
  M.bottomRightCorner(nm, nm) = Mm;
  return M;
}

Eigen::MatrixXd MassBlocks::decoupled() const {
  const int nb = b();
  const int nm = n();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nb + nm, nb + nm);
  M.topLeftCorner(nb, nb) = Mb;
  M.bottomRightCorner(nm, nm) = Mm_hat;
  return M;
}

MassBlocks mass_blocks(const VmsModel& model, const Eigen::VectorXd& q) {
  return mass_blocks(model, forward_kinematics(model, q));
}

MassBlocks mass_blocks(const VmsModel& model, const FkCache& cache) {
  const int b = model.b();
  const int n = model.n();
  const Eigen::MatrixXd Sb = model.base_s_matrix();

  Matrix6d locked = model.base.inertia;
  Eigen::MatrixXd Mbm = Eigen::MatrixXd::Zero(b, n);
  Eigen::MatrixXd Mm = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Matrix6d& I = model.links[static_cast<size_t>(i)].inertia;
    const Matrix6d Ad = adjoint(cache.links[static_cast<size_t>(i)].inverse());  // Ad_{H_b^i}
    const Eigen::MatrixXd J = link_jacobian_base(model, cache, i);
    locked += Ad.transpose() * I * Ad;
    if (b > 0) Mbm += Sb.transpose() * Ad.transpose() * I * J;
    Mm += J.transpose() * I * J;
  }

  MassBlocks blocks;
  blocks.Mb = symmetric(Sb.transpose() * locked * Sb);
  blocks.Mbm = Mbm;
  blocks.Mm = symmetric(Mm);
  blocks.Mb_inv = spd_inverse(blocks.Mb, "locked inertia M_b");
  blocks.A = blocks.Mb_inv * blocks.Mbm;
  blocks.Mm_hat = symmetric(blocks.Mm - blocks.A.transpose() * blocks.Mbm);
  blocks.Mm_hat_inv = spd_inverse(blocks.Mm_hat, "decoupled manipulator inertia M_m_hat");
  return blocks;
}

double partial_step(double qk) { return 1e-6 * std::max(1.0, std::abs(qk)); }

MassPartials mass_partials(const VmsModel& model, const Eigen::VectorXd& q) {
  const int n = model.n();
  MassPartials d;
  for (auto* v : {&d.dMb, &d.dMbm, &d.dMm, &d.dMm_hat, &d.dA, &d.dMb_inv, &d.dMm_hat_inv}) {
    v->reserve(static_cast<size_t>(n));
  }
  for (int k = 0; k < n; ++k) {
    const double h = partial_step(q(k));
    Eigen::VectorXd qp = q;
    Eigen::VectorXd qm = q;
    qp(k) += h;
    qm(k) -= h;
    const double span = qp(k) - qm(k);  // exactly representable step actually taken
    const MassBlocks plus = mass_blocks(model, qp);
    const MassBlocks minus = mass_blocks(model, qm);
    d.dMb.push_back(symmetric((plus.Mb - minus.Mb) / span));
    d.dMbm.push_back((plus.Mbm - minus.Mbm) / span);
    d.dMm.push_back(symmetric((plus.Mm - minus.Mm) / span));
    d.dMm_hat.push_back(symmetric((plus.Mm_hat - minus.Mm_hat) / span));
    d.dA.push_back((plus.A - minus.A) / span);
    // Secant of the inverse via A^-1 - B^-1 = -A^-1 (A - B) B^-1, free of cancellation.
    d.dMb_inv.push_back(symmetric(-plus.Mb_inv * (plus.Mb - minus.Mb) * minus.Mb_inv / span));
    d.dMm_hat_inv.push_back(symmetric(-plus.Mm_hat_inv * (plus.Mm_hat - minus.Mm_hat) * minus.Mm_hat_inv / span));
  }
  return d;
}

Eigen::MatrixXd directional(const std::vector<Eigen::MatrixXd>& d, const Eigen::VectorXd& rate) {
  if (d.empty()) return Eigen::MatrixXd();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.front().rows(), d.front().cols());
  for (size_t k = 0; k < d.size(); ++k) out += d[k] * rate(static_cast<Eigen::Index>(k));
  return out;
}

}  // namespace vms
