#include "squeezedyn/observables.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace squeezedyn {

namespace {

Eigen::MatrixXcd flatten_matrix(const JointState& state) {
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(state.q.dim(), state.osc_dim());
  for (int L = 0; L <= state.max_L(); ++L) {
    const auto& block = state.blocks[L];
    for (Eigen::Index s = 0; s < block.size(); ++s) {
      const int n = L - static_cast<int>(s);
      if (n >= 0 && n < state.osc_dim()) {
        psi(s, n) = block[s];
      }
    }
  }
  return psi;
}

}  // namespace

Eigen::MatrixXcd reduce_ion(const JointState& state) {
  const Eigen::MatrixXcd psi = flatten_matrix(state);
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  return (rho + rho.adjoint()) / 2.0;
}

Eigen::MatrixXcd reduce_osc(const JointState& state) {
  const Eigen::MatrixXcd psi = flatten_matrix(state);
  Eigen::MatrixXcd rho = (psi.adjoint() * psi).conjugate();
  return (rho + rho.adjoint()) / 2.0;
}

Eigen::VectorXd density_eigenvalues(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols()) {
    throw std::domain_error("density matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("density matrix eigensolver failed");
  }
  return solver.eigenvalues();
}

double entropy_from_eigenvalues(const Eigen::VectorXd& evals) {
  double entropy = 0.0;
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    if (evals[k] >= 1e-14) {
      entropy -= evals[k] * std::log(evals[k]);
    }
  }
  return entropy;
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  if (std::abs(rho.trace().real() - 1.0) > 1e-8) {
    throw NumericalError(
        "density matrix trace deviates from 1 by more than 1e-8");
  }
  const Eigen::VectorXd evals = density_eigenvalues(rho);
  if (evals.minCoeff() < -1e-10) {
    throw NumericalError("density matrix eigenvalue " +
                         std::to_string(evals.minCoeff()) + " below -1e-10");
  }
  return entropy_from_eigenvalues(evals);
}

ObservableSet::ObservableSet(const SpinQuantum& q, int osc_dim)
    : q_(q), osc_dim_(osc_dim), spin_ops_(build_spin_operators(q)) {
  if (osc_dim < 1) {
    throw std::domain_error("oscillator dimension must be positive");
  }
  q_op_ = position_operator(osc_dim).real();
  q2_op_ = q_op_ * q_op_;
}

Snapshot ObservableSet::take(const JointState& state, double tau) const {
  if (state.q.two_j() != q_.two_j() || state.osc_dim() != osc_dim_) {
    throw std::invalid_argument("ObservableSet built for a different system");
  }
  Snapshot snap;
  snap.tau = tau;

  const Eigen::MatrixXcd rho_ion = reduce_ion(state);
  snap.S_ion = von_neumann_entropy(rho_ion);
  snap.Jz_mean = mean_and_variance(spin_ops_.jz, rho_ion).mean;
  const double jy_var = mean_and_variance(spin_ops_.jy, rho_ion).variance;
  snap.xi_R = std::abs(snap.Jz_mean) < 1e-12
                  ? std::numeric_limits<double>::infinity()
                  : std::sqrt(q_.n_ions() * jy_var) / std::abs(snap.Jz_mean);

  const Eigen::MatrixXcd rho_osc = reduce_osc(state);
  const double q_mean = rho_osc.real().cwiseProduct(q_op_).sum();
  const double q2_mean = rho_osc.real().cwiseProduct(q2_op_).sum();
  const double q_var = std::max(q2_mean - q_mean * q_mean, 0.0);
  snap.xi_q = std::sqrt(2.0 * q_var);
  return snap;
}

Snapshot snapshot(const JointState& state, double tau) {
  return ObservableSet(state.q, state.osc_dim()).take(state, tau);
}

}  // namespace squeezedyn
