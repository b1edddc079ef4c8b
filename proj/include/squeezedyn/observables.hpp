// observables.hpp — reduced density matrices, entropy, time-resolved metrics
#pragma once

#include <Eigen/Dense>

#include "squeezedyn/dynamics.hpp"

namespace squeezedyn {

// Reduced density matrix of the internal (spin) subsystem, (2j+1)^2.
Eigen::MatrixXcd reduce_ion(const JointState& state);

// Reduced density matrix of the motional subsystem on the state's
// oscillator dimension n_max + N + 1.
Eigen::MatrixXcd reduce_osc(const JointState& state);

// S = -Tr(rho ln rho) in nats. Eigenvalues below 1e-14 are treated as zero;
// below -1e-10, or a trace off 1 by more than 1e-8, is an error.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

// Spectrum of a Hermitian density matrix (ascending), and the entropy of a
// given spectrum with the same small-eigenvalue clamp as above.
Eigen::VectorXd density_eigenvalues(const Eigen::MatrixXcd& rho);
double entropy_from_eigenvalues(const Eigen::VectorXd& evals);

struct Snapshot {
  double tau = 0.0;
  double S_ion = 0.0;
  double xi_R = 0.0;
  double xi_q = 0.0;
  double Jz_mean = 0.0;
};

// Cached operators for snapshotting states of a fixed (j, oscillator
// dimension); build once per trajectory, reuse across samples.
class ObservableSet {
 public:
  ObservableSet(const SpinQuantum& q, int osc_dim);

  Snapshot take(const JointState& state, double tau) const;

  const SpinQuantum& spin() const { return q_; }
  int osc_dim() const { return osc_dim_; }

 private:
  SpinQuantum q_;
  int osc_dim_;
  SpinMatrices spin_ops_;
  Eigen::MatrixXd q_op_, q2_op_;  // real symmetric quadrature operators
};

// Convenience one-shot snapshot.
Snapshot snapshot(const JointState& state, double tau);

}  // namespace squeezedyn
