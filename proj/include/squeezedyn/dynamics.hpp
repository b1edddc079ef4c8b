// dynamics.hpp — exact unitary evolution under H = g(a^dag J- + a J+)
//
// The total excitation L = a^dag a + Jz + N/2 is conserved, so the
// Hamiltonian is block-diagonal over invariant subspaces H_L. Each block is
// real symmetric tridiagonal with zero diagonal in the basis
// s <-> (m = -j + s, n = L - s), and is diagonalized once and reused.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "squeezedyn/states.hpp"

namespace squeezedyn {

struct SubspaceBlock {
  int L = 0;
  int dim = 0;
  Eigen::VectorXd offdiag;       // length dim-1, couplings in units of g
  Eigen::VectorXd eigenvalues;   // ascending; empty until diagonalized
  Eigen::MatrixXd eigenvectors;  // orthogonal columns

  bool has_eigensystem() const { return eigenvalues.size() == dim; }
};

SubspaceBlock block_hamiltonian(const SpinQuantum& q, int L);

// Fills eigenvalues/eigenvectors (implicit-shift tridiagonal QL/QR).
// Throws NumericalError if the solver does not converge.
SubspaceBlock block_eigensystem(SubspaceBlock block);

// Diagonalized blocks L = 0..max_L for a fixed j; immutable after
// construction, safe to share across threads.
class BlockSet {
 public:
  BlockSet(const SpinQuantum& q, int max_L);

  const SubspaceBlock& block(int L) const;
  int max_L() const { return static_cast<int>(blocks_.size()) - 1; }
  const SpinQuantum& spin() const { return q_; }

 private:
  SpinQuantum q_;
  std::vector<SubspaceBlock> blocks_;
};

// Joint ion-oscillator state stored per invariant subspace. blocks[L] holds
// amplitudes over s = 0..min(N,L); L runs 0..n_max+N, which spans every
// subspace reachable from an initial state truncated at n_max (evolution on
// these full blocks is exact for such states).
struct JointState {
  SpinQuantum q;
  int n_max = 0;
  std::vector<Eigen::VectorXcd> blocks;

  int max_L() const { return static_cast<int>(blocks.size()) - 1; }
  int osc_dim() const { return n_max + q.n_ions() + 1; }
  double norm() const;
};

// Block decomposition of a product state: psi_L(s) = c_{-j+s} * b_{L-s}.
JointState decompose(const SpinState& spin, const OscState& osc);

// psi_L(tau) = V exp(-i E tau) V^T psi_L(0) per block; tau is the scaled
// time g*t. The BlockSet must cover the state's largest L.
JointState evolve(const JointState& state, const BlockSet& blocks, double tau);

// H|psi> on the full blocks (units of g).
JointState apply_hamiltonian(const JointState& state);

struct HamiltonianMoments {
  double mean = 0.0;    // <H>
  double square = 0.0;  // <H^2>
};
HamiltonianMoments hamiltonian_moments(const JointState& state);

// || P H P |psi> || with P the projector onto oscillator levels n <= n_max:
// the eigenstate residual on the truncated space.
double truncated_hamiltonian_residual(const JointState& state);

// Independent correctness oracle: builds the dense Hamiltonian on the
// flattened (m, n) product grid, exponentiates it by full symmetric
// eigendecomposition, and applies it to the state. Refuses product
// dimensions above 2000.
JointState dense_propagator_oracle(const JointState& state, double tau);

// Flattened amplitudes over the (m, n) grid, index s * osc_dim + n.
Eigen::VectorXcd flatten(const JointState& state);

}  // namespace squeezedyn
