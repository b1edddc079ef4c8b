#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "squeezedyn/dynamics.hpp"
#include "test_helpers.hpp"

using namespace squeezedyn;
using testutil::close;

namespace {

JointState equilibrium_state(double eta = 0.36, double xi = 0.6) {
  return decompose(intelligent_state_m0_zero(1, eta), squeezed_vacuum(xi));
}

JointState random_product_state(const SpinQuantum& q, int n_max,
                                std::mt19937_64& rng) {
  return decompose(SpinState{q, testutil::random_state(q.dim(), rng)},
                   OscState{testutil::random_state(n_max + 1, rng), n_max, 0.0});
}

double max_block_difference(const JointState& a, const JointState& b) {
  double worst = 0.0;
  for (int L = 0; L <= a.max_L(); ++L) {
    worst = std::max(worst, (a.blocks[L] - b.blocks[L]).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("block Hamiltonians for two ions") {
  const SpinQuantum q(2);

  const SubspaceBlock l0 = block_hamiltonian(q, 0);
  CHECK(l0.dim == 1);
  CHECK(l0.offdiag.size() == 0);

  const SubspaceBlock l1 = block_hamiltonian(q, 1);
  CHECK(l1.dim == 2);
  CHECK(close(l1.offdiag[0], std::sqrt(2.0), 1e-15));

  const SubspaceBlock l2 = block_hamiltonian(q, 2);
  CHECK(l2.dim == 3);
  CHECK(close(l2.offdiag[0], 2.0, 1e-15));
  CHECK(close(l2.offdiag[1], std::sqrt(2.0), 1e-15));

  CHECK_THROWS_AS(block_hamiltonian(q, -1), std::domain_error);
}

TEST_CASE("block eigensystems") {
  const SpinQuantum q(2);

  const SubspaceBlock l1 = block_eigensystem(block_hamiltonian(q, 1));
  CHECK(close(l1.eigenvalues[0], -std::sqrt(2.0), 1e-12));
  CHECK(close(l1.eigenvalues[1], std::sqrt(2.0), 1e-12));

  const SubspaceBlock l2 = block_eigensystem(block_hamiltonian(q, 2));
  CHECK(close(l2.eigenvalues[0], -std::sqrt(6.0), 1e-10));
  CHECK(close(l2.eigenvalues[1], 0.0, 1e-12));
  CHECK(close(l2.eigenvalues[2], std::sqrt(6.0), 1e-10));

  // null eigenvector is (1, 0, -sqrt 2)/sqrt 3 up to sign
  Eigen::VectorXd null_vec = l2.eigenvectors.col(1);
  if (null_vec[0] < 0.0) null_vec = -null_vec;
  CHECK(close(null_vec[0], 1.0 / std::sqrt(3.0), 1e-10));
  CHECK(close(null_vec[1], 0.0, 1e-10));
  CHECK(close(null_vec[2], -std::sqrt(2.0 / 3.0), 1e-10));

  for (int L : {1, 2, 7, 30}) {
    const SubspaceBlock blk = block_eigensystem(block_hamiltonian(q, L));
    CHECK(std::abs(blk.eigenvalues.sum()) <= 1e-10);  // zero diagonal
    const double ortho = (blk.eigenvectors.transpose() * blk.eigenvectors -
                          Eigen::MatrixXd::Identity(blk.dim, blk.dim))
                             .cwiseAbs()
                             .maxCoeff();
    CHECK(ortho <= 1e-10);
    // reconstruction against the tridiagonal entries
    const Eigen::MatrixXd rebuilt = blk.eigenvectors *
                                    blk.eigenvalues.asDiagonal() *
                                    blk.eigenvectors.transpose();
    Eigen::MatrixXd reference = Eigen::MatrixXd::Zero(blk.dim, blk.dim);
    for (int s = 0; s + 1 < blk.dim; ++s) {
      reference(s, s + 1) = reference(s + 1, s) = blk.offdiag[s];
    }
    const double scale = std::max(1.0, reference.cwiseAbs().maxCoeff());
    CHECK((rebuilt - reference).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }
}

TEST_CASE("every odd-dimensional block carries a zero eigenvalue") {
  for (int n_ions : {2, 4}) {
    const SpinQuantum q(n_ions);
    for (int L = 0; L <= 60; ++L) {
      const SubspaceBlock blk = block_eigensystem(block_hamiltonian(q, L));
      if (blk.dim % 2 == 1) {
        CHECK(blk.eigenvalues.cwiseAbs().minCoeff() <= 1e-10);
      }
    }
  }
}

TEST_CASE("product-state decomposition") {
  const SpinQuantum q(2);

  const JointState ground = decompose(dicke_state(q, -1.0), fock_state(0, 0));
  CHECK(ground.max_L() == 2);
  CHECK(ground.blocks[0][0] == std::complex<double>(1.0, 0.0));
  CHECK(close(ground.norm(), 1.0, 1e-12));

  const JointState one_quantum =
      decompose(dicke_state(q, -1.0), fock_state(1, 1));
  CHECK(one_quantum.blocks[1][0] == std::complex<double>(1.0, 0.0));
  CHECK(one_quantum.blocks[1][1] == std::complex<double>(0.0, 0.0));

  // the double intelligent state's L=2 component is the null eigenvector
  const JointState equil = equilibrium_state();
  Eigen::VectorXcd l2 = equil.blocks[2] / equil.blocks[2].norm();
  if (l2[0].real() < 0.0) l2 = -l2;
  CHECK(close(l2[0].real(), 1.0 / std::sqrt(3.0), 1e-9));
  CHECK(std::abs(l2[1]) <= 1e-12);
  CHECK(close(l2[2].real(), -std::sqrt(2.0 / 3.0), 1e-9));
  CHECK(close(equil.norm(), 1.0, 1e-12));
}

TEST_CASE("evolution is unitary and composes") {
  std::mt19937_64 rng(7);
  const SpinQuantum q(2);
  const JointState state = random_product_state(q, 12, rng);
  const BlockSet blocks(q, state.max_L());

  CHECK(max_block_difference(evolve(state, blocks, 0.0), state) <= 1e-12);

  for (double tau : {0.7, 3.0, 17.0}) {
    const JointState evolved = evolve(state, blocks, tau);
    CHECK(std::abs(evolved.norm() - 1.0) <= 1e-10);
  }

  const JointState two_step =
      evolve(evolve(state, blocks, 1.3), blocks, 2.4);
  const JointState one_step = evolve(state, blocks, 3.7);
  CHECK(max_block_difference(two_step, one_step) <= 1e-9);
}

TEST_CASE("Rabi exchange inside the L = 1 block") {
  const SpinQuantum q(2);
  const JointState state = decompose(dicke_state(q, -1.0), fock_state(1, 1));
  const BlockSet blocks(q, state.max_L());
  for (double tau = 0.0; tau <= 3.0; tau += 0.3) {
    const JointState evolved = evolve(state, blocks, tau);
    // amplitude on |1,0>|0> (block L=1, s=1)
    CHECK(close(std::abs(evolved.blocks[1][1]),
                std::abs(std::sin(std::sqrt(2.0) * tau)), 1e-10));
    CHECK(close(std::abs(evolved.blocks[1][0]),
                std::abs(std::cos(std::sqrt(2.0) * tau)), 1e-10));
  }
}

TEST_CASE("double intelligent state is stationary") {
  const JointState state = equilibrium_state();
  const BlockSet blocks(state.q, state.max_L());
  const Eigen::VectorXcd flat0 = flatten(state);
  for (double tau : {1.0, 5.0, 40.0}) {
    const Eigen::VectorXcd flat = flatten(evolve(state, blocks, tau));
    CHECK(std::abs(flat0.dot(flat)) >= 1.0 - 1e-9);
  }
}

TEST_CASE("Hamiltonian moments are conserved") {
  std::mt19937_64 rng(11);
  const SpinQuantum q(2);
  const JointState state = random_product_state(q, 10, rng);
  const BlockSet blocks(q, state.max_L());
  const HamiltonianMoments first = hamiltonian_moments(state);
  for (double tau = 0.5; tau < 20.0; tau += 2.7) {
    const HamiltonianMoments moments =
        hamiltonian_moments(evolve(state, blocks, tau));
    CHECK(close(moments.mean, first.mean, 1e-9));
    CHECK(close(moments.square, first.square, 1e-9));
  }
}

TEST_CASE("eigenstate theorem at and off the equilibrium point") {
  // eta = xi_q^2: residual vanishes on the truncated space
  CHECK(truncated_hamiltonian_residual(equilibrium_state(0.36, 0.6)) <= 1e-9);
  // N = 4 equilibrium
  const JointState four_ion =
      decompose(intelligent_state_m0_zero(2, 0.49), squeezed_vacuum(0.7));
  CHECK(truncated_hamiltonian_residual(four_ion) <= 1e-9);
  // perturbing eta by 0.05 breaks the eigenstate condition
  CHECK(truncated_hamiltonian_residual(equilibrium_state(0.41, 0.6)) > 1e-3);
  CHECK(truncated_hamiltonian_residual(equilibrium_state(0.31, 0.6)) > 1e-3);
}

TEST_CASE("dense propagator oracle") {
  std::mt19937_64 rng(23);
  const SpinQuantum q(2);

  // structural check: the dense Hamiltonian never mixes different L
  {
    const JointState state = random_product_state(q, 6, rng);
    // flatten unit vectors through the oracle at tau = 0 keeps them in place
    CHECK(max_block_difference(dense_propagator_oracle(state, 0.0), state) <=
          1e-12);
  }

  const JointState state = random_product_state(q, 40, rng);
  const BlockSet blocks(q, state.max_L());
  for (double tau : {1.0, 5.0, 10.0}) {
    const JointState fast = evolve(state, blocks, tau);
    const JointState slow = dense_propagator_oracle(state, tau);
    CHECK(std::abs(slow.norm() - 1.0) <= 1e-10);
    CHECK((flatten(fast) - flatten(slow)).cwiseAbs().maxCoeff() <= 1e-8);
  }

  // refusal above the dimension cap
  const JointState huge = decompose(dicke_state(q, -1.0), fock_state(0, 999));
  CHECK_THROWS_AS(dense_propagator_oracle(huge, 1.0), std::domain_error);
}

TEST_CASE("BlockSet coverage is enforced") {
  const SpinQuantum q(2);
  const JointState state = decompose(dicke_state(q, -1.0), fock_state(2, 8));
  const BlockSet blocks(q, 3);  // too small for max_L = 10
  CHECK_THROWS_AS(evolve(state, blocks, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(blocks.block(4), std::out_of_range);
}
