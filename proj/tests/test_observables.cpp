#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "squeezedyn/analysis.hpp"
#include "squeezedyn/observables.hpp"
#include "test_helpers.hpp"

using namespace squeezedyn;
using testutil::close;

namespace {

// (|1,-1>|1> + |1,0>|0>)/sqrt(2): a maximally simple entangled state living
// entirely in the L = 1 block
JointState bell_like_state() {
  const SpinQuantum q(2);
  JointState state{q, 1, {}};
  state.blocks.resize(4);
  state.blocks[0] = Eigen::VectorXcd::Zero(1);
  state.blocks[1] = Eigen::VectorXcd::Zero(2);
  state.blocks[1][0] = 1.0 / std::sqrt(2.0);
  state.blocks[1][1] = 1.0 / std::sqrt(2.0);
  state.blocks[2] = Eigen::VectorXcd::Zero(3);
  state.blocks[3] = Eigen::VectorXcd::Zero(3);
  return state;
}

}  // namespace

TEST_CASE("partial trace of product states is pure") {
  std::mt19937_64 rng(3);
  const SpinQuantum q(2);
  for (int trial = 0; trial < 10; ++trial) {
    const SpinState spin{q, testutil::random_state(q.dim(), rng)};
    const OscState osc{testutil::random_state(9, rng), 8, 0.0};
    const JointState state = decompose(spin, osc);

    const Eigen::MatrixXcd rho_i = reduce_ion(state);
    CHECK(close((rho_i * rho_i).trace().real(), 1.0, 1e-12));
    CHECK((rho_i - spin.amps * spin.amps.adjoint()).cwiseAbs().maxCoeff() <=
          1e-12);

    const Eigen::MatrixXcd rho_o = reduce_osc(state);
    CHECK(close((rho_o * rho_o).trace().real(), 1.0, 1e-12));
    CHECK(close(von_neumann_entropy(rho_i), 0.0, 1e-12));
    CHECK(close(von_neumann_entropy(rho_o), 0.0, 1e-12));
  }
}

TEST_CASE("partial trace of an entangled state by hand") {
  const JointState state = bell_like_state();

  const Eigen::MatrixXcd rho_i = reduce_ion(state);
  CHECK(close(rho_i(0, 0).real(), 0.5, 1e-14));
  CHECK(close(rho_i(1, 1).real(), 0.5, 1e-14));
  CHECK(std::abs(rho_i(2, 2)) <= 1e-14);
  CHECK(std::abs(rho_i(0, 1)) <= 1e-14);  // different n: no coherence

  const Eigen::MatrixXcd rho_o = reduce_osc(state);
  CHECK(close(rho_o(0, 0).real(), 0.5, 1e-14));
  CHECK(close(rho_o(1, 1).real(), 0.5, 1e-14));

  CHECK(close(von_neumann_entropy(rho_i), std::log(2.0), 1e-12));
  CHECK(close(von_neumann_entropy(rho_i), von_neumann_entropy(rho_o), 1e-8));
}

TEST_CASE("entropy values and error paths") {
  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(3, 3);
  mixed(0, 0) = mixed(1, 1) = mixed(2, 2) = 1.0 / 3.0;
  CHECK(close(von_neumann_entropy(mixed), std::log(3.0), 1e-12));

  Eigen::MatrixXcd two_level = Eigen::MatrixXcd::Zero(3, 3);
  two_level(0, 0) = two_level(1, 1) = 0.5;
  CHECK(close(von_neumann_entropy(two_level), std::log(2.0), 1e-12));

  CHECK_THROWS_AS(von_neumann_entropy(Eigen::MatrixXcd::Identity(3, 3)),
                  NumericalError);
  Eigen::MatrixXcd negative = Eigen::MatrixXcd::Zero(2, 2);
  negative(0, 0) = 1.0 + 1e-9;
  negative(1, 1) = -1e-9;
  CHECK_THROWS_AS(von_neumann_entropy(negative), NumericalError);
}

TEST_CASE("snapshot of the stationary ground state") {
  const JointState state =
      decompose(dicke_state(SpinQuantum(2), -1.0), fock_state(0, 0));
  const Snapshot snap = snapshot(state, 0.0);
  CHECK(close(snap.S_ion, 0.0, 1e-12));
  CHECK(snap.xi_R == 1.0);
  CHECK(close(snap.xi_q, 1.0, 1e-12));
  CHECK(snap.Jz_mean == -1.0);
}

TEST_CASE("snapshot of the double intelligent state under evolution") {
  const JointState state =
      decompose(intelligent_state_m0_zero(1, 0.36), squeezed_vacuum(0.6));
  const BlockSet blocks(state.q, state.max_L());
  const Eigen::MatrixXcd projector0 = reduce_ion(state);

  for (double tau : {0.0, 5.0, 20.0}) {
    const JointState evolved = evolve(state, blocks, tau);
    const Snapshot snap = snapshot(evolved, tau);
    CHECK(snap.S_ion <= 1e-9);
    CHECK(close(snap.xi_R, 0.7515317691222374, 1e-9));
    CHECK(close(snap.xi_q, 0.6, 1e-6));
    CHECK(close(snap.Jz_mean, -0.6373937677053825, 1e-9));
    CHECK((reduce_ion(evolved) - projector0).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("entropy bounds and positivity along a detuned trajectory") {
  const JointState state =
      decompose(intelligent_state_m0_zero(1, 0.5), squeezed_vacuum(0.6));
  const BlockSet blocks(state.q, state.max_L());
  const double cap = std::log(3.0);
  for (double tau = 0.0; tau <= 8.0; tau += 0.5) {
    const JointState evolved = evolve(state, blocks, tau);
    const Eigen::VectorXd ion_evals = density_eigenvalues(reduce_ion(evolved));
    const Eigen::VectorXd osc_evals = density_eigenvalues(reduce_osc(evolved));
    CHECK(ion_evals.minCoeff() >= -1e-10);
    CHECK(osc_evals.minCoeff() >= -1e-10);
    const double s_ion = entropy_from_eigenvalues(ion_evals);
    const double s_osc = entropy_from_eigenvalues(osc_evals);
    CHECK(s_ion >= 0.0);
    CHECK(s_ion <= cap + 1e-9);
    CHECK(close(s_ion, s_osc, 1e-8));
  }
}

TEST_CASE("snapshot propagates the xi_R sentinel") {
  // |1,0> x |0> has <Jz> = 0
  const JointState state =
      decompose(dicke_state(SpinQuantum(2), 0.0), fock_state(0, 2));
  const Snapshot snap = snapshot(state, 0.0);
  CHECK(std::isinf(snap.xi_R));
  CHECK(snap.xi_q > 0.0);
}

TEST_CASE("ObservableSet rejects mismatched states") {
  const JointState state =
      decompose(dicke_state(SpinQuantum(2), -1.0), fock_state(0, 4));
  const ObservableSet obs(SpinQuantum(2), 3);  // wrong oscillator dimension
  CHECK_THROWS_AS(obs.take(state, 0.0), std::invalid_argument);
}
