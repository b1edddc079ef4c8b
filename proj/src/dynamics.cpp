#include "squeezedyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

namespace squeezedyn {

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

Eigen::VectorXcd real_times_complex(const Eigen::MatrixXd& m,
                                    const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(m.rows());
  out.real() = m * v.real();
  out.imag() = m * v.imag();
  return out;
}

Eigen::VectorXcd tridiagonal_apply(const Eigen::VectorXd& offdiag,
                                   const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (Eigen::Index s = 0; s + 1 < v.size(); ++s) {
    out[s] += offdiag[s] * v[s + 1];
    out[s + 1] += offdiag[s] * v[s];
  }
  return out;
}

}  // namespace

SubspaceBlock block_hamiltonian(const SpinQuantum& q, int L) {
  if (L < 0) {
    throw std::domain_error("total excitation L must be non-negative");
  }
  SubspaceBlock block;
  block.L = L;
  block.dim = std::min(q.n_ions(), L) + 1;
  block.offdiag.resize(block.dim - 1);
  for (int s = 0; s + 1 < block.dim; ++s) {
    block.offdiag[s] =
        std::sqrt(static_cast<double>(L - s)) * ladder_element(q.j(), q.m_at(s));
  }
  return block;
}

SubspaceBlock block_eigensystem(SubspaceBlock block) {
  const Eigen::VectorXd diag = Eigen::VectorXd::Zero(block.dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, block.offdiag,
                                Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("tridiagonal eigensolver failed for L = " +
                         std::to_string(block.L));
  }
  block.eigenvalues = solver.eigenvalues();
  block.eigenvectors = solver.eigenvectors();
  return block;
}

BlockSet::BlockSet(const SpinQuantum& q, int max_L) : q_(q) {
  if (max_L < 0) {
    throw std::domain_error("max_L must be non-negative");
  }
  blocks_.reserve(max_L + 1);
  for (int L = 0; L <= max_L; ++L) {
    blocks_.push_back(block_eigensystem(block_hamiltonian(q, L)));
  }
}

const SubspaceBlock& BlockSet::block(int L) const {
  if (L < 0 || L > max_L()) {
    throw std::out_of_range("block L = " + std::to_string(L) +
                            " not in this BlockSet");
  }
  return blocks_[L];
}

double JointState::norm() const {
  double total = 0.0;
  for (const auto& psi : blocks) {
    total += psi.squaredNorm();
  }
  return std::sqrt(total);
}

JointState decompose(const SpinState& spin, const OscState& osc) {
  if (std::abs(spin.amps.norm() - 1.0) > 1e-10 ||
      std::abs(osc.amps.norm() - 1.0) > 1e-10) {
    throw std::domain_error("decompose requires normalized input states");
  }
  const int n_ions = spin.q.n_ions();
  JointState state{spin.q, osc.n_max, {}};
  state.blocks.resize(osc.n_max + n_ions + 1);
  for (int L = 0; L <= state.max_L(); ++L) {
    const int dim = std::min(n_ions, L) + 1;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    for (int s = 0; s < dim; ++s) {
      const int n = L - s;
      if (n <= osc.n_max) {
        psi[s] = spin.amps[s] * osc.amps[n];
      }
    }
    state.blocks[L] = std::move(psi);
  }
  return state;
}

JointState evolve(const JointState& state, const BlockSet& blocks,
                  double tau) {
  if (blocks.max_L() < state.max_L() ||
      blocks.spin().two_j() != state.q.two_j()) {
    throw std::invalid_argument("BlockSet does not cover this state");
  }
  JointState out{state.q, state.n_max, {}};
  out.blocks.resize(state.blocks.size());
  for (int L = 0; L <= state.max_L(); ++L) {
    const SubspaceBlock& blk = blocks.block(L);
    Eigen::VectorXcd w =
        real_times_complex(blk.eigenvectors.transpose(), state.blocks[L]);
    for (int k = 0; k < blk.dim; ++k) {
      w[k] *= std::polar(1.0, -blk.eigenvalues[k] * tau);
    }
    out.blocks[L] = real_times_complex(blk.eigenvectors, w);
  }
  return out;
}

JointState apply_hamiltonian(const JointState& state) {
  JointState out{state.q, state.n_max, {}};
  out.blocks.resize(state.blocks.size());
  for (int L = 0; L <= state.max_L(); ++L) {
    out.blocks[L] = tridiagonal_apply(block_hamiltonian(state.q, L).offdiag,
                                      state.blocks[L]);
  }
  return out;
}

HamiltonianMoments hamiltonian_moments(const JointState& state) {
  const JointState h_state = apply_hamiltonian(state);
  HamiltonianMoments moments;
  for (int L = 0; L <= state.max_L(); ++L) {
    moments.mean += state.blocks[L].dot(h_state.blocks[L]).real();
    moments.square += h_state.blocks[L].squaredNorm();
  }
  return moments;
}

double truncated_hamiltonian_residual(const JointState& state) {
  const JointState h_state = apply_hamiltonian(state);
  double total = 0.0;
  for (int L = 0; L <= state.max_L(); ++L) {
    const auto& psi = h_state.blocks[L];
    for (Eigen::Index s = 0; s < psi.size(); ++s) {
      if (L - static_cast<int>(s) <= state.n_max) {
        total += std::norm(psi[s]);
      }
    }
  }
  return std::sqrt(total);
}

Eigen::VectorXcd flatten(const JointState& state) {
  const int osc_dim = state.osc_dim();
  Eigen::VectorXcd flat = Eigen::VectorXcd::Zero(state.q.dim() * osc_dim);
  for (int L = 0; L <= state.max_L(); ++L) {
    const auto& psi = state.blocks[L];
    for (Eigen::Index s = 0; s < psi.size(); ++s) {
      const int n = L - static_cast<int>(s);
      if (n >= 0 && n < osc_dim) {
        flat[static_cast<int>(s) * osc_dim + n] = psi[s];
      }
    }
  }
  return flat;
}

JointState dense_propagator_oracle(const JointState& state, double tau) {
  const int osc_dim = state.osc_dim();
  const int dim = state.q.dim() * osc_dim;
  if (dim > 2000) {
    throw std::domain_error(
        "dense oracle refused: product dimension " + std::to_string(dim) +
        " exceeds 2000");
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s + 1 < state.q.dim(); ++s) {
    const double f = ladder_element(state.q.j(), state.q.m_at(s));
    for (int n = 1; n < osc_dim; ++n) {
      const int row = (s + 1) * osc_dim + (n - 1);
      const int col = s * osc_dim + n;
      const double coupling = std::sqrt(static_cast<double>(n)) * f;
      h(row, col) = coupling;
      h(col, row) = coupling;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense oracle eigensolver failed");
  }
  Eigen::VectorXcd w =
      real_times_complex(solver.eigenvectors().transpose(), flatten(state));
  for (int k = 0; k < dim; ++k) {
    w[k] *= std::polar(1.0, -solver.eigenvalues()[k] * tau);
  }
  const Eigen::VectorXcd flat = real_times_complex(solver.eigenvectors(), w);
  JointState out{state.q, state.n_max, {}};
  out.blocks.resize(state.blocks.size());
  for (int L = 0; L <= state.max_L(); ++L) {
    const int bdim = std::min(state.q.n_ions(), L) + 1;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(bdim);
    for (int s = 0; s < bdim; ++s) {
      const int n = L - s;
      if (n >= 0 && n < osc_dim) {
        psi[s] = flat[s * osc_dim + n];
      }
    }
    out.blocks[L] = std::move(psi);
  }
  return out;
}

}  // namespace squeezedyn
