#include "squeezedyn/spin_algebra.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace squeezedyn {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kNormTol = 1e-10;

// nearest integer to 2*x, or throws if x is not a half-integer
int round_half_integer(double x, const char* what) {
  const double two_x = 2.0 * x;
  const double rounded = std::round(two_x);
  if (std::abs(two_x - rounded) > 1e-9) {
    throw std::domain_error(std::string(what) + " must be a half-integer, got " +
                            std::to_string(x));
  }
  return static_cast<int>(rounded);
}

void check_hermitian(const Eigen::MatrixXcd& op) {
  if (op.rows() != op.cols()) {
    throw std::domain_error("operator must be square");
  }
  const double dev = (op - op.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermitianTol) {
    throw std::domain_error("operator is not Hermitian (deviation " +
                            std::to_string(dev) + ")");
  }
}

double clamp_variance(double var) {
  return var < 0.0 ? 0.0 : var;
}

}  // namespace

SpinQuantum::SpinQuantum(int two_j) : two_j_(two_j) {
  if (two_j < 0) {
    throw std::domain_error("2j must be non-negative");
  }
}

SpinQuantum SpinQuantum::from_j(double j) {
  return SpinQuantum(round_half_integer(j, "j"));
}

SpinQuantum SpinQuantum::for_ions(int n_ions) {
  if (n_ions < 1) {
    throw std::domain_error("ion count must be positive");
  }
  return SpinQuantum(n_ions);  // j = N/2
}

int SpinQuantum::index_of_m(double m) const {
  const int two_m = round_half_integer(m, "m");
  if ((two_m + two_j_) % 2 != 0) {
    throw std::domain_error("m must differ from j by an integer");
  }
  if (two_m < -two_j_ || two_m > two_j_) {
    throw std::domain_error("m out of range [-j, j]");
  }
  return (two_m + two_j_) / 2;
}

double ladder_element(double j, double m) {
  const int two_j = round_half_integer(j, "j");
  SpinQuantum q(two_j);
  q.index_of_m(m);  // validates range and parity
  return std::sqrt(j * (j + 1.0) - m * (m + 1.0));
}

SpinMatrices build_spin_operators(const SpinQuantum& q) {
  const int dim = q.dim();
  SpinMatrices ops;
  ops.jz = Eigen::MatrixXcd::Zero(dim, dim);
  ops.jplus = Eigen::MatrixXcd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    ops.jz(s, s) = q.m_at(s);
    if (s + 1 < dim) {
      ops.jplus(s + 1, s) = ladder_element(q.j(), q.m_at(s));
    }
  }
  ops.jminus = ops.jplus.adjoint();
  ops.jx = (ops.jplus + ops.jminus) / 2.0;
  ops.jy = (ops.jplus - ops.jminus) / std::complex<double>(0.0, 2.0);
  return ops;
}

MeanVariance mean_and_variance(const Eigen::MatrixXcd& op,
                               const Eigen::VectorXcd& state) {
  check_hermitian(op);
  if (op.rows() != state.size()) {
    throw std::domain_error("operator/state dimension mismatch");
  }
  if (std::abs(state.norm() - 1.0) > kNormTol) {
    throw std::domain_error("state is not normalized");
  }
  const Eigen::VectorXcd op_state = op * state;
  const double mean = state.dot(op_state).real();
  const double second = op_state.squaredNorm();
  return {mean, clamp_variance(second - mean * mean)};
}

MeanVariance mean_and_variance(const Eigen::MatrixXcd& op,
                               const Eigen::MatrixXcd& rho) {
  check_hermitian(op);
  if (op.rows() != rho.rows() || rho.rows() != rho.cols()) {
    throw std::domain_error("operator/density dimension mismatch");
  }
  if (std::abs(rho.trace().real() - 1.0) > kNormTol) {
    throw std::domain_error("density matrix is not unit trace");
  }
  const Eigen::MatrixXcd op_rho = op * rho;
  const double mean = op_rho.trace().real();
  // Tr(op rho op) = sum_ij (op rho)_ij op_ji
  const double second =
      op_rho.cwiseProduct(op.transpose()).sum().real();
  return {mean, clamp_variance(second - mean * mean)};
}

}  // namespace squeezedyn
