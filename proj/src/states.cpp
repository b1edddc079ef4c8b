#include "squeezedyn/states.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace squeezedyn {

namespace {

constexpr double kJzSentinelTol = 1e-12;

// global phase: first amplitude above threshold made real positive
void fix_phase(Eigen::VectorXcd& amps) {
  const double scale = amps.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const double mag = std::abs(amps[i]);
    if (mag > 1e-10 * scale) {
      amps *= std::conj(amps[i]) / mag;
      return;
    }
  }
}

void require_unit_interval(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::domain_error("eta must lie in (0, 1), got " +
                            std::to_string(eta));
  }
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// x^k for small non-negative integer k
double int_pow(double x, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

// generalized binomial C(a, k) for real a, integer k >= 0
double general_binomial(double a, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= (a - i) / (i + 1.0);
  return out;
}

}  // namespace

SpinState dicke_state(const SpinQuantum& q, double m) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(q.dim());
  amps[q.index_of_m(m)] = 1.0;
  return {q, std::move(amps)};
}

OscState fock_state(int n, int n_max) {
  if (n_max < 0 || n < 0 || n > n_max) {
    throw std::domain_error("fock_state requires 0 <= n <= n_max");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n_max + 1);
  amps[n] = 1.0;
  return {std::move(amps), n_max, 0.0};
}

SpinState intelligent_state_m0_zero(int j, double eta) {
  if (j < 1) {
    throw std::domain_error(
        "m0 = 0 intelligent states need integer j >= 1 (even ion number)");
  }
  require_unit_interval(eta);
  const double log_ratio = std::log((1.0 - eta) / (1.0 + eta));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(2 * j + 1);
  for (int r = 0; r <= j; ++r) {
    amps[2 * r] = std::exp(log_binomial(j, r) -
                           0.5 * log_binomial(2 * j, 2 * r) + r * log_ratio);
  }
  amps /= amps.norm();
  return {SpinQuantum(2 * j), std::move(amps)};
}

std::pair<SpinState, IntelligentSpec> intelligent_state_general(
    const SpinQuantum& q, double eta, double m0) {
  require_unit_interval(eta);
  q.index_of_m(m0);  // validates |m0| <= j and parity
  const SpinMatrices ops = build_spin_operators(q);
  const Eigen::MatrixXcd op =
      eta * ops.jx - std::complex<double>(0.0, 1.0) * ops.jy;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(op);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("intelligent-state eigensolver failed to converge");
  }
  const std::complex<double> target(0.0, m0 * std::sqrt(1.0 - eta * eta));
  Eigen::Index best = 0;
  double best_dist = std::abs(solver.eigenvalues()[0] - target);
  for (Eigen::Index k = 1; k < solver.eigenvalues().size(); ++k) {
    const double dist = std::abs(solver.eigenvalues()[k] - target);
    if (dist < best_dist) {
      best = k;
      best_dist = dist;
    }
  }
  if (best_dist > 1e-6) {
    throw NumericalError("no eigenvalue within 1e-6 of the m0 branch (best " +
                         std::to_string(best_dist) + ")");
  }
  Eigen::VectorXcd amps = solver.eigenvectors().col(best);
  amps /= amps.norm();
  fix_phase(amps);
  return {{q, std::move(amps)}, {eta, m0, solver.eigenvalues()[best]}};
}

OscState squeezed_vacuum(double xi_q, const TruncationPolicy& trunc) {
  if (!(xi_q > 0.0)) {
    throw std::domain_error("xi_q must be positive");
  }
  if (!(trunc.epsilon > 0.0 && trunc.epsilon < 1.0) || trunc.hard_cap < 0) {
    throw std::domain_error("invalid truncation policy");
  }
  const double theta = (1.0 - xi_q * xi_q) / (1.0 + xi_q * xi_q);
  const double theta2 = theta * theta;
  std::vector<double> even_coeffs{std::sqrt(2.0 * xi_q / (1.0 + xi_q * xi_q))};
  double tail = theta2 == 0.0
                    ? 0.0
                    : even_coeffs.back() * even_coeffs.back() * theta2 /
                          (1.0 - theta2);
  int n = 0;
  while (tail >= trunc.epsilon) {
    n += 2;
    if (n > trunc.hard_cap) {
      throw TruncationError("squeezed vacuum at xi_q = " + std::to_string(xi_q) +
                            " needs n_max > " + std::to_string(trunc.hard_cap));
    }
    even_coeffs.push_back(-theta * std::sqrt((n - 1.0) / n) *
                          even_coeffs.back());
    tail = even_coeffs.back() * even_coeffs.back() * theta2 / (1.0 - theta2);
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n + 1);
  for (std::size_t k = 0; k < even_coeffs.size(); ++k) {
    amps[2 * static_cast<int>(k)] = even_coeffs[k];
  }
  amps /= amps.norm();
  return {std::move(amps), n, tail};
}

double spectroscopic_xi_R(const SpinState& state) {
  const SpinMatrices ops = build_spin_operators(state.q);
  const double jz_mean = mean_and_variance(ops.jz, state.amps).mean;
  const double jy_var = mean_and_variance(ops.jy, state.amps).variance;
  if (std::abs(jz_mean) < kJzSentinelTol) {
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(state.q.n_ions() * jy_var) / std::abs(jz_mean);
}

double spectroscopic_xi_R(const Eigen::MatrixXcd& rho_ion) {
  const SpinQuantum q(static_cast<int>(rho_ion.rows()) - 1);
  const SpinMatrices ops = build_spin_operators(q);
  const double jz_mean = mean_and_variance(ops.jz, rho_ion).mean;
  const double jy_var = mean_and_variance(ops.jy, rho_ion).variance;
  if (std::abs(jz_mean) < kJzSentinelTol) {
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(q.n_ions() * jy_var) / std::abs(jz_mean);
}

double motional_xi_q(const OscState& state) {
  const Eigen::MatrixXcd q_op = position_operator(state.n_max + 1);
  return std::sqrt(2.0 * mean_and_variance(q_op, state.amps).variance);
}

double motional_xi_q(const Eigen::MatrixXcd& rho_osc) {
  const Eigen::MatrixXcd q_op =
      position_operator(static_cast<int>(rho_osc.rows()));
  return std::sqrt(2.0 * mean_and_variance(q_op, rho_osc).variance);
}

double jacobi_polynomial(int n, double alpha, double beta, double x) {
  if (n < 0) {
    throw std::domain_error("jacobi_polynomial requires n >= 0");
  }
  const double lower = (x - 1.0) / 2.0;
  const double upper = (x + 1.0) / 2.0;
  double sum = 0.0;
  for (int v = 0; v <= n; ++v) {
    sum += general_binomial(n + alpha, v) * general_binomial(n + beta, n - v) *
           int_pow(lower, n - v) * int_pow(upper, v);
  }
  return sum;
}

ClosedFormPoint jz_and_xi_R_closed_form(double j, double eta, double m0) {
  const SpinQuantum q = SpinQuantum::from_j(j);
  if (q.two_j() < 1) {
    throw std::domain_error("closed form requires j >= 1/2");
  }
  q.index_of_m(m0);
  require_unit_interval(eta);
  const double abs_m0 = std::abs(m0);
  double factor = 1.0;
  if (q.index_of_m(abs_m0) != q.dim() - 1) {  // |m0| < j
    const int degree = static_cast<int>(std::lround(j - abs_m0));
    const double x = 1.0 - 2.0 * eta * eta;
    factor += (j + abs_m0) / j * (1.0 - eta * eta) *
              jacobi_polynomial(degree - 1, 1.0, -2.0 * j, x) /
              jacobi_polynomial(degree, 0.0, -2.0 * j - 1.0, x);
  }
  return {-j * eta * factor, 1.0 / std::sqrt(factor)};
}

double ramsey_uncertainty(const SpinState& state, double T) {
  if (!(T > 0.0)) {
    throw std::domain_error("interrogation time must be positive");
  }
  const SpinMatrices ops = build_spin_operators(state.q);
  const double jz_mean = mean_and_variance(ops.jz, state.amps).mean;
  if (std::abs(jz_mean) < kJzSentinelTol) {
    throw std::domain_error(
        "population inversion vanishes; the frequency measurement is undefined");
  }
  const double jy_var = mean_and_variance(ops.jy, state.amps).variance;
  return std::sqrt(jy_var) / (T * std::abs(jz_mean));
}

std::pair<SpinState, double> two_ion_theta_form(double theta) {
  const double quarter_pi = std::atan(1.0);
  if (!(theta > quarter_pi && theta <= 2.0 * quarter_pi)) {
    throw std::domain_error("theta must lie in (pi/4, pi/2]");
  }
  Eigen::VectorXcd amps(3);
  amps << std::sin(theta), 0.0, std::cos(theta);
  amps /= amps.norm();
  const double xi_R = 1.0 / std::sqrt(1.0 + std::sin(2.0 * theta));
  return {{SpinQuantum(2), std::move(amps)}, xi_R};
}

SqueezingReport squeezing_report(const SpinState& spin, const OscState& osc) {
  const SpinMatrices ops = build_spin_operators(spin.q);
  const MeanVariance jx = mean_and_variance(ops.jx, spin.amps);
  const MeanVariance jy = mean_and_variance(ops.jy, spin.amps);
  const MeanVariance jz = mean_and_variance(ops.jz, spin.amps);
  const int dim = osc.n_max + 1;
  const MeanVariance qv =
      mean_and_variance(position_operator(dim), osc.amps);
  const MeanVariance pv =
      mean_and_variance(momentum_operator(dim), osc.amps);
  SqueezingReport report;
  report.jz_mean = jz.mean;
  report.delta_jx = std::sqrt(jx.variance);
  report.delta_jy = std::sqrt(jy.variance);
  report.delta_q = std::sqrt(qv.variance);
  report.delta_p = std::sqrt(pv.variance);
  report.xi_R = std::abs(jz.mean) < kJzSentinelTol
                    ? std::numeric_limits<double>::infinity()
                    : std::sqrt(spin.q.n_ions() * jy.variance) /
                          std::abs(jz.mean);
  report.xi_q = std::sqrt(2.0 * qv.variance);
  return report;
}

Eigen::MatrixXcd lowering_operator(int dim) {
  if (dim < 1) {
    throw std::domain_error("oscillator dimension must be positive");
  }
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

Eigen::MatrixXcd position_operator(int dim) {
  const Eigen::MatrixXcd a = lowering_operator(dim);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

Eigen::MatrixXcd momentum_operator(int dim) {
  const Eigen::MatrixXcd a = lowering_operator(dim);
  return (a - a.adjoint()) / std::complex<double>(0.0, std::sqrt(2.0));
}

}  // namespace squeezedyn
