// states.hpp — initial-state constructors and closed-form squeezing metrics
#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "squeezedyn/spin_algebra.hpp"

namespace squeezedyn {

// Pure collective-spin state; amplitudes indexed s = 0..2j with m = -j + s.
// Normalized, with the first nonzero amplitude (lowest m) real positive.
struct SpinState {
  SpinQuantum q;
  Eigen::VectorXcd amps;
};

struct TruncationPolicy {
  double epsilon = 1e-12;  // pre-normalization tail mass allowed past n_max
  int hard_cap = 512;      // largest acceptable n_max
};

// Pure oscillator state on Fock states |0>..|n_max|. tail_bound is the
// guaranteed pre-normalization weight dropped beyond n_max.
struct OscState {
  Eigen::VectorXcd amps;
  int n_max = 0;
  double tail_bound = 0.0;
};

// Parameters of a spin intelligent state: eigenvector of eta*Jx - i*Jy with
// eigenvalue lambda = i*m0*sqrt(1 - eta^2).
struct IntelligentSpec {
  double eta = 0.0;
  double m0 = 0.0;
  std::complex<double> lambda;
};

struct SqueezingReport {
  double xi_R = 0.0;
  double xi_q = 0.0;
  double jz_mean = 0.0;
  double delta_jx = 0.0;
  double delta_jy = 0.0;
  double delta_q = 0.0;
  double delta_p = 0.0;
};

SpinState dicke_state(const SpinQuantum& q, double m);
OscState fock_state(int n, int n_max);

// Spin intelligent state on the m0 = 0 eigenvalue branch, built from the
// closed-form Dicke-basis coefficients. Requires integer j (even ion
// number) and 0 < eta < 1. Odd-offset amplitudes are exactly zero.
SpinState intelligent_state_m0_zero(int j, double eta);

// General intelligent state: numerically solves the non-Hermitian
// eigenproblem for eta*Jx - i*Jy and selects the branch whose eigenvalue is
// nearest i*m0*sqrt(1-eta^2). Throws NumericalError if the best match is
// worse than 1e-6.
std::pair<SpinState, IntelligentSpec> intelligent_state_general(
    const SpinQuantum& q, double eta, double m0);

// Squeezed vacuum with quadrature squeezing xi_q = sqrt(2)*dq. Even-n
// amplitudes only; n_max is chosen so the dropped tail mass is below
// trunc.epsilon (TruncationError if that needs more than trunc.hard_cap).
// Values xi_q > 1 (anti-squeezed in q) are accepted by the same formula.
OscState squeezed_vacuum(double xi_q, const TruncationPolicy& trunc = {});

// Spectroscopic squeezing parameter sqrt(N)*dJy/|<Jz>|. Returns +infinity
// when |<Jz>| < 1e-12.
double spectroscopic_xi_R(const SpinState& state);
double spectroscopic_xi_R(const Eigen::MatrixXcd& rho_ion);

// Motional squeezing parameter sqrt(2)*dq on the truncated Fock space.
double motional_xi_q(const OscState& state);
double motional_xi_q(const Eigen::MatrixXcd& rho_osc);

// Jacobi polynomial P_n^{(alpha,beta)}(x) by the explicit finite sum with
// generalized binomial coefficients; valid for the negative integer
// parameters that appear in the intelligent-state closed forms.
double jacobi_polynomial(int n, double alpha, double beta, double x);

struct ClosedFormPoint {
  double jz_mean = 0.0;
  double xi_R = 0.0;
};

// <Jz> = -j*eta*F and xi_R = F^{-1/2} for the intelligent state (j, eta,
// m0), with F the Jacobi-polynomial ratio form evaluated at 1 - 2*eta^2.
ClosedFormPoint jz_and_xi_R_closed_form(double j, double eta, double m0);

// Ramsey frequency uncertainty dJy/(T*|<Jz>|) for interrogation time T.
// Throws std::domain_error when <Jz> vanishes (no signal slope).
double ramsey_uncertainty(const SpinState& state, double T);

// Two-ion parameterization sin(theta)|1,-1> + cos(theta)|1,+1> with
// xi_R = (1 + sin 2*theta)^{-1/2}; theta in (pi/4, pi/2].
std::pair<SpinState, double> two_ion_theta_form(double theta);

SqueezingReport squeezing_report(const SpinState& spin, const OscState& osc);

// Quadrature operators on an n-dimensional truncated Fock space.
Eigen::MatrixXcd lowering_operator(int dim);
Eigen::MatrixXcd position_operator(int dim);   // q = (a + a^dag)/sqrt(2)
Eigen::MatrixXcd momentum_operator(int dim);   // p = (a - a^dag)/(i sqrt(2))

}  // namespace squeezedyn
