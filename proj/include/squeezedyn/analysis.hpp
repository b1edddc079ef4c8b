// analysis.hpp — trajectory statistics, parameter sweeps, equilibrium probes
#pragma once

#include <vector>

#include "squeezedyn/observables.hpp"

namespace squeezedyn {

struct TimeGrid {
  double tau_max = 40.0;
  double d_tau = 0.02;

  int samples() const;              // floor(tau_max/d_tau) + 1
  double tau_at(int k) const { return k * d_tau; }
};

// Parameters of the initial product state |eta, m0>_ion x |xi_q0>_osc.
struct StatePrep {
  SpinQuantum q;
  double eta = 0.0;
  double m0 = 0.0;
  double xi_q0 = 1.0;
  TruncationPolicy trunc{};
};

SpinState prepare_spin(const StatePrep& prep);
JointState prepare_joint(const StatePrep& prep);

struct Trajectory {
  TimeGrid grid;
  std::vector<Snapshot> snapshots;
  Snapshot mean;       // field-wise time averages (including tau = 0)
  Snapshot minimum;    // field-wise minima
  Snapshot maximum;    // field-wise maxima
  Snapshot amplitude;  // field-wise max - min
};

Trajectory run_trajectory(const StatePrep& prep, const TimeGrid& grid);
// Variant sharing a pre-built BlockSet (must cover the state's max L).
Trajectory run_trajectory(const StatePrep& prep, const TimeGrid& grid,
                          const BlockSet& blocks);

struct SweepRow {
  double param = 0.0;
  double S_avg = 0.0;
  double S_amp = 0.0;
  double dxi_R = 0.0;   // mean xi_R - xi_R(0)
  double dxi_q = 0.0;
  double dJz = 0.0;
  double xi_R_min = 0.0;
  double xi_q_min = 0.0;
};

// One trajectory per parameter value; points run in parallel and are merged
// in input order, so output is deterministic.
std::vector<SweepRow> sweep_eta(const SpinQuantum& q, double xi_q0,
                                const std::vector<double>& etas,
                                const TimeGrid& grid,
                                const TruncationPolicy& trunc = {});
std::vector<SweepRow> sweep_xi_q(const SpinQuantum& q, double eta,
                                 const std::vector<double>& xi_q0s,
                                 const TimeGrid& grid,
                                 const TruncationPolicy& trunc = {});

// || H |psi(0)> || on the truncated space, in units of g.
double eigenstate_residual(const StatePrep& prep);

struct StabilityPoint {
  double detuning = 0.0;
  double max_S_ion = 0.0;
};

// Max entropy reached for eta = xi_q0^2 + delta, per detuning delta.
std::vector<StabilityPoint> stability_probe(const SpinQuantum& q, double xi_q0,
                                            const std::vector<double>& detunings,
                                            const TimeGrid& grid,
                                            const TruncationPolicy& trunc = {});

// Least-squares slope of ln(max S) vs ln|delta|; zero-detuning points are
// skipped. Reported, not asserted: expected near 2.
double fit_power_law_exponent(const std::vector<StabilityPoint>& points);

struct SurveyRow {
  double xi_q0 = 0.0;
  double dxi_R = 0.0;
  double dxi_q = 0.0;
  double residual = 0.0;
  bool both_improved = false;
};

struct SurveyReport {
  std::vector<SurveyRow> rows;
  double improvement_tol = 1e-6;
  bool any_both_improved = false;
  double min_residual = 0.0;
};

// m0 != 0 negative result: flags any grid point where both squeezing
// averages improve beyond tolerance (none is expected).
SurveyReport m0_nonzero_survey(const SpinQuantum& q, double eta, double m0,
                               const std::vector<double>& xi_q0s,
                               const TimeGrid& grid,
                               const TruncationPolicy& trunc = {});

struct ConservationReport {
  double norm_drift = 0.0;
  double h_mean_drift = 0.0;
  double h_square_drift = 0.0;
  double entropy_gap_max = 0.0;   // max |S_ion - S_osc|
  double min_rho_eigenvalue = 0.0;
  double max_S_ion = 0.0;
  double entropy_cap = 0.0;       // ln(2j+1)
};

// Runs a trajectory and checks the conserved quantities at every sample.
ConservationReport conservation_battery(const StatePrep& prep,
                                        const TimeGrid& grid);

}  // namespace squeezedyn
