#include "squeezedyn/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace squeezedyn {

namespace {

constexpr std::array<double Snapshot::*, 5> kSnapshotFields = {
    &Snapshot::tau, &Snapshot::S_ion, &Snapshot::xi_R, &Snapshot::xi_q,
    &Snapshot::Jz_mean};

// Runs worker(i) for i = 0..count-1 on up to hardware_concurrency threads.
// Workers must write only to their own slot, so results are deterministic.
void parallel_for_index(int count, const std::function<void(int)>& worker) {
  const unsigned hw = std::thread::hardware_concurrency();
  const int n_threads = std::max(1, std::min<int>(hw == 0 ? 1 : hw, count));
  if (n_threads == 1) {
    for (int i = 0; i < count; ++i) worker(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n_threads);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += n_threads) worker(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

SweepRow row_from_trajectory(double param, const Trajectory& traj) {
  const Snapshot& first = traj.snapshots.front();
  SweepRow row;
  row.param = param;
  row.S_avg = traj.mean.S_ion;
  row.S_amp = traj.amplitude.S_ion;
  row.dxi_R = traj.mean.xi_R - first.xi_R;
  row.dxi_q = traj.mean.xi_q - first.xi_q;
  row.dJz = traj.mean.Jz_mean - first.Jz_mean;
  row.xi_R_min = traj.minimum.xi_R;
  row.xi_q_min = traj.minimum.xi_q;
  return row;
}

}  // namespace

int TimeGrid::samples() const {
  if (!(d_tau > 0.0)) {
    throw std::domain_error("d_tau must be positive");
  }
  if (tau_max < 0.0) {
    throw std::domain_error("tau_max must be non-negative");
  }
  return static_cast<int>(std::floor(tau_max / d_tau + 1e-9)) + 1;
}

SpinState prepare_spin(const StatePrep& prep) {
  prep.q.index_of_m(prep.m0);  // validates |m0| <= j and parity
  if (prep.m0 == 0.0) {
    if (!prep.q.integer_j()) {
      throw std::domain_error("m0 = 0 requires an even number of ions");
    }
    return intelligent_state_m0_zero(prep.q.two_j() / 2, prep.eta);
  }
  return intelligent_state_general(prep.q, prep.eta, prep.m0).first;
}

JointState prepare_joint(const StatePrep& prep) {
  return decompose(prepare_spin(prep), squeezed_vacuum(prep.xi_q0, prep.trunc));
}

Trajectory run_trajectory(const StatePrep& prep, const TimeGrid& grid) {
  const JointState initial = prepare_joint(prep);
  const BlockSet blocks(prep.q, initial.max_L());
  return run_trajectory(prep, grid, blocks);
}

Trajectory run_trajectory(const StatePrep& prep, const TimeGrid& grid,
                          const BlockSet& blocks) {
  const JointState initial = prepare_joint(prep);
  const ObservableSet obs(prep.q, initial.osc_dim());
  const int samples = grid.samples();

  Trajectory traj;
  traj.grid = grid;
  traj.snapshots.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double tau = grid.tau_at(k);
    traj.snapshots.push_back(obs.take(evolve(initial, blocks, tau), tau));
  }

  traj.minimum = traj.maximum = traj.snapshots.front();
  Snapshot sum = traj.snapshots.front();
  for (int k = 1; k < samples; ++k) {
    for (auto field : kSnapshotFields) {
      const double value = traj.snapshots[k].*field;
      sum.*field += value;
      traj.minimum.*field = std::min(traj.minimum.*field, value);
      traj.maximum.*field = std::max(traj.maximum.*field, value);
    }
  }
  for (auto field : kSnapshotFields) {
    traj.mean.*field = sum.*field / samples;
    traj.amplitude.*field = traj.maximum.*field - traj.minimum.*field;
  }
  return traj;
}

std::vector<SweepRow> sweep_eta(const SpinQuantum& q, double xi_q0,
                                const std::vector<double>& etas,
                                const TimeGrid& grid,
                                const TruncationPolicy& trunc) {
  const OscState osc = squeezed_vacuum(xi_q0, trunc);
  const BlockSet blocks(q, osc.n_max + q.n_ions());
  std::vector<SweepRow> rows(etas.size());
  parallel_for_index(static_cast<int>(etas.size()), [&](int i) {
    const StatePrep prep{q, etas[i], 0.0, xi_q0, trunc};
    rows[i] = row_from_trajectory(etas[i], run_trajectory(prep, grid, blocks));
  });
  return rows;
}

std::vector<SweepRow> sweep_xi_q(const SpinQuantum& q, double eta,
                                 const std::vector<double>& xi_q0s,
                                 const TimeGrid& grid,
                                 const TruncationPolicy& trunc) {
  int max_L = 0;
  for (double xi : xi_q0s) {
    max_L = std::max(max_L, squeezed_vacuum(xi, trunc).n_max + q.n_ions());
  }
  const BlockSet blocks(q, max_L);
  std::vector<SweepRow> rows(xi_q0s.size());
  parallel_for_index(static_cast<int>(xi_q0s.size()), [&](int i) {
    const StatePrep prep{q, eta, 0.0, xi_q0s[i], trunc};
    rows[i] =
        row_from_trajectory(xi_q0s[i], run_trajectory(prep, grid, blocks));
  });
  return rows;
}

double eigenstate_residual(const StatePrep& prep) {
  return truncated_hamiltonian_residual(prepare_joint(prep));
}

std::vector<StabilityPoint> stability_probe(const SpinQuantum& q, double xi_q0,
                                            const std::vector<double>& detunings,
                                            const TimeGrid& grid,
                                            const TruncationPolicy& trunc) {
  std::vector<StabilityPoint> points(detunings.size());
  parallel_for_index(static_cast<int>(detunings.size()), [&](int i) {
    const double eta = xi_q0 * xi_q0 + detunings[i];
    if (!(eta > 0.0 && eta < 1.0)) {
      throw std::domain_error("detuning " + std::to_string(detunings[i]) +
                              " pushes eta outside (0, 1)");
    }
    const StatePrep prep{q, eta, 0.0, xi_q0, trunc};
    points[i] = {detunings[i], run_trajectory(prep, grid).maximum.S_ion};
  });
  return points;
}

double fit_power_law_exponent(const std::vector<StabilityPoint>& points) {
  std::vector<double> lx, ly;
  for (const auto& p : points) {
    if (p.detuning != 0.0 && p.max_S_ion > 0.0) {
      lx.push_back(std::log(std::abs(p.detuning)));
      ly.push_back(std::log(p.max_S_ion));
    }
  }
  if (lx.size() < 2) {
    throw std::domain_error("power-law fit needs at least two nonzero points");
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SurveyReport m0_nonzero_survey(const SpinQuantum& q, double eta, double m0,
                               const std::vector<double>& xi_q0s,
                               const TimeGrid& grid,
                               const TruncationPolicy& trunc) {
  if (m0 == 0.0) {
    throw std::domain_error("survey requires m0 != 0");
  }
  SurveyReport report;
  report.rows.resize(xi_q0s.size());
  parallel_for_index(static_cast<int>(xi_q0s.size()), [&](int i) {
    const StatePrep prep{q, eta, m0, xi_q0s[i], trunc};
    const Trajectory traj = run_trajectory(prep, grid);
    SurveyRow& row = report.rows[i];
    row.xi_q0 = xi_q0s[i];
    row.dxi_R = traj.mean.xi_R - traj.snapshots.front().xi_R;
    row.dxi_q = traj.mean.xi_q - traj.snapshots.front().xi_q;
    row.residual = eigenstate_residual(prep);
    row.both_improved = row.dxi_R < -report.improvement_tol &&
                        row.dxi_q < -report.improvement_tol;
  });
  report.min_residual = report.rows.front().residual;
  for (const auto& row : report.rows) {
    report.any_both_improved |= row.both_improved;
    report.min_residual = std::min(report.min_residual, row.residual);
  }
  return report;
}

ConservationReport conservation_battery(const StatePrep& prep,
                                        const TimeGrid& grid) {
  const JointState initial = prepare_joint(prep);
  const BlockSet blocks(prep.q, initial.max_L());
  const HamiltonianMoments moments0 = hamiltonian_moments(initial);

  ConservationReport report;
  report.entropy_cap = std::log(static_cast<double>(prep.q.dim()));
  report.min_rho_eigenvalue = 1.0;
  const int samples = grid.samples();
  for (int k = 0; k < samples; ++k) {
    const JointState state = evolve(initial, blocks, grid.tau_at(k));
    report.norm_drift =
        std::max(report.norm_drift, std::abs(state.norm() - 1.0));
    const HamiltonianMoments moments = hamiltonian_moments(state);
    report.h_mean_drift =
        std::max(report.h_mean_drift, std::abs(moments.mean - moments0.mean));
    report.h_square_drift = std::max(
        report.h_square_drift, std::abs(moments.square - moments0.square));

    const Eigen::VectorXd ion_evals = density_eigenvalues(reduce_ion(state));
    const Eigen::VectorXd osc_evals = density_eigenvalues(reduce_osc(state));
    report.min_rho_eigenvalue = std::min(
        {report.min_rho_eigenvalue, ion_evals.minCoeff(), osc_evals.minCoeff()});
    const double s_ion = entropy_from_eigenvalues(ion_evals);
    const double s_osc = entropy_from_eigenvalues(osc_evals);
    report.entropy_gap_max =
        std::max(report.entropy_gap_max, std::abs(s_ion - s_osc));
    report.max_S_ion = std::max(report.max_S_ion, s_ion);
  }
  return report;
}

}  // namespace squeezedyn
