// squeeze-dyn — CLI for the trapped-ion squeezing-exchange simulator.
//
// Subcommands:
//   simulate  time series of S_ion, xi_R, xi_q, <Jz> for one initial state
//   sweep     trajectory statistics over an eta or xi-q grid
//   verify    invariant battery + equilibrium check for a configuration
//
// A flat key=value config file can seed any option via SQUEEZE_DYN_CONFIG;
// command-line flags override it.

#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "squeezedyn/io.hpp"

namespace sqd = squeezedyn;

namespace {

struct SweepOptions {
  std::string axis;
  std::string grid_spec;
};

void add_common_options(CLI::App* cmd, sqd::RunConfig& config) {
  cmd->add_option("--n-ions", config.n_ions, "number of ions (even, >= 2)");
  cmd->add_option("--eta", config.eta, "spin squeezing parameter in (0, 1)");
  cmd->add_option("--m0", config.m0, "intelligent-state branch index");
  cmd->add_option("--xi-q", config.xi_q0, "initial motional squeezing xi_q(0)");
  cmd->add_option("--tau-max", config.tau_max, "trajectory horizon (tau = g t)");
  cmd->add_option("--d-tau", config.d_tau, "sampling step");
  cmd->add_option("--trunc-eps", config.trunc_eps,
                  "allowed squeezed-vacuum tail mass");
  cmd->add_option("--trunc-cap", config.trunc_cap, "largest allowed n_max");
  cmd->add_option("--output", config.output_path,
                  "output file (default: stdout)");
  cmd->add_option_function<std::string>(
         "--format",
         [&config](const std::string& name) {
           config.format = sqd::parse_format(name);
         },
         "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void emit(const sqd::RunConfig& config, const std::string& content) {
  if (config.output_path.empty()) {
    std::cout << content;
  } else {
    sqd::write_text_atomic(config.output_path, content);
  }
}

int cmd_simulate(const sqd::RunConfig& config) {
  sqd::validate(config);
  const sqd::Trajectory traj =
      sqd::run_trajectory(sqd::to_prep(config), sqd::to_grid(config));
  if (config.format == sqd::OutputFormat::csv) {
    emit(config, sqd::trajectory_csv(traj));
  } else {
    const int n_max =
        sqd::squeezed_vacuum(config.xi_q0,
                             sqd::TruncationPolicy{config.trunc_eps,
                                                   config.trunc_cap})
            .n_max;
    emit(config, sqd::trajectory_json(traj, config, n_max));
  }
  return 0;
}

int cmd_sweep(const sqd::RunConfig& config, const SweepOptions& opts) {
  sqd::validate(config);
  if (config.m0 != 0) {
    throw std::invalid_argument("sweep requires m0 = 0");
  }
  const std::vector<double> grid = sqd::parse_grid_spec(opts.grid_spec);
  const sqd::SpinQuantum q = sqd::SpinQuantum::for_ions(config.n_ions);
  const sqd::TruncationPolicy trunc{config.trunc_eps, config.trunc_cap};
  std::vector<sqd::SweepRow> rows;
  if (opts.axis == "eta") {
    rows = sqd::sweep_eta(q, config.xi_q0, grid, sqd::to_grid(config), trunc);
  } else if (opts.axis == "xi-q") {
    rows = sqd::sweep_xi_q(q, config.eta, grid, sqd::to_grid(config), trunc);
  } else {
    throw std::invalid_argument("axis must be eta or xi-q");
  }
  if (config.format == sqd::OutputFormat::csv) {
    emit(config, sqd::sweep_csv(rows));
  } else {
    emit(config, sqd::sweep_json(rows, config, opts.axis, opts.grid_spec));
  }
  return 0;
}

class CheckReporter {
 public:
  void check(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail
              << "\n";
    failures_ += pass ? 0 : 1;
  }
  void note(const std::string& name, const std::string& detail) {
    std::cout << "[INFO] " << name << ": " << detail << "\n";
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

int cmd_verify(const sqd::RunConfig& config, bool self_test) {
  sqd::validate(config);
  const sqd::StatePrep prep = sqd::to_prep(config);
  const sqd::SpinQuantum q = prep.q;
  CheckReporter report;

  {
    const sqd::SpinMatrices ops = sqd::build_spin_operators(q);
    const std::complex<double> i_unit(0.0, 1.0);
    const double comm =
        (ops.jx * ops.jy - ops.jy * ops.jx - i_unit * ops.jz)
            .cwiseAbs()
            .maxCoeff();
    const Eigen::MatrixXcd casimir =
        ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
    const double cas_dev =
        (casimir - q.j() * (q.j() + 1.0) *
                       Eigen::MatrixXcd::Identity(q.dim(), q.dim()))
            .cwiseAbs()
            .maxCoeff();
    report.check("spin algebra",
                 comm <= 1e-12 && cas_dev <= 1e-12,
                 "commutator dev " + sqd::format_double(comm) + ", Casimir dev " +
                     sqd::format_double(cas_dev));
  }

  const sqd::SpinState spin = sqd::prepare_spin(prep);
  {
    const sqd::SpinMatrices ops = sqd::build_spin_operators(q);
    const Eigen::MatrixXcd op =
        prep.eta * ops.jx - std::complex<double>(0.0, 1.0) * ops.jy;
    const std::complex<double> lambda(
        0.0, prep.m0 * std::sqrt(1.0 - prep.eta * prep.eta));
    const double resid = (op * spin.amps - lambda * spin.amps).norm();
    const sqd::MeanVariance jx = sqd::mean_and_variance(ops.jx, spin.amps);
    const sqd::MeanVariance jy = sqd::mean_and_variance(ops.jy, spin.amps);
    const sqd::MeanVariance jz = sqd::mean_and_variance(ops.jz, spin.amps);
    const double equality = std::abs(std::sqrt(jx.variance * jy.variance) -
                                     0.5 * std::abs(jz.mean));
    const double ratio_dev =
        std::abs(std::sqrt(jy.variance / jx.variance) - prep.eta);
    report.check("intelligent state",
                 resid <= 1e-10 && equality <= 1e-10 && ratio_dev <= 1e-10,
                 "eigen-residual " + sqd::format_double(resid) +
                     ", uncertainty-equality dev " +
                     sqd::format_double(equality) + ", dJy/dJx-eta dev " +
                     sqd::format_double(ratio_dev));
  }

  const sqd::OscState osc = sqd::squeezed_vacuum(prep.xi_q0, prep.trunc);
  {
    bool parity_ok = true;
    for (int n = 1; n <= osc.n_max; n += 2) {
      parity_ok = parity_ok && osc.amps[n] == 0.0;
    }
    const int dim = osc.n_max + 1;
    const sqd::MeanVariance qv =
        sqd::mean_and_variance(sqd::position_operator(dim), osc.amps);
    const sqd::MeanVariance pv =
        sqd::mean_and_variance(sqd::momentum_operator(dim), osc.amps);
    const double product_dev =
        std::abs(std::sqrt(qv.variance * pv.variance) - 0.5);
    const double ratio_dev =
        std::abs(qv.variance / pv.variance - std::pow(prep.xi_q0, 4.0));
    const Eigen::MatrixXcd wh_op =
        prep.xi_q0 * prep.xi_q0 * sqd::momentum_operator(dim) -
        std::complex<double>(0.0, 1.0) * sqd::position_operator(dim);
    const double wh_resid = (wh_op * osc.amps).norm();
    report.check(
        "squeezed vacuum",
        parity_ok && osc.tail_bound < prep.trunc.epsilon &&
            product_dev <= 1e-8 && ratio_dev <= 1e-8 && wh_resid <= 1e-8,
        "tail bound " + sqd::format_double(osc.tail_bound) + ", dq*dp-1/2 " +
            sqd::format_double(product_dev) + ", eigen-residual " +
            sqd::format_double(wh_resid));
  }

  if (prep.q.integer_j()) {
    const sqd::ClosedFormPoint cf =
        sqd::jz_and_xi_R_closed_form(q.j(), prep.eta, prep.m0);
    const sqd::SpinMatrices ops = sqd::build_spin_operators(q);
    const double jz = sqd::mean_and_variance(ops.jz, spin.amps).mean;
    const double xi = sqd::spectroscopic_xi_R(spin);
    report.check("closed form",
                 std::abs(jz - cf.jz_mean) <= 1e-9 &&
                     std::abs(xi - cf.xi_R) <= 1e-9,
                 "<Jz> dev " + sqd::format_double(std::abs(jz - cf.jz_mean)) +
                     ", xi_R dev " + sqd::format_double(std::abs(xi - cf.xi_R)));
  }

  {
    bool ok = true;
    double worst = 0.0;
    for (int L = 0; L <= 60; ++L) {
      const sqd::SubspaceBlock blk =
          sqd::block_eigensystem(sqd::block_hamiltonian(q, L));
      const double ortho =
          (blk.eigenvectors.transpose() * blk.eigenvectors -
           Eigen::MatrixXd::Identity(blk.dim, blk.dim))
              .cwiseAbs()
              .maxCoeff();
      ok = ok && ortho <= 1e-10;
      if (blk.dim % 2 == 1) {
        const double zero_dist = blk.eigenvalues.cwiseAbs().minCoeff();
        worst = std::max(worst, zero_dist);
        ok = ok && zero_dist <= 1e-10;
      }
    }
    report.check("block spectra", ok,
                 "odd-dim blocks L<=60, worst |E0| " + sqd::format_double(worst));
  }

  const sqd::JointState joint = sqd::decompose(spin, osc);
  report.check("decomposition norm",
               std::abs(joint.norm() - 1.0) <= 1e-12,
               "|norm-1| = " + sqd::format_double(std::abs(joint.norm() - 1.0)));

  {
    const double resid = sqd::truncated_hamiltonian_residual(joint);
    report.check("eigenstate condition (eta = xi_q^2)", resid <= 1e-9,
                 "||H psi|| = " + sqd::format_double(resid) +
                     " (equilibrium eta would be " +
                     sqd::format_double(prep.xi_q0 * prep.xi_q0) + ")");
  }

  {
    const sqd::ConservationReport cons =
        sqd::conservation_battery(prep, sqd::to_grid(config));
    const bool ok = cons.norm_drift <= 1e-9 && cons.h_mean_drift <= 1e-9 &&
                    cons.h_square_drift <= 1e-9 &&
                    cons.entropy_gap_max <= 1e-8 &&
                    cons.min_rho_eigenvalue >= -1e-10 &&
                    cons.max_S_ion <= cons.entropy_cap + 1e-9;
    report.check(
        "conservation",
        ok,
        "norm drift " + sqd::format_double(cons.norm_drift) + ", <H> drift " +
            sqd::format_double(cons.h_mean_drift) + ", <H^2> drift " +
            sqd::format_double(cons.h_square_drift) + ", |S_ion-S_osc| " +
            sqd::format_double(cons.entropy_gap_max) + ", min rho eig " +
            sqd::format_double(cons.min_rho_eigenvalue));
  }

  if (q.integer_j() && prep.m0 == 0.0) {
    const double base = prep.xi_q0 * prep.xi_q0;
    std::vector<double> detunings;
    for (double delta : {0.1, 0.05, 0.025}) {
      if (base + delta > 0.0 && base + delta < 1.0) detunings.push_back(delta);
    }
    if (detunings.size() >= 2) {
      const auto points = sqd::stability_probe(q, prep.xi_q0, detunings,
                                               sqd::to_grid(config), prep.trunc);
      bool monotone = true;
      for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        monotone = monotone && points[i].max_S_ion > points[i + 1].max_S_ion;
      }
      report.check("stability", monotone,
                   "max S_ion decreases toward the equilibrium point");
      report.note("stability exponent",
                  sqd::format_double(sqd::fit_power_law_exponent(points)) +
                      " (fit of max S_ion vs detuning; near 2 expected)");
    }
  }

  if (self_test) {
    std::mt19937_64 rng(20250811);
    std::normal_distribution<double> gauss;
    const int n_max = 40;
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXcd c(q.dim());
      for (int s = 0; s < q.dim(); ++s) c[s] = {gauss(rng), gauss(rng)};
      c /= c.norm();
      Eigen::VectorXcd b(n_max + 1);
      for (int n = 0; n <= n_max; ++n) b[n] = {gauss(rng), gauss(rng)};
      b /= b.norm();
      const sqd::JointState state =
          sqd::decompose(sqd::SpinState{q, c}, sqd::OscState{b, n_max, 0.0});
      const sqd::BlockSet blocks(q, state.max_L());
      for (double tau : {1.0, 5.0, 10.0}) {
        const Eigen::VectorXcd fast =
            sqd::flatten(sqd::evolve(state, blocks, tau));
        const Eigen::VectorXcd slow =
            sqd::flatten(sqd::dense_propagator_oracle(state, tau));
        worst = std::max(worst, (fast - slow).cwiseAbs().maxCoeff());
      }
    }
    report.check("dense propagator oracle", worst <= 1e-8,
                 "max amplitude difference " + sqd::format_double(worst));
  }

  if (report.failures() > 0) {
    std::cout << report.failures() << " check(s) failed\n";
    return 2;
  }
  std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trapped-ion / motional-mode squeezing-exchange simulator"};
  app.require_subcommand(1);

  sqd::RunConfig config;
  try {
    if (const char* path = std::getenv("SQUEEZE_DYN_CONFIG")) {
      sqd::apply_config(config, sqd::load_config_file(path));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App* simulate =
      app.add_subcommand("simulate", "evolve one initial state");
  add_common_options(simulate, config);

  SweepOptions sweep_opts;
  CLI::App* sweep =
      app.add_subcommand("sweep", "trajectory statistics over a parameter grid");
  add_common_options(sweep, config);
  sweep->add_option("--axis", sweep_opts.axis, "swept parameter: eta or xi-q")
      ->required()
      ->check(CLI::IsMember({"eta", "xi-q"}));
  sweep->add_option("--grid", sweep_opts.grid_spec, "grid spec min:max:step")
      ->required();

  bool self_test = false;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant battery");
  add_common_options(verify, config);
  verify->add_flag("--self-test", self_test,
                   "also compare against the dense propagator oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config);
    if (sweep->parsed()) return cmd_sweep(config, sweep_opts);
    return cmd_verify(config, self_test);
  } catch (const sqd::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
