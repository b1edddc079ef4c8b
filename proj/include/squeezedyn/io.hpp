// io.hpp — run configuration, CSV/JSON emission, config-file handling
#pragma once

#include <map>
#include <string>
#include <vector>

#include "squeezedyn/analysis.hpp"

namespace squeezedyn {

enum class OutputFormat { csv, json };

struct RunConfig {
  int n_ions = 2;
  double eta = 0.36;
  int m0 = 0;
  double xi_q0 = 0.6;
  double tau_max = 40.0;
  double d_tau = 0.02;
  double trunc_eps = 1e-12;
  int trunc_cap = 512;
  std::string output_path;  // empty -> stdout
  OutputFormat format = OutputFormat::csv;
};

// Re-validates every physical-parameter invariant at parse time; throws
// std::invalid_argument with a usable diagnostic.
void validate(const RunConfig& config);

StatePrep to_prep(const RunConfig& config);
TimeGrid to_grid(const RunConfig& config);

OutputFormat parse_format(const std::string& name);
const char* format_name(OutputFormat format);

// Lossless double formatting (17 significant digits).
std::string format_double(double value);

// "min:max:step" -> inclusive uniform grid; throws std::invalid_argument on
// malformed specs and on empty grids.
std::vector<double> parse_grid_spec(const std::string& spec);

// Time-series emission, header "tau,S_ion,xi_R,xi_q,Jz_mean".
std::string trajectory_csv(const Trajectory& traj);
std::string trajectory_json(const Trajectory& traj, const RunConfig& config,
                            int n_max_used);

// Sweep emission, header "param,S_avg,S_amp,dxi_R,dxi_q,dJz,xi_R_min,xi_q_min".
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows,
                       const RunConfig& config, const std::string& axis,
                       const std::string& grid_spec);

// Parses numeric CSV produced by the emitters; returns rows, optionally the
// header line.
std::vector<std::vector<double>> parse_csv(const std::string& text,
                                           std::string* header = nullptr);

// Rebuilds the configuration from a JSON document's meta block, enough to
// re-run the identical computation.
RunConfig config_from_meta(const std::string& json_text);

// Flat key=value config file ('#' comments allowed); keys use the CLI flag
// spelling without dashes, e.g. "n-ions=2". Unknown keys are errors.
std::map<std::string, std::string> load_config_file(const std::string& path);
void apply_config(RunConfig& config,
                  const std::map<std::string, std::string>& kv);

// Writes content to path via a temp file + rename.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace squeezedyn
