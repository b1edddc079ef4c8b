#include "squeezedyn/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace squeezedyn {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* kTrajectoryHeader = "tau,S_ion,xi_R,xi_q,Jz_mean";
const char* kSweepHeader = "param,S_avg,S_amp,dxi_R,dxi_q,dJz,xi_R_min,xi_q_min";

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse " + what + ": '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument("trailing garbage in " + what + ": '" + text +
                                "'");
  }
  return value;
}

int parse_int(const std::string& text, const std::string& what) {
  const double value = parse_double(text, what);
  const int rounded = static_cast<int>(std::lround(value));
  if (value != rounded) {
    throw std::invalid_argument(what + " must be an integer, got '" + text +
                                "'");
  }
  return rounded;
}

// JSON has no non-finite numbers; keep them lossless as strings.
ordered_json json_number(double value) {
  if (std::isfinite(value)) return value;
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

double number_from_json(const ordered_json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>(), "json number");
  return j.get<double>();
}

ordered_json meta_block(const RunConfig& config, const std::string& command,
                        int n_max_used) {
  ordered_json meta;
  meta["command"] = command;
  meta["n_ions"] = config.n_ions;
  meta["eta"] = config.eta;
  meta["m0"] = config.m0;
  meta["xi_q0"] = config.xi_q0;
  meta["tau_max"] = config.tau_max;
  meta["d_tau"] = config.d_tau;
  meta["trunc_eps"] = config.trunc_eps;
  meta["trunc_cap"] = config.trunc_cap;
  meta["format"] = format_name(config.format);
  meta["output"] = config.output_path;
  meta["n_max"] = n_max_used;
  return meta;
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.n_ions < 2) {
    throw std::invalid_argument("n-ions must be at least 2");
  }
  if (config.n_ions % 2 != 0) {
    if (config.m0 == 0) {
      throw std::invalid_argument("m0 = 0 requires an even number of ions");
    }
    throw std::invalid_argument(
        "n-ions must be even (integer m0 needs integer j = N/2)");
  }
  if (!(config.eta > 0.0 && config.eta < 1.0)) {
    throw std::invalid_argument("eta must lie in (0, 1)");
  }
  if (!(config.xi_q0 > 0.0)) {
    throw std::invalid_argument("xi-q must be positive");
  }
  if (std::abs(config.m0) > config.n_ions / 2) {
    throw std::invalid_argument("|m0| must not exceed j = n-ions/2");
  }
  if (config.tau_max < 0.0) {
    throw std::invalid_argument("tau-max must be non-negative");
  }
  if (!(config.d_tau > 0.0)) {
    throw std::invalid_argument("d-tau must be positive");
  }
  if (!(config.trunc_eps > 0.0 && config.trunc_eps < 1.0)) {
    throw std::invalid_argument("trunc-eps must lie in (0, 1)");
  }
  if (config.trunc_cap < 0) {
    throw std::invalid_argument("trunc-cap must be non-negative");
  }
}

StatePrep to_prep(const RunConfig& config) {
  return {SpinQuantum::for_ions(config.n_ions), config.eta,
          static_cast<double>(config.m0), config.xi_q0,
          TruncationPolicy{config.trunc_eps, config.trunc_cap}};
}

TimeGrid to_grid(const RunConfig& config) {
  return {config.tau_max, config.d_tau};
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("format must be csv or json, got '" + name + "'");
}

const char* format_name(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream stream(spec);
  while (std::getline(stream, token, ':')) {
    parts.push_back(token);
  }
  if (parts.size() != 3) {
    throw std::invalid_argument("grid spec must be min:max:step, got '" + spec +
                                "'");
  }
  const double min = parse_double(parts[0], "grid min");
  const double max = parse_double(parts[1], "grid max");
  const double step = parse_double(parts[2], "grid step");
  if (!(step > 0.0)) {
    throw std::invalid_argument("grid step must be positive");
  }
  const int count = static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
  if (count < 1) {
    throw std::invalid_argument("empty grid: '" + spec + "'");
  }
  std::vector<double> values(count);
  for (int k = 0; k < count; ++k) {
    values[k] = min + k * step;
  }
  return values;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const Snapshot& s : traj.snapshots) {
    out += format_double(s.tau);
    out += ',';
    out += format_double(s.S_ion);
    out += ',';
    out += format_double(s.xi_R);
    out += ',';
    out += format_double(s.xi_q);
    out += ',';
    out += format_double(s.Jz_mean);
    out += '\n';
  }
  return out;
}

std::string trajectory_json(const Trajectory& traj, const RunConfig& config,
                            int n_max_used) {
  ordered_json doc;
  doc["meta"] = meta_block(config, "simulate", n_max_used);
  doc["columns"] = {"tau", "S_ion", "xi_R", "xi_q", "Jz_mean"};
  ordered_json rows = ordered_json::array();
  for (const Snapshot& s : traj.snapshots) {
    rows.push_back({json_number(s.tau), json_number(s.S_ion),
                    json_number(s.xi_R), json_number(s.xi_q),
                    json_number(s.Jz_mean)});
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    out += format_double(r.param);
    out += ',';
    out += format_double(r.S_avg);
    out += ',';
    out += format_double(r.S_amp);
    out += ',';
    out += format_double(r.dxi_R);
    out += ',';
    out += format_double(r.dxi_q);
    out += ',';
    out += format_double(r.dJz);
    out += ',';
    out += format_double(r.xi_R_min);
    out += ',';
    out += format_double(r.xi_q_min);
    out += '\n';
  }
  return out;
}

std::string sweep_json(const std::vector<SweepRow>& rows,
                       const RunConfig& config, const std::string& axis,
                       const std::string& grid_spec) {
  ordered_json doc;
  ordered_json meta = meta_block(config, "sweep", -1);
  meta.erase("n_max");  // truncation varies along a xi-q sweep
  meta["axis"] = axis;
  meta["grid"] = grid_spec;
  doc["meta"] = std::move(meta);
  doc["columns"] = {"param", "S_avg",   "S_amp",    "dxi_R",
                    "dxi_q", "dJz",     "xi_R_min", "xi_q_min"};
  ordered_json out_rows = ordered_json::array();
  for (const SweepRow& r : rows) {
    out_rows.push_back({json_number(r.param), json_number(r.S_avg),
                        json_number(r.S_amp), json_number(r.dxi_R),
                        json_number(r.dxi_q), json_number(r.dJz),
                        json_number(r.xi_R_min), json_number(r.xi_q_min)});
  }
  doc["rows"] = std::move(out_rows);
  return doc.dump(2) + "\n";
}

std::vector<std::vector<double>> parse_csv(const std::string& text,
                                           std::string* header) {
  std::istringstream stream(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (std::getline(stream, line)) {
    if (trim(line).empty()) continue;
    if (first) {
      if (header) *header = line;
      first = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      row.push_back(parse_double(trim(cell), "csv cell"));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RunConfig config_from_meta(const std::string& json_text) {
  const ordered_json doc = ordered_json::parse(json_text);
  const ordered_json& meta = doc.at("meta");
  RunConfig config;
  config.n_ions = meta.at("n_ions").get<int>();
  config.eta = number_from_json(meta.at("eta"));
  config.m0 = meta.at("m0").get<int>();
  config.xi_q0 = number_from_json(meta.at("xi_q0"));
  config.tau_max = number_from_json(meta.at("tau_max"));
  config.d_tau = number_from_json(meta.at("d_tau"));
  config.trunc_eps = number_from_json(meta.at("trunc_eps"));
  config.trunc_cap = meta.at("trunc_cap").get<int>();
  config.format = parse_format(meta.at("format").get<std::string>());
  config.output_path = meta.at("output").get<std::string>();
  return config;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line is not key=value: '" + stripped +
                                  "'");
    }
    kv[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
  }
  return kv;
}

void apply_config(RunConfig& config,
                  const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "n-ions") {
      config.n_ions = parse_int(value, key);
    } else if (key == "eta") {
      config.eta = parse_double(value, key);
    } else if (key == "m0") {
      config.m0 = parse_int(value, key);
    } else if (key == "xi-q") {
      config.xi_q0 = parse_double(value, key);
    } else if (key == "tau-max") {
      config.tau_max = parse_double(value, key);
    } else if (key == "d-tau") {
      config.d_tau = parse_double(value, key);
    } else if (key == "trunc-eps") {
      config.trunc_eps = parse_double(value, key);
    } else if (key == "trunc-cap") {
      config.trunc_cap = parse_int(value, key);
    } else if (key == "output") {
      config.output_path = value;
    } else if (key == "format") {
      config.format = parse_format(value);
    } else {
      throw std::invalid_argument("unknown config key: '" + key + "'");
    }
  }
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  const std::filesystem::path temp(path + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open output file: " + temp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(temp);
      throw std::runtime_error("failed writing output file: " + temp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::filesystem::remove(temp);
    throw std::runtime_error("cannot move output into place: " + ec.message());
  }
}

}  // namespace squeezedyn
