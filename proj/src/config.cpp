#include "qrsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qrsim {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_num(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  try {
    size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + t + "'");
  }
}

int parse_int(const std::string& s, const std::string& key) {
  const double v = parse_num(s, key);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError("config key '" + key + "': expected an integer, got '" + trim(s) + "'");
  return int(v);
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_num(item, key));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::string join_list(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

const std::vector<std::pair<ExperimentKind, const char*>> kExperimentNames = {
    {ExperimentKind::parity_chevron, "parity_chevron"},
    {ExperimentKind::photon_chevron, "photon_chevron"},
    {ExperimentKind::wigner_movie, "wigner_movie"},
    {ExperimentKind::cat_conditional, "cat_conditional"},
    {ExperimentKind::nondegenerate, "nondegenerate"},
    {ExperimentKind::trotter_compare, "trotter_compare"},
    {ExperimentKind::stepsize_compare, "stepsize_compare"},
    {ExperimentKind::entropy_chevron, "entropy_chevron"},
    {ExperimentKind::jc_chevron, "jc_chevron"},
    {ExperimentKind::predistort_demo, "predistort_demo"},
    {ExperimentKind::init_compare, "init_compare"},
};

}  // namespace

ConfigKv parse_config_text(const std::string& text, const std::string& origin) {
  ConfigKv kv;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw ConfigError(where + ": malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value', got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (kv.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    kv[key] = trim(t.substr(eq + 1));
  }
  return kv;
}

ConfigKv load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(ConfigKv& kv, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must be 'section.key=value', got '" + assignment + "'");
  kv[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
  for (const auto& [kind, n] : kExperimentNames)
    if (name == n) return kind;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string experiment_name(ExperimentKind kind) {
  for (const auto& [k, n] : kExperimentNames)
    if (k == kind) return n;
  throw std::logic_error("experiment_name: unmapped kind");
}

std::vector<std::string> all_experiment_names() {
  std::vector<std::string> out;
  for (const auto& [k, n] : kExperimentNames) out.push_back(n);
  return out;
}

void ExperimentConfig::validate() const {
  if (g <= 0.0) throw ConfigError("physics.g must be positive");
  if (t1_res <= 0.0) throw ConfigError("physics.t1_res must be positive");
  if (n_max < 0) throw ConfigError("physics.n_max must be >= 0");
  if (tau <= 0.0) throw ConfigError("plan.tau must be positive");
  if (n_steps < 1) throw ConfigError("plan.n_steps must be >= 1");
  if (order != 1 && order != 2) throw ConfigError("plan.order must be 1 or 2");
  if (!r_values.empty() && !omega_rr_values.empty())
    throw ConfigError("sweep.r_values and sweep.omega_rr_values are mutually exclusive");
  for (double r : r_values)
    if (!(r > 0.0)) throw ConfigError("sweep.r_values entries must be positive (inf allowed)");
  for (double t : tau_values)
    if (!(t > 0.0)) throw ConfigError("sweep.tau_values entries must be positive");
  if (pulse_len <= 0.0) throw ConfigError("chevron.pulse_len must be positive");
  if (chevron_mode != "analog" && chevron_mode != "digital" && chevron_mode != "both")
    throw ConfigError("chevron.mode must be analog, digital, or both");
  if (chevron_n_max < 1) throw ConfigError("chevron.n_max must be >= 1");
  if (grid_extent <= 0.0) throw ConfigError("tomo.grid_extent must be positive");
  if (grid_points < 2) throw ConfigError("tomo.grid_points must be >= 2");
  if (frame_stride < 1) throw ConfigError("tomo.frame_stride must be >= 1");
  if (n_max_trunc < 1 || n_max_build < n_max_trunc)
    throw ConfigError("tomo.n_max_build must be >= tomo.n_max_trunc >= 1");
  if (pd_dt <= 0.0) throw ConfigError("predistort.dt must be positive");
  if (pd_n < 2) throw ConfigError("predistort.n must be >= 2");
  if (shots < 0) throw ConfigError("sampling.shots must be >= 0");
  try {
    meter.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("meter: ") + e.what());
  }

  if (n_max > 0) {
    // Explicit truncation must satisfy the guard at every sweep point.
    const double total = tau * n_steps;
    auto check_point = [&](double omega, const std::string& what) {
      const int need = auto_n_max(g, omega, total);
      if (n_max < need)
        throw ConfigError("physics.n_max = " + std::to_string(n_max) +
                          " violates the truncation guard (need >= " + std::to_string(need) +
                          " for " + what + ")");
    };
    for (double r : r_values)
      check_point(std::isinf(r) ? 0.0 : g / r, "r = " + format_double(r));
    for (double w : omega_rr_values) check_point(w, "omega_rR = " + format_double(w));
    if (r_values.empty() && omega_rr_values.empty()) check_point(0.0, "the default orbit");
  }
}

ConfigKv ExperimentConfig::canonical_kv() const {
  ConfigKv kv;
  kv["experiment.name"] = experiment_name(experiment);
  kv["physics.g"] = format_double(g);
  kv["physics.t1_res"] = format_double(t1_res);
  kv["physics.n_max"] = std::to_string(n_max);
  kv["physics.omega_qr"] = format_double(omega_qr);
  kv["physics.kerr"] = format_double(kerr);
  kv["plan.tau"] = format_double(tau);
  kv["plan.n_steps"] = std::to_string(n_steps);
  kv["plan.order"] = std::to_string(order);
  if (!r_values.empty()) kv["sweep.r_values"] = join_list(r_values);
  if (!omega_rr_values.empty()) kv["sweep.omega_rr_values"] = join_list(omega_rr_values);
  if (!omega_qr_values.empty()) kv["sweep.omega_qr_values"] = join_list(omega_qr_values);
  if (!tau_values.empty()) kv["sweep.tau_values"] = join_list(tau_values);
  kv["meter.tau_eff"] = format_double(meter.tau_eff);
  kv["meter.chi2"] = format_double(meter.chi2);
  kv["meter.d"] = format_double(meter.d);
  kv["meter.mode"] = meter.mode == PhotonMeterSpec::Mode::ramsey ? "ramsey" : "parity";
  if (!detunings.empty()) kv["chevron.detunings"] = join_list(detunings);
  kv["chevron.pulse_len"] = format_double(pulse_len);
  kv["chevron.off_phase"] = format_double(off_phase);
  kv["chevron.mode"] = chevron_mode;
  kv["chevron.n_max"] = std::to_string(chevron_n_max);
  kv["tomo.grid_extent"] = format_double(grid_extent);
  kv["tomo.grid_points"] = std::to_string(grid_points);
  kv["tomo.frame_stride"] = std::to_string(frame_stride);
  kv["tomo.n_max_build"] = std::to_string(n_max_build);
  kv["tomo.n_max_trunc"] = std::to_string(n_max_trunc);
  kv["predistort.dt"] = format_double(pd_dt);
  kv["predistort.n"] = std::to_string(pd_n);
  kv["sampling.shots"] = std::to_string(shots);
  return kv;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::parity_chevron:
      cfg.g = 1.95;
      cfg.r_values = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.35,
                      1.5, 1.7, 2.0, 2.3, 2.7, 3.2, 4.0, 5.0, 7.0, 10.0,
                      std::numeric_limits<double>::infinity()};
      break;
    case ExperimentKind::photon_chevron:
      cfg.g = 1.95;
      cfg.n_steps = 90;
      cfg.r_values = {0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.35, 2.7};
      cfg.meter = PhotonMeterSpec{0.0065, -1.26, 10.0, PhotonMeterSpec::Mode::ramsey};
      break;
    case ExperimentKind::wigner_movie:
      cfg.r_values = {1.0};
      break;
    case ExperimentKind::cat_conditional:
      cfg.r_values = {1.0};
      break;
    case ExperimentKind::nondegenerate:
      cfg.r_values = {1.0};
      cfg.omega_qr_values = {0.0, 1.0, 2.0};
      break;
    case ExperimentKind::trotter_compare:
      cfg.g = 1.95;
      cfg.r_values = {0.3, 0.5, 0.7, 1.0, 1.4, 2.0, 2.7,
                      std::numeric_limits<double>::infinity()};
      break;
    case ExperimentKind::stepsize_compare:
      cfg.g = 0.5;
      cfg.r_values = {1.0};
      cfg.tau_values = {0.020, 0.030, 0.040, 0.050};
      break;
    case ExperimentKind::entropy_chevron:
      cfg.r_values = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.35,
                      1.5, 1.7, 2.0, 2.3, 2.7, 3.2, 4.0, 5.0, 7.0, 10.0,
                      std::numeric_limits<double>::infinity()};
      break;
    case ExperimentKind::jc_chevron:
      cfg.g = 1.95;
      cfg.off_phase = 2.2;
      break;
    case ExperimentKind::predistort_demo:
    case ExperimentKind::init_compare:
      cfg.r_values = {1.0};
      break;
  }
  return cfg;
}

ExperimentConfig config_from_kv(const ConfigKv& kv) {
  const auto name_it = kv.find("experiment.name");
  if (name_it == kv.end()) throw ConfigError("missing required key 'experiment.name'");
  ExperimentConfig cfg = default_config(experiment_kind_from_name(name_it->second));

  // A user-supplied sweep axis replaces the default one entirely.
  if (kv.count("sweep.r_values") || kv.count("sweep.omega_rr_values")) {
    cfg.r_values.clear();
    cfg.omega_rr_values.clear();
  }

  for (const auto& [key, value] : kv) {
    if (key == "experiment.name") continue;
    else if (key == "physics.g") cfg.g = parse_num(value, key);
    else if (key == "physics.t1_res") cfg.t1_res = parse_num(value, key);
    else if (key == "physics.n_max") cfg.n_max = parse_int(value, key);
    else if (key == "physics.omega_qr") cfg.omega_qr = parse_num(value, key);
    else if (key == "physics.kerr") cfg.kerr = parse_num(value, key);
    else if (key == "plan.tau") cfg.tau = parse_num(value, key);
    else if (key == "plan.n_steps") cfg.n_steps = parse_int(value, key);
    else if (key == "plan.order") cfg.order = parse_int(value, key);
    else if (key == "sweep.r_values") cfg.r_values = parse_list(value, key);
    else if (key == "sweep.omega_rr_values") cfg.omega_rr_values = parse_list(value, key);
    else if (key == "sweep.omega_qr_values") cfg.omega_qr_values = parse_list(value, key);
    else if (key == "sweep.tau_values") cfg.tau_values = parse_list(value, key);
    else if (key == "meter.tau_eff") cfg.meter.tau_eff = parse_num(value, key);
    else if (key == "meter.chi2") cfg.meter.chi2 = parse_num(value, key);
    else if (key == "meter.d") cfg.meter.d = parse_num(value, key);
    else if (key == "meter.mode") {
      if (value == "ramsey") cfg.meter.mode = PhotonMeterSpec::Mode::ramsey;
      else if (value == "parity") cfg.meter.mode = PhotonMeterSpec::Mode::parity;
      else throw ConfigError("meter.mode must be 'ramsey' or 'parity', got '" + value + "'");
    }
    else if (key == "chevron.detunings") cfg.detunings = parse_list(value, key);
    else if (key == "chevron.pulse_len") cfg.pulse_len = parse_num(value, key);
    else if (key == "chevron.off_phase") cfg.off_phase = parse_num(value, key);
    else if (key == "chevron.mode") cfg.chevron_mode = value;
    else if (key == "chevron.n_max") cfg.chevron_n_max = parse_int(value, key);
    else if (key == "tomo.grid_extent") cfg.grid_extent = parse_num(value, key);
    else if (key == "tomo.grid_points") cfg.grid_points = parse_int(value, key);
    else if (key == "tomo.frame_stride") cfg.frame_stride = parse_int(value, key);
    else if (key == "tomo.n_max_build") cfg.n_max_build = parse_int(value, key);
    else if (key == "tomo.n_max_trunc") cfg.n_max_trunc = parse_int(value, key);
    else if (key == "predistort.dt") cfg.pd_dt = parse_num(value, key);
    else if (key == "predistort.n") cfg.pd_n = parse_int(value, key);
    else if (key == "sampling.shots") cfg.shots = parse_int(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

int auto_n_max(double g, double omega_rr, double total_time) {
  if (g <= 0.0 || total_time <= 0.0)
    throw std::invalid_argument("auto_n_max: need g > 0 and total_time > 0");
  // Displacement speed limits the orbit to 2 pi g t; a finite-frequency orbit
  // additionally stays inside radius 2 g / |omega|.
  const double speed_bound = kTwoPi * g * total_time;
  const double amax =
      omega_rr == 0.0 ? speed_bound : std::min(2.0 * g / std::abs(omega_rr), speed_bound);
  const double nbar = amax * amax;
  // Conservative 4 |alpha|^2 guard for small orbits; for large ones the
  // Poisson tail bound nbar + 8 sqrt(nbar) keeps the space desk-sized while
  // holding the truncated weight below ~1e-10.
  const double guard = std::min(4.0 * nbar + 10.0, nbar + 8.0 * std::sqrt(nbar) + 12.0);
  return std::max(8, int(std::ceil(guard)));
}

}  // namespace qrsim
