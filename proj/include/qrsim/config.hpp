// Experiment configuration: flat section.key text format with strict unknown
// key rejection, per-experiment defaults, and canonical serialization for
// hashing.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrsim/io.hpp"
#include "qrsim/measure.hpp"

namespace qrsim {

// Configuration problems map to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed "[section]" / "key = value" text; keys stored as "section.key".
ConfigKv parse_config_text(const std::string& text, const std::string& origin = "<config>");
ConfigKv load_config_file(const std::string& path);
// Applies "section.key=value" on top of an existing map.
void apply_override(ConfigKv& kv, const std::string& assignment);

enum class ExperimentKind {
  parity_chevron,
  photon_chevron,
  wigner_movie,
  cat_conditional,
  nondegenerate,
  trotter_compare,
  stepsize_compare,
  entropy_chevron,
  jc_chevron,
  predistort_demo,
  init_compare,
};

ExperimentKind experiment_kind_from_name(const std::string& name);
std::string experiment_name(ExperimentKind kind);
std::vector<std::string> all_experiment_names();

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::parity_chevron;

  // [physics]
  double g = 1.79;       // coupling g_R (cyclic MHz)
  double t1_res = std::numeric_limits<double>::infinity();  // resonator T1 (us)
  int n_max = 0;         // Fock truncation; 0 = size automatically per sweep point
  double omega_qr = 0.0;  // simulated qubit frequency (cyclic MHz)
  double kerr = 0.0;      // self-Kerr (cyclic MHz)

  // [plan]
  double tau = 0.020;  // Trotter step (us)
  int n_steps = 60;
  int order = 2;

  // [sweep] r_values and omega_rr_values are mutually exclusive.
  std::vector<double> r_values;
  std::vector<double> omega_rr_values;
  std::vector<double> omega_qr_values;  // nondegenerate experiment only
  std::vector<double> tau_values;       // stepsize_compare only (us)

  // [meter]
  PhotonMeterSpec meter;

  // [chevron]
  std::vector<double> detunings;  // cyclic MHz; empty = default grid
  double pulse_len = 0.020;       // us
  double off_phase = 0.0;         // rad
  std::string chevron_mode = "both";  // analog | digital | both
  int chevron_n_max = 4;

  // [tomo] Wigner grids and reconstruction spaces.
  double grid_extent = 3.0;
  int grid_points = 21;
  int frame_stride = 5;
  int n_max_build = 40;
  int n_max_trunc = 8;

  // [predistort]
  double pd_dt = 4.0;  // ns
  int pd_n = 6400;

  // [sampling] 0 = exact expectation values (no randomness anywhere).
  int shots = 0;

  void validate() const;
  // Every field, serialized deterministically; basis of the config hash.
  ConfigKv canonical_kv() const;
};

// Defaults appropriate for each experiment before user keys are applied.
ExperimentConfig default_config(ExperimentKind kind);

// Builds a config from parsed keys: picks the experiment, applies defaults,
// then the remaining keys; unknown keys raise ConfigError with the key path.
ExperimentConfig config_from_kv(const ConfigKv& kv);

// Fock truncation for one degenerate sweep point: the coherent-state guard
// for small orbits, a Poisson-tail bound for large ones. omega_rr = 0 means
// the unbounded-orbit regime, where only total time limits the amplitude.
int auto_n_max(double g, double omega_rr, double total_time);

}  // namespace qrsim
