#include "qrsim/experiments.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>

#include "qrsim/chevron.hpp"
#include "qrsim/dynamics.hpp"
#include "qrsim/measure.hpp"
#include "qrsim/models.hpp"
#include "qrsim/operators.hpp"
#include "qrsim/predistort.hpp"
#include "qrsim/trotter.hpp"

namespace qrsim {

namespace {

namespace fs = std::filesystem;

struct SweepAxis {
  std::string label;           // "r" or "omega_rr_mhz"
  std::vector<double> values;  // as configured
  std::vector<double> omegas;  // omega_rR per point (cyclic MHz)
};

SweepAxis sweep_axis(const ExperimentConfig& cfg) {
  SweepAxis axis;
  if (!cfg.omega_rr_values.empty()) {
    axis.label = "omega_rr_mhz";
    axis.values = cfg.omega_rr_values;
    axis.omegas = cfg.omega_rr_values;
  } else {
    axis.label = "r";
    axis.values = cfg.r_values.empty() ? std::vector<double>{1.0} : cfg.r_values;
    for (double r : axis.values) axis.omegas.push_back(std::isinf(r) ? 0.0 : cfg.g / r);
  }
  return axis;
}

int point_n_max(const ExperimentConfig& cfg, double omega_rr, double total_time) {
  return cfg.n_max > 0 ? cfg.n_max : auto_n_max(cfg.g, omega_rr, total_time);
}

QuantumState ground_vacuum(const SpaceSpec& space) {
  Vec psi = Vec::Zero(space.dim_total());
  psi(0) = 1.0;
  return {space, Support::joint, psi};
}

QuantumState excited_vacuum(const SpaceSpec& space) {
  Vec psi = Vec::Zero(space.dim_total());
  psi(space.dim_res()) = 1.0;
  return {space, Support::joint, psi};
}

struct SweepTrace {
  std::vector<double> times;
  Eigen::VectorXd qubit_parity, photon_parity, mean_n, entropy_bits, meter_p;
};

// One sweep point of the phase-controlled Trotter sequence, started from the
// joint ground state, with per-step observables.
SweepTrace trotter_trace(const ExperimentConfig& cfg, double omega_rr, double omega_qr,
                         int order, double tau, int n_steps, bool want_entropy,
                         bool want_meter) {
  const SpaceSpec space{point_n_max(cfg, omega_rr, tau * n_steps)};
  const TrotterPlan plan = plan_for_targets(cfg.g, omega_rr, omega_qr, tau, n_steps, order);
  const QuantumState psi0 = ground_vacuum(space);
  const Trajectory traj = std::isfinite(cfg.t1_res)
                              ? evolve_lindblad_trotter(plan, psi0, cfg.t1_res, space)
                              : evolve_trotter(plan, psi0, space);

  SweepTrace out;
  out.times = traj.times;
  const int n = int(traj.states.size());
  out.qubit_parity.resize(n);
  out.photon_parity.resize(n);
  out.mean_n.resize(n);
  if (want_entropy) out.entropy_bits.resize(n);
  if (want_meter) out.meter_p.resize(n);
  for (int k = 0; k < n; ++k) {
    const QuantumState& st = traj.states[k];
    out.qubit_parity(k) = qubit_parity(st);
    out.photon_parity(k) = photon_parity(st);
    out.mean_n(k) = mean_photon(st);
    if (want_entropy) out.entropy_bits(k) = von_neumann_entropy(reduced_qubit(st));
    if (want_meter) out.meter_p(k) = ramsey_meter_response(st, cfg.meter);
  }
  return out;
}

std::vector<double> step_times(double tau, int n_steps) {
  std::vector<double> t(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) t[k] = k * tau;
  return t;
}

void check_finite(const Eigen::MatrixXd& m, const std::string& what) {
  if (!m.allFinite()) throw std::runtime_error("non-finite value produced in " + what);
}

uint64_t cell_seed(uint64_t seed, const std::string& tag, int i, int j) {
  return seed ^ fnv1a64(tag + ":" + std::to_string(i) + ":" + std::to_string(j));
}

// Replaces probability cells with shot-sampled estimates when shots > 0.
void maybe_sample(Eigen::MatrixXd& grid, int shots, uint64_t seed, const std::string& tag) {
  if (shots <= 0) return;
  for (int i = 0; i < grid.rows(); ++i)
    for (int j = 0; j < grid.cols(); ++j) {
      const double p = std::clamp(grid(i, j), 0.0, 1.0);
      grid(i, j) = sample_probability(p, shots, cell_seed(seed, tag, i, j));
    }
}

std::string out_path(const RunOptions& opts, const std::string& name) {
  return (fs::path(opts.out_dir) / name).string();
}

struct Emitter {
  Emitter(const ExperimentConfig& c, const RunOptions& o) : cfg(c), opts(o) {}

  const ExperimentConfig& cfg;
  const RunOptions& opts;
  std::vector<std::string> files;
  std::map<std::string, std::string> units;

  std::string grid(const std::string& name, const GridData& g) {
    const std::string path = out_path(opts, name);
    check_finite(g.values, name);
    write_grid_csv(path, g);
    files.push_back(path);
    return path;
  }
  std::string table(const std::string& name, const std::vector<std::string>& cols,
                    const std::vector<std::vector<double>>& data) {
    const std::string path = out_path(opts, name);
    write_table_csv(path, cols, data);
    files.push_back(path);
    return path;
  }
  std::vector<std::string> finish(nlohmann::ordered_json extra) {
    auto rel = nlohmann::ordered_json::array();
    for (const auto& f : files) rel.push_back(fs::path(f).filename().string());
    extra["files"] = std::move(rel);
    const std::string path = out_path(opts, experiment_name(cfg.experiment) + ".json");
    write_sidecar_json(path, cfg.canonical_kv(), units, extra);
    files.push_back(path);
    return files;
  }
};

GridData make_grid(const SweepAxis& axis, const std::vector<double>& times,
                   Eigen::MatrixXd values) {
  GridData g;
  g.row_label = axis.label;
  g.col_label = "time_us";
  g.row_values = axis.values;
  g.col_values = times;
  g.values = std::move(values);
  return g;
}

// Collapse-revival chevron: qubit and photon parity over the coupling-ratio
// sweep, the simulator's headline observable pair.
std::vector<std::string> run_parity_chevron(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SweepAxis axis = sweep_axis(cfg);
  const int rows = int(axis.values.size());
  const auto times = step_times(cfg.tau, cfg.n_steps);
  Eigen::MatrixXd q(rows, cfg.n_steps + 1), p(rows, cfg.n_steps + 1);
  parallel_for(rows, opts.workers, [&](int i) {
    const SweepTrace tr =
        trotter_trace(cfg, axis.omegas[i], cfg.omega_qr, cfg.order, cfg.tau, cfg.n_steps,
                      false, false);
    q.row(i) = tr.qubit_parity.transpose();
    p.row(i) = tr.photon_parity.transpose();
  });
  maybe_sample(q, cfg.shots, opts.seed, "qubit");
  maybe_sample(p, cfg.shots, opts.seed, "photon");

  Emitter em{cfg, opts};
  em.units = {{axis.label, axis.label == "r" ? "dimensionless" : "cyclic MHz"},
              {"time_us", "us"},
              {"values", "probability"}};
  em.grid("parity_chevron_qubit.csv", make_grid(axis, times, q));
  em.grid("parity_chevron_photon.csv", make_grid(axis, times, p));
  return em.finish({{"observables", {"qubit_parity", "photon_parity"}}});
}

// Photon build-up sweep read two ways: the true mean photon number and the
// dispersive-meter estimate obtained from the inverted qubit response.
std::vector<std::string> run_photon_chevron(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SweepAxis axis = sweep_axis(cfg);
  const int rows = int(axis.values.size());
  const auto times = step_times(cfg.tau, cfg.n_steps);
  Eigen::MatrixXd mean(rows, cfg.n_steps + 1), meter_p(rows, cfg.n_steps + 1);
  parallel_for(rows, opts.workers, [&](int i) {
    const SweepTrace tr =
        trotter_trace(cfg, axis.omegas[i], cfg.omega_qr, cfg.order, cfg.tau, cfg.n_steps,
                      false, true);
    mean.row(i) = tr.mean_n.transpose();
    meter_p.row(i) = tr.meter_p.transpose();
  });
  maybe_sample(meter_p, cfg.shots, opts.seed, "meter");
  Eigen::MatrixXd meter_n(rows, cfg.n_steps + 1);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j <= cfg.n_steps; ++j) meter_n(i, j) = invert_meter(meter_p(i, j), cfg.meter);

  Emitter em{cfg, opts};
  em.units = {{axis.label, axis.label == "r" ? "dimensionless" : "cyclic MHz"},
              {"time_us", "us"},
              {"values", "photons"}};
  em.grid("photon_chevron_mean.csv", make_grid(axis, times, mean));
  em.grid("photon_chevron_meter.csv", make_grid(axis, times, meter_n));
  return em.finish({{"observables", {"mean_photon", "meter_photon_estimate"}}});
}

GridData wigner_grid_of(const QuantumState& resonator, double extent, int points) {
  GridData g;
  g.row_label = "im_alpha";
  g.col_label = "re_alpha";
  g.row_values.resize(points);
  g.col_values.resize(points);
  for (int k = 0; k < points; ++k) {
    const double v = -extent + 2.0 * extent * k / (points - 1);
    g.row_values[k] = v;
    g.col_values[k] = v;
  }
  g.values.resize(points, points);
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j)
      g.values(i, j) = wigner_point(resonator, cxd(g.col_values[j], g.row_values[i]));
  return g;
}

// Frame-by-frame Wigner function of the reduced resonator state along the
// collapse-revival orbit.
std::vector<std::string> run_wigner_movie(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SweepAxis axis = sweep_axis(cfg);
  const double omega = axis.omegas.front();
  const SpaceSpec space{point_n_max(cfg, omega, cfg.tau * cfg.n_steps)};
  const TrotterPlan plan =
      plan_for_targets(cfg.g, omega, cfg.omega_qr, cfg.tau, cfg.n_steps, cfg.order);
  TrotterRunOptions topts;
  topts.sample_stride = cfg.frame_stride;
  const Trajectory traj = evolve_trotter(plan, ground_vacuum(space), space, topts);

  const int frames = int(traj.states.size());
  std::vector<GridData> grids(frames);
  parallel_for(frames, opts.workers, [&](int f) {
    const Mat rho = reduced_resonator(traj.states[f]);
    const QuantumState res(space, Support::resonator, rho);
    grids[f] = wigner_grid_of(res, cfg.grid_extent, cfg.grid_points);
  });

  Emitter em{cfg, opts};
  em.units = {{"re_alpha", "dimensionless"}, {"im_alpha", "dimensionless"},
              {"values", "quasiprobability (W)"}, {"times", "us"}};
  auto frame_names = nlohmann::ordered_json::array();
  for (int f = 0; f < frames; ++f) {
    char name[64];
    std::snprintf(name, sizeof name, "wigner_frame_%03d.csv", f);
    em.grid(name, grids[f]);
    frame_names.push_back(name);
  }
  nlohmann::ordered_json extra;
  extra["frames"] = std::move(frame_names);
  auto jt = nlohmann::ordered_json::array();
  for (double t : traj.times) jt.push_back(t);
  extra["times_us"] = std::move(jt);
  return em.finish(std::move(extra));
}

// Conditional resonator states at the half-period point, where measuring the
// qubit along x leaves the resonator in one of two displaced components.
std::vector<std::string> run_cat_conditional(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SweepAxis axis = sweep_axis(cfg);
  const double omega = axis.omegas.front();
  if (omega == 0.0)
    throw ConfigError("cat_conditional: needs a finite r (omega_rR != 0) for a half period");
  const SpaceSpec space{point_n_max(cfg, omega, cfg.tau * cfg.n_steps)};
  const TrotterPlan plan =
      plan_for_targets(cfg.g, omega, cfg.omega_qr, cfg.tau, cfg.n_steps, cfg.order);
  const Trajectory traj = evolve_trotter(plan, ground_vacuum(space), space);

  const double t_half = 0.5 / omega;
  int step = int(std::lround(t_half / cfg.tau));
  step = std::clamp(step, 1, cfg.n_steps);
  const QuantumState& st = traj.states[step];

  const ConditionalResult plus = conditional_resonator(st, QubitBasis::x, 0);
  const ConditionalResult minus = conditional_resonator(st, QubitBasis::x, 1);

  Emitter em{cfg, opts};
  em.units = {{"re_alpha", "dimensionless"}, {"im_alpha", "dimensionless"},
              {"values", "quasiprobability (W)"}};
  em.grid("cat_x_plus.csv", wigner_grid_of(plus.resonator, cfg.grid_extent, cfg.grid_points));
  em.grid("cat_x_minus.csv", wigner_grid_of(minus.resonator, cfg.grid_extent, cfg.grid_points));
  nlohmann::ordered_json extra;
  extra["time_us"] = traj.times[step];
  extra["step"] = step;
  extra["prob_x_plus"] = plus.probability;
  extra["prob_x_minus"] = minus.probability;
  extra["photon_parity_x_plus"] = photon_parity(plus.resonator);
  extra["photon_parity_x_minus"] = photon_parity(minus.resonator);
  extra["qubit_entropy_bits"] = von_neumann_entropy(reduced_qubit(st));
  return em.finish(std::move(extra));
}

// Detuned-qubit simulation: parity and photon traces as the simulated qubit
// frequency moves away from degeneracy.
std::vector<std::string> run_nondegenerate(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SweepAxis axis = sweep_axis(cfg);
  const double omega = axis.omegas.front();
  const std::vector<double> qvals =
      cfg.omega_qr_values.empty() ? std::vector<double>{cfg.omega_qr} : cfg.omega_qr_values;
  const int rows = int(qvals.size());
  const auto times = step_times(cfg.tau, cfg.n_steps);
  Eigen::MatrixXd q(rows, cfg.n_steps + 1), p(rows, cfg.n_steps + 1), m(rows, cfg.n_steps + 1);
  parallel_for(rows, opts.workers, [&](int i) {
    const SweepTrace tr =
        trotter_trace(cfg, omega, qvals[i], cfg.order, cfg.tau, cfg.n_steps, false, false);
    q.row(i) = tr.qubit_parity.transpose();
    p.row(i) = tr.photon_parity.transpose();
    m.row(i) = tr.mean_n.transpose();
  });
  maybe_sample(q, cfg.shots, opts.seed, "qubit");
  maybe_sample(p, cfg.shots, opts.seed, "photon");

  SweepAxis qaxis{"omega_qr_mhz", qvals, qvals};
  Emitter em{cfg, opts};
  em.units = {{"omega_qr_mhz", "cyclic MHz"}, {"time_us", "us"}};
  em.grid("nondegenerate_qubit.csv", make_grid(qaxis, times, q));
  em.grid("nondegenerate_photon.csv", make_grid(qaxis, times, p));
  em.grid("nondegenerate_mean.csv", make_grid(qaxis, times, m));
  return em.finish({{"omega_rr_mhz", omega}});
}

// Side-by-side first-order and symmetric-order grids of the same sweep.
std::vector<std::string> run_trotter_compare(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SweepAxis axis = sweep_axis(cfg);
  const int rows = int(axis.values.size());
  const auto times = step_times(cfg.tau, cfg.n_steps);
  Eigen::MatrixXd q1(rows, cfg.n_steps + 1), p1(rows, cfg.n_steps + 1);
  Eigen::MatrixXd q2(rows, cfg.n_steps + 1), p2(rows, cfg.n_steps + 1);
  parallel_for(rows, opts.workers, [&](int i) {
    const SweepTrace t1 =
        trotter_trace(cfg, axis.omegas[i], cfg.omega_qr, 1, cfg.tau, cfg.n_steps, false, false);
    const SweepTrace t2 =
        trotter_trace(cfg, axis.omegas[i], cfg.omega_qr, 2, cfg.tau, cfg.n_steps, false, false);
    q1.row(i) = t1.qubit_parity.transpose();
    p1.row(i) = t1.photon_parity.transpose();
    q2.row(i) = t2.qubit_parity.transpose();
    p2.row(i) = t2.photon_parity.transpose();
  });

  Emitter em{cfg, opts};
  em.units = {{axis.label, axis.label == "r" ? "dimensionless" : "cyclic MHz"},
              {"time_us", "us"},
              {"values", "probability"}};
  em.grid("trotter_compare_order1_qubit.csv", make_grid(axis, times, q1));
  em.grid("trotter_compare_order1_photon.csv", make_grid(axis, times, p1));
  em.grid("trotter_compare_order2_qubit.csv", make_grid(axis, times, q2));
  em.grid("trotter_compare_order2_photon.csv", make_grid(axis, times, p2));
  return em.finish({{"orders", {1, 2}}});
}

// Global Trotter error against exact evolution as the step size grows, for
// both splitting orders, at fixed simulated time.
std::vector<std::string> run_stepsize_compare(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SweepAxis axis = sweep_axis(cfg);
  const double omega = axis.omegas.front();
  const double total = cfg.tau * cfg.n_steps;
  const std::vector<double> taus =
      cfg.tau_values.empty() ? std::vector<double>{cfg.tau} : cfg.tau_values;

  std::vector<double> col_tau(taus.size()), col_steps(taus.size());
  std::vector<double> err1(taus.size()), err2(taus.size());
  parallel_for(int(taus.size()), opts.workers, [&](int i) {
    const double tau = taus[i];
    const int steps = std::max(1, int(std::lround(total / tau)));
    const double t_end = steps * tau;
    const SpaceSpec space{point_n_max(cfg, omega, t_end)};

    RabiParams target;
    target.g_r = cfg.g;
    target.omega_rr = omega;
    target.omega_qr = cfg.omega_qr;
    target.kerr = cfg.kerr;
    const QuantumState psi0 = excited_vacuum(space);

    for (int order : {1, 2}) {
      const TrotterPlan plan =
          plan_for_targets(cfg.g, omega, cfg.omega_qr, tau, steps, order);
      const Trajectory trot = evolve_trotter(plan, psi0, space);
      const Trajectory exact =
          evolve_unitary(build_rabi(target, space), psi0, trot.times);
      // RMS deviation of both normalized parities over the whole trace;
      // state fidelity is not used because the stroboscopic frame leaves a
      // step-size-independent phase floor (see frame_map).
      double sum2 = 0.0;
      for (size_t k = 0; k < trot.times.size(); ++k) {
        const double dp = photon_parity(trot.states[k]) - photon_parity(exact.states[k]);
        const double dq = qubit_parity(trot.states[k]) - qubit_parity(exact.states[k]);
        sum2 += dp * dp + dq * dq;
      }
      const double err = std::sqrt(sum2 / (2.0 * double(trot.times.size())));
      (order == 1 ? err1[i] : err2[i]) = err;
    }
    col_tau[i] = tau;
    col_steps[i] = steps;
  });

  // Log-log slope of error vs tau for each order, by least squares.
  auto slope = [&](const std::vector<double>& err) {
    const int n = int(taus.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      const double x = std::log(col_tau[i]), y = std::log(std::max(err[i], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };

  Emitter em{cfg, opts};
  em.units = {{"tau_us", "us"}, {"error", "rms parity deviation from exact evolution"}};
  em.table("stepsize_compare.csv", {"tau_us", "n_steps", "error_order1", "error_order2"},
           {col_tau, col_steps, err1, err2});
  nlohmann::ordered_json extra;
  if (taus.size() >= 2) {
    extra["slope_order1"] = slope(err1);
    extra["slope_order2"] = slope(err2);
  }
  return em.finish(std::move(extra));
}

// Qubit-resonator entanglement across the sweep: von Neumann entropy of the
// reduced qubit, which peaks on the collapse plateau and dips at revivals.
std::vector<std::string> run_entropy_chevron(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SweepAxis axis = sweep_axis(cfg);
  const int rows = int(axis.values.size());
  const auto times = step_times(cfg.tau, cfg.n_steps);
  Eigen::MatrixXd s(rows, cfg.n_steps + 1);
  parallel_for(rows, opts.workers, [&](int i) {
    const SweepTrace tr = trotter_trace(cfg, axis.omegas[i], cfg.omega_qr, cfg.order, cfg.tau,
                                        cfg.n_steps, true, false);
    s.row(i) = tr.entropy_bits.transpose();
  });

  Emitter em{cfg, opts};
  em.units = {{axis.label, axis.label == "r" ? "dimensionless" : "cyclic MHz"},
              {"time_us", "us"},
              {"values", "bits"}};
  em.grid("entropy_chevron.csv", make_grid(axis, times, s));
  return em.finish({{"observable", "qubit_von_neumann_entropy"}});
}

// Exchange chevrons: analog constant-detuning evolution next to the pulsed
// digital version, plus the compensated digital grid.
std::vector<std::string> run_jc_chevron(const ExperimentConfig& cfg, const RunOptions& opts) {
  ChevronSpec spec = ChevronSpec::default_grid(ChevronMode::analog, cfg.g);
  if (!cfg.detunings.empty()) spec.detunings = cfg.detunings;
  spec.pulse_len = cfg.pulse_len;
  spec.off_phase = cfg.off_phase;
  spec.space = SpaceSpec{cfg.chevron_n_max};
  spec.durations.resize(101);
  for (int i = 0; i < 101; ++i) spec.durations[i] = i * spec.pulse_len;

  Emitter em{cfg, opts};
  em.units = {{"detuning_mhz", "cyclic MHz"}, {"time_us", "us"}, {"values", "probability"}};
  nlohmann::ordered_json extra;

  auto emit = [&](const std::string& name, const ChevronSpec& s, const std::string& tag) {
    Eigen::MatrixXd grid = run_chevron(s, ChevronObservable::qubit_excitation);
    maybe_sample(grid, cfg.shots, opts.seed, tag);
    GridData g;
    g.row_label = "detuning_mhz";
    g.col_label = "time_us";
    g.row_values = s.detunings;
    g.col_values = s.durations;
    g.values = std::move(grid);
    em.grid(name, g);
  };

  if (cfg.chevron_mode != "digital") {
    spec.mode = ChevronMode::analog;
    emit("jc_chevron_analog.csv", spec, "analog");
  }
  if (cfg.chevron_mode != "analog") {
    spec.mode = ChevronMode::digital;
    emit("jc_chevron_digital.csv", spec, "digital");
    const double comp = find_compensation_phase(spec);
    extra["compensation_phase_rad"] = comp;
    ChevronSpec comp_spec = spec;
    comp_spec.off_phase = spec.off_phase + comp;
    emit("jc_chevron_digital_compensated.csv", comp_spec, "compensated");
  }
  return em.finish(std::move(extra));
}

// Kernel-inversion walkthrough on a synthetic multi-defect distortion:
// distorted step, computed correction kernel, corrected (flat) step.
std::vector<std::string> run_predistort_demo(const ExperimentConfig& cfg, const RunOptions& opts) {
  const double dt = cfg.pd_dt;
  const int n = cfg.pd_n;
  const std::vector<StepForm> defects = {
      {StepForm::Kind::exp_approach, 0, 0.0012, 5100.0},
      {StepForm::Kind::exp_approach, 0, 0.015, 670.0},
      {StepForm::Kind::exp_approach, 0, -0.00037, 520.0},
  };
  std::vector<KernelTrace> parts;
  double longest_tau = 0.0;
  for (const auto& d : defects) {
    parts.push_back(parametric_kernel(d, dt, n));
    longest_tau = std::max(longest_tau, d.tau);
  }
  const KernelTrace system = compose_kernels(parts);
  const KernelTrace distorted = step_from_impulse(system);
  const KernelTrace kernel_step = invert_kernel(distorted, n);
  const KernelTrace corrected =
      step_from_impulse(compose_kernels({impulse_from_step(kernel_step), system}));

  const int settle = settle_index(longest_tau, dt);
  double flat = 0.0;
  for (int k = settle; k < n; ++k) flat = std::max(flat, std::abs(corrected.samples[k] - 1.0));

  const StepFormFit sys_fit = fit_step_form(distorted, StepForm::Kind::exp_approach);
  const StepFormFit ker_fit = fit_step_form(kernel_step, StepForm::Kind::exp_approach);

  Emitter em{cfg, opts};
  em.units = {{"t_ns", "ns"}, {"value", "normalized step amplitude"}};
  const std::string p1 = out_path(opts, "predistort_distorted_step.csv");
  write_trace_csv(p1, distorted);
  em.files.push_back(p1);
  const std::string p2 = out_path(opts, "predistort_kernel_step.csv");
  write_trace_csv(p2, kernel_step);
  em.files.push_back(p2);
  const std::string p3 = out_path(opts, "predistort_corrected_step.csv");
  write_trace_csv(p3, corrected);
  em.files.push_back(p3);
  const std::string p4 = out_path(opts, "predistort_kernel.json");
  write_kernel_json(p4, ker_fit.form, dt, n,
                    {{"residual_rms", ker_fit.residual_rms}, {"config_hash",
                     config_hash(cfg.canonical_kv())}});
  em.files.push_back(p4);

  nlohmann::ordered_json extra;
  extra["corrected_flatness_after_settle"] = flat;
  extra["settle_index"] = settle;
  extra["dominant_fit_alpha"] = sys_fit.form.alpha;
  extra["dominant_fit_tau_ns"] = sys_fit.form.tau;
  return em.finish(std::move(extra));
}

// Photon-parity traces from the two symmetric initializations, exact and
// Trotterized, to exhibit the ground/excited start symmetry.
std::vector<std::string> run_init_compare(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SweepAxis axis = sweep_axis(cfg);
  const double omega = axis.omegas.front();
  const SpaceSpec space{point_n_max(cfg, omega, cfg.tau * cfg.n_steps)};
  RabiParams params;
  params.g_r = cfg.g;
  params.omega_rr = omega;
  params.omega_qr = cfg.omega_qr;
  params.kerr = cfg.kerr;
  const QuantumOperator h = build_rabi(params, space);
  const auto times = step_times(cfg.tau, cfg.n_steps);
  const TrotterPlan plan =
      plan_for_targets(cfg.g, omega, cfg.omega_qr, cfg.tau, cfg.n_steps, cfg.order);

  auto parity_of = [](const Trajectory& traj) {
    std::vector<double> out(traj.states.size());
    for (size_t k = 0; k < traj.states.size(); ++k) out[k] = photon_parity(traj.states[k]);
    return out;
  };
  const auto exact_g = parity_of(evolve_unitary(h, ground_vacuum(space), times));
  const auto exact_e = parity_of(evolve_unitary(h, excited_vacuum(space), times));
  const auto trot_g = parity_of(evolve_trotter(plan, ground_vacuum(space), space));
  const auto trot_e = parity_of(evolve_trotter(plan, excited_vacuum(space), space));

  double exact_gap = 0.0, trot_gap = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    exact_gap = std::max(exact_gap, std::abs(exact_g[k] - exact_e[k]));
    trot_gap = std::max(trot_gap, std::abs(trot_g[k] - trot_e[k]));
  }

  Emitter em{cfg, opts};
  em.units = {{"time_us", "us"}, {"values", "photon parity probability"}};
  em.table("init_compare.csv",
           {"time_us", "exact_from_ground", "exact_from_excited", "trotter_from_ground",
            "trotter_from_excited"},
           {times, exact_g, exact_e, trot_g, trot_e});
  nlohmann::ordered_json extra;
  extra["max_exact_asymmetry"] = exact_gap;
  extra["max_trotter_asymmetry"] = trot_gap;
  return em.finish(std::move(extra));
}

}  // namespace

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  std::filesystem::create_directories(opts.out_dir);
  switch (cfg.experiment) {
    case ExperimentKind::parity_chevron: return run_parity_chevron(cfg, opts);
    case ExperimentKind::photon_chevron: return run_photon_chevron(cfg, opts);
    case ExperimentKind::wigner_movie: return run_wigner_movie(cfg, opts);
    case ExperimentKind::cat_conditional: return run_cat_conditional(cfg, opts);
    case ExperimentKind::nondegenerate: return run_nondegenerate(cfg, opts);
    case ExperimentKind::trotter_compare: return run_trotter_compare(cfg, opts);
    case ExperimentKind::stepsize_compare: return run_stepsize_compare(cfg, opts);
    case ExperimentKind::entropy_chevron: return run_entropy_chevron(cfg, opts);
    case ExperimentKind::jc_chevron: return run_jc_chevron(cfg, opts);
    case ExperimentKind::predistort_demo: return run_predistort_demo(cfg, opts);
    case ExperimentKind::init_compare: return run_init_compare(cfg, opts);
  }
  throw std::logic_error("run_experiment: unmapped experiment");
}

}  // namespace qrsim
