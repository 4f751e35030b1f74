// Python bindings: thin numpy-friendly wrappers over the core simulation,
// tomography, predistortion and chevron operations.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrsim/chevron.hpp"
#include "qrsim/config.hpp"
#include "qrsim/dynamics.hpp"
#include "qrsim/io.hpp"
#include "qrsim/measure.hpp"
#include "qrsim/models.hpp"
#include "qrsim/operators.hpp"
#include "qrsim/predistort.hpp"
#include "qrsim/tomo.hpp"
#include "qrsim/trotter.hpp"

namespace py = pybind11;
using namespace qrsim;

namespace {

SpaceSpec sized_space(double g, double omega_rr, double total_time, int n_max) {
  return SpaceSpec{n_max > 0 ? n_max : auto_n_max(g, omega_rr, total_time)};
}

// Qubit excited, resonator vacuum: the initial state of every dynamics run.
QuantumState excited_vacuum(const SpaceSpec& space) {
  Vec psi = Vec::Zero(space.dim_total());
  psi(space.dim_res()) = 1.0;
  return {space, Support::joint, psi};
}

py::dict trace_dict(const Trajectory& traj, const PhotonMeterSpec* meter) {
  const int n = int(traj.states.size());
  Eigen::VectorXd times(n), qp(n), pp(n), mn(n), ent(n), mp(n);
  for (int k = 0; k < n; ++k) {
    times(k) = traj.times[k];
    const QuantumState& st = traj.states[k];
    qp(k) = qubit_parity(st);
    pp(k) = photon_parity(st);
    mn(k) = mean_photon(st);
    ent(k) = von_neumann_entropy(reduced_qubit(st));
    if (meter) mp(k) = ramsey_meter_response(st, *meter);
  }
  py::dict out;
  out["times"] = times;
  out["qubit_parity"] = qp;
  out["photon_parity"] = pp;
  out["mean_photon"] = mn;
  out["qubit_entropy_bits"] = ent;
  if (meter) out["meter_response"] = mp;
  return out;
}

StepForm form_from_args(const std::string& name, double a, double alpha, double tau, double c1,
                        double c2, double alpha_db) {
  StepForm form;
  form.kind = step_form_kind_from_name(name);
  form.a = a;
  form.alpha = alpha;
  form.tau = tau;
  form.c1 = c1;
  form.c2 = c2;
  form.alpha_db = alpha_db;
  return form;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "digital quantum Rabi simulation toolkit (C++ core)";
  m.attr("__version__") = kCodeVersion;

  m.def("jc_reference_period", &jc_reference_period, py::arg("g"), py::arg("delta_qr"),
        "vacuum-Rabi swap period 1/sqrt(4 g^2 + delta^2) in us");

  m.def(
      "degenerate_oracle",
      [](double g, double omega_rr, double t) {
        RabiParams p;
        p.g_r = g;
        p.omega_rr = omega_rr;
        const DegenerateOracleResult r = degenerate_oracle(p, t);
        py::dict out;
        out["alpha_plus"] = r.alpha_plus;
        out["alpha_minus"] = r.alpha_minus;
        out["qubit_parity"] = r.qubit_parity;
        out["photon_parity"] = r.photon_parity;
        out["mean_n"] = r.mean_n;
        return out;
      },
      py::arg("g"), py::arg("omega_rr"), py::arg("t"),
      "closed-form degenerate-regime observables at time t (us)");

  m.def(
      "build_rabi",
      [](double g, double omega_rr, double omega_qr, double kerr, int n_max) {
        RabiParams p;
        p.g_r = g;
        p.omega_rr = omega_rr;
        p.omega_qr = omega_qr;
        p.kerr = kerr;
        return build_rabi(p, SpaceSpec{n_max}).entries;
      },
      py::arg("g"), py::arg("omega_rr"), py::arg("omega_qr") = 0.0, py::arg("kerr") = 0.0,
      py::arg("n_max") = 8, "Rabi Hamiltonian on the joint space, angular units (rad/us)");

  m.def(
      "trotter_step",
      [](double g, double omega_rr, double omega_qr, double tau, int order, int step_index,
         int n_max) {
        const TrotterPlan plan = plan_for_targets(g, omega_rr, omega_qr, tau, step_index, order);
        return trotter_step(plan, step_index, SpaceSpec{n_max}).entries;
      },
      py::arg("g"), py::arg("omega_rr"), py::arg("omega_qr"), py::arg("tau"), py::arg("order"),
      py::arg("step_index") = 1, py::arg("n_max") = 8,
      "unitary of one phase-controlled Trotter step");

  m.def(
      "parity_trace",
      [](double g, double omega_rr, double omega_qr, double tau, int n_steps, int order,
         int n_max, double t1_res) {
        const SpaceSpec space = sized_space(g, omega_rr, tau * n_steps, n_max);
        const TrotterPlan plan = plan_for_targets(g, omega_rr, omega_qr, tau, n_steps, order);
        const QuantumState psi0 = excited_vacuum(space);
        const Trajectory traj = std::isfinite(t1_res)
                                    ? evolve_lindblad_trotter(plan, psi0, t1_res, space)
                                    : evolve_trotter(plan, psi0, space);
        return trace_dict(traj, nullptr);
      },
      py::arg("g"), py::arg("omega_rr"), py::arg("omega_qr") = 0.0, py::arg("tau") = 0.020,
      py::arg("n_steps") = 60, py::arg("order") = 2, py::arg("n_max") = 0,
      py::arg("t1_res") = std::numeric_limits<double>::infinity(),
      "per-step observables of the Trotter sequence from the excited-qubit vacuum");

  m.def(
      "exact_trace",
      [](double g, double omega_rr, double omega_qr, double kerr, std::vector<double> times,
         int n_max) {
        double t_end = 0.0;
        for (double t : times) t_end = std::max(t_end, t);
        const SpaceSpec space = sized_space(g, omega_rr, std::max(t_end, 1e-9), n_max);
        RabiParams p;
        p.g_r = g;
        p.omega_rr = omega_rr;
        p.omega_qr = omega_qr;
        p.kerr = kerr;
        const Trajectory traj =
            evolve_unitary(build_rabi(p, space), excited_vacuum(space), times);
        return trace_dict(traj, nullptr);
      },
      py::arg("g"), py::arg("omega_rr"), py::arg("omega_qr") = 0.0, py::arg("kerr") = 0.0,
      py::arg("times") = std::vector<double>{}, py::arg("n_max") = 0,
      "observables under exact Rabi evolution from the excited-qubit vacuum");

  m.def(
      "coherent_state",
      [](cxd alpha, int n_max) { return coherent_state(alpha, SpaceSpec{n_max}).vector(); },
      py::arg("alpha"), py::arg("n_max"), "normalized truncated coherent state");

  m.def(
      "wigner_point",
      [](const Mat& rho_resonator, cxd alpha) {
        const int n_max = int(rho_resonator.rows()) - 1;
        const QuantumState st(SpaceSpec{n_max}, Support::resonator, rho_resonator);
        return wigner_point(st, alpha);
      },
      py::arg("rho_resonator"), py::arg("alpha"),
      "Wigner function of a resonator density matrix at alpha");

  m.def(
      "mle_reconstruct",
      [](const std::vector<cxd>& alphas, const std::vector<double>& values,
         const std::vector<int>& shots, int n_max_build, int n_max_trunc) {
        if (alphas.size() != values.size())
          throw std::invalid_argument("alphas and values must have equal length");
        WignerDataset ds;
        for (size_t i = 0; i < alphas.size(); ++i) {
          WignerPoint pt;
          pt.alpha = alphas[i];
          pt.value = values[i];
          pt.shots = i < shots.size() ? shots[i] : 0;
          ds.points.push_back(pt);
        }
        ds.space_build = SpaceSpec{n_max_build};
        ds.space_trunc = SpaceSpec{n_max_trunc};
        ds.validate();
        const MeasurementOps ops = build_measurement_ops(ds);
        const MleResult res = mle_reconstruct(ds, ops);
        py::dict info;
        info["log_likelihood"] = res.log_likelihood;
        info["iterations"] = res.iterations;
        info["converged"] = res.converged;
        info["rank_deficient_data"] = res.rank_deficient_data;
        return py::make_tuple(res.rho, info);
      },
      py::arg("alphas"), py::arg("values"), py::arg("shots") = std::vector<int>{},
      py::arg("n_max_build") = 40, py::arg("n_max_trunc") = 8,
      "maximum-likelihood density matrix from Wigner samples");

  m.def(
      "invert_kernel",
      [](const std::vector<double>& step_samples, double dt, int n) {
        const KernelTrace step{dt, step_samples, KernelTrace::Kind::step_response};
        return invert_kernel(step, n > 0 ? n : int(step_samples.size())).samples;
      },
      py::arg("step_samples"), py::arg("dt"), py::arg("n") = 0,
      "predistortion kernel step response for a measured step response");

  m.def(
      "parametric_step",
      [](const std::string& form, double dt, int n, double a, double alpha, double tau, double c1,
         double c2, double alpha_db) {
        const StepForm f = form_from_args(form, a, alpha, tau, c1, c2, alpha_db);
        return step_from_impulse(parametric_kernel(f, dt, n)).samples;
      },
      py::arg("form"), py::arg("dt"), py::arg("n"), py::arg("a") = 0.0, py::arg("alpha") = 0.0,
      py::arg("tau") = 1.0, py::arg("c1") = 0.0, py::arg("c2") = 0.0, py::arg("alpha_db") = 0.0,
      "sampled analytic step response of the named form");

  m.def(
      "fit_step_form",
      [](const std::vector<double>& step_samples, double dt, const std::string& form) {
        const KernelTrace trace{dt, step_samples, KernelTrace::Kind::step_response};
        const StepFormFit fit = fit_step_form(trace, step_form_kind_from_name(form));
        py::dict out;
        out["form"] = fit.form.name();
        out["a"] = fit.form.a;
        out["alpha"] = fit.form.alpha;
        out["tau"] = fit.form.tau;
        out["c1"] = fit.form.c1;
        out["c2"] = fit.form.c2;
        out["alpha_db"] = fit.form.alpha_db;
        out["residual_rms"] = fit.residual_rms;
        out["converged"] = fit.converged;
        return out;
      },
      py::arg("step_samples"), py::arg("dt"), py::arg("form"),
      "least-squares fit of a step response to the named form");

  m.def(
      "run_chevron",
      [](const std::string& mode, double g, const std::vector<double>& detunings,
         const std::vector<double>& durations, double pulse_len, double off_phase, int n_max,
         const std::string& observable) {
        if (mode != "analog" && mode != "digital")
          throw std::invalid_argument("unknown chevron mode '" + mode + "'");
        ChevronSpec spec;
        spec.mode = mode == "analog" ? ChevronMode::analog : ChevronMode::digital;
        spec.g = g;
        spec.detunings = detunings;
        spec.durations = durations;
        spec.pulse_len = pulse_len;
        spec.off_phase = off_phase;
        spec.space = SpaceSpec{n_max};
        ChevronObservable obs = ChevronObservable::qubit_excitation;
        if (observable == "mean_photon") obs = ChevronObservable::mean_photon;
        else if (observable == "photon_parity") obs = ChevronObservable::photon_parity;
        else if (observable != "qubit_excitation")
          throw std::invalid_argument("unknown observable '" + observable + "'");
        return run_chevron(spec, obs);
      },
      py::arg("mode"), py::arg("g"), py::arg("detunings"), py::arg("durations"),
      py::arg("pulse_len") = 0.020, py::arg("off_phase") = 0.0, py::arg("n_max") = 4,
      py::arg("observable") = "qubit_excitation",
      "exchange chevron grid, rows = detunings, cols = durations");

  m.def(
      "find_compensation_phase",
      [](double g, double off_phase, double pulse_len, int n_pulses, int n_max,
         int phase_samples) {
        ChevronSpec spec;
        spec.mode = ChevronMode::digital;
        spec.g = g;
        spec.detunings = {0.0};
        spec.durations.resize(size_t(n_pulses) + 1);
        for (int i = 0; i <= n_pulses; ++i) spec.durations[i] = i * pulse_len;
        spec.pulse_len = pulse_len;
        spec.off_phase = off_phase;
        spec.space = SpaceSpec{n_max};
        return find_compensation_phase(spec, phase_samples);
      },
      py::arg("g"), py::arg("off_phase"), py::arg("pulse_len") = 0.020, py::arg("n_pulses") = 100,
      py::arg("n_max") = 4, py::arg("phase_samples") = 721,
      "off-window phase that restores the on-resonance swap");
}
