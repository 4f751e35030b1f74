// Command-line front end: runs experiments from config files and exposes the
// tomography and predistortion pipelines on files.
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrsim/config.hpp"
#include "qrsim/experiments.hpp"
#include "qrsim/io.hpp"
#include "qrsim/tomo.hpp"

namespace {

using namespace qrsim;

const std::map<std::string, std::string> kExperimentBlurbs = {
    {"parity_chevron", "qubit and photon parity collapse-revival grid over the coupling sweep"},
    {"photon_chevron", "mean photon build-up plus the dispersive-meter readout of it"},
    {"wigner_movie", "Wigner-function frames of the resonator along the orbit"},
    {"cat_conditional", "conditional resonator states at the half-period point"},
    {"nondegenerate", "parity and photon traces with a detuned simulated qubit"},
    {"trotter_compare", "paired order-1 / order-2 grids of the same sweep"},
    {"stepsize_compare", "global error versus Trotter step size, both orders"},
    {"entropy_chevron", "qubit entanglement entropy across the sweep"},
    {"jc_chevron", "analog and digital exchange chevrons with phase compensation"},
    {"predistort_demo", "kernel inversion walkthrough on a synthetic distortion"},
    {"init_compare", "ground-start versus excited-start symmetry check"},
};

ExperimentConfig assemble_config(const std::string& config_path,
                                 const std::vector<std::string>& overrides) {
  ConfigKv kv = load_config_file(config_path);
  for (const auto& ov : overrides) apply_override(kv, ov);
  return config_from_kv(kv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrsim: digital quantum Rabi simulation and analysis toolkit"};
  app.set_version_flag("--version", kCodeVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", in_path;
  std::vector<std::string> overrides;
  int workers = 1;
  unsigned long long seed = 0;
  int build_n_max = 40, trunc_n_max = 8, kernel_n = 0;
  std::string form_name = "exp_approach";

  CLI::App* run = app.add_subcommand("run", "run a configured experiment");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--workers", workers, "worker threads for sweep points");
  run->add_option("--seed", seed, "base seed for shot-sampling layers");
  run->add_option("--override", overrides, "section.key=value, repeatable");

  CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("--config", config_path, "experiment config file")->required();
  validate->add_option("--override", overrides, "section.key=value, repeatable");

  app.add_subcommand("list-experiments", "list available experiment names");

  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "Wigner samples -> density matrix (MLE)");
  reconstruct->add_option("--in", in_path, "Wigner CSV (re_alpha,im_alpha,value[,shots])")
      ->required();
  reconstruct->add_option("--out", out_dir, "output directory");
  reconstruct->add_option("--build-n-max", build_n_max, "Fock levels for operator construction");
  reconstruct->add_option("--trunc-n-max", trunc_n_max, "Fock levels of the reconstruction");

  CLI::App* predistort = app.add_subcommand("predistort", "step-response trace -> kernel");
  predistort->add_option("--in", in_path, "step-response CSV (t_ns,value)")->required();
  predistort->add_option("--out", out_dir, "output directory");
  predistort->add_option("--form", form_name, "fit form for the kernel step");
  predistort->add_option("--n", kernel_n, "kernel length (default: trace length)");

  try {
    app.parse(argc, argv);

    if (run->parsed()) {
      const ExperimentConfig cfg = assemble_config(config_path, overrides);
      const RunOptions opts{out_dir, workers, seed};
      for (const auto& f : run_experiment(cfg, opts)) std::cout << f << '\n';
    } else if (validate->parsed()) {
      const ExperimentConfig cfg = assemble_config(config_path, overrides);
      std::cout << "config OK: experiment=" << experiment_name(cfg.experiment)
                << " hash=" << config_hash(cfg.canonical_kv()) << '\n';
    } else if (app.get_subcommand("list-experiments")->parsed()) {
      for (const auto& name : all_experiment_names())
        std::cout << name << "  -  " << kExperimentBlurbs.at(name) << '\n';
    } else if (reconstruct->parsed()) {
      WignerDataset dataset;
      dataset.points = read_wigner_csv(in_path);
      dataset.space_build = SpaceSpec{build_n_max};
      dataset.space_trunc = SpaceSpec{trunc_n_max};
      const MeasurementOps ops = build_measurement_ops(dataset);
      if (!ops.informationally_complete)
        std::cerr << "warning: sample set is not informationally complete; "
                     "the reconstruction is rank deficient\n";
      const MleResult res = mle_reconstruct(dataset, ops);
      std::filesystem::create_directories(out_dir);
      const std::string out = (std::filesystem::path(out_dir) / "rho.json").string();
      nlohmann::ordered_json meta;
      meta["log_likelihood"] = res.log_likelihood;
      meta["iterations"] = res.iterations;
      meta["converged"] = res.converged;
      meta["rank_deficient_data"] = res.rank_deficient_data;
      meta["n_max_build"] = build_n_max;
      meta["n_max_trunc"] = trunc_n_max;
      meta["code_version"] = kCodeVersion;
      write_density_json(out, res.rho, meta);
      std::cout << out << '\n'
                << "iterations=" << res.iterations << " converged=" << res.converged
                << " log_likelihood=" << res.log_likelihood << '\n';
    } else if (predistort->parsed()) {
      const KernelTrace trace = read_trace_csv(in_path);
      const int n = kernel_n > 0 ? kernel_n : int(trace.samples.size());
      const KernelTrace kernel_step = invert_kernel(trace, n);
      const StepFormFit fit = fit_step_form(kernel_step, step_form_kind_from_name(form_name));
      std::filesystem::create_directories(out_dir);
      const std::string step_out =
          (std::filesystem::path(out_dir) / "kernel_step.csv").string();
      const std::string fit_out = (std::filesystem::path(out_dir) / "kernel_fit.json").string();
      write_trace_csv(step_out, kernel_step);
      nlohmann::ordered_json meta;
      meta["residual_rms"] = fit.residual_rms;
      meta["converged"] = fit.converged;
      meta["source"] = std::filesystem::path(in_path).filename().string();
      meta["code_version"] = kCodeVersion;
      write_kernel_json(fit_out, fit.form, trace.dt, n, meta);
      std::cout << step_out << '\n' << fit_out << '\n';
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are configuration errors
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
