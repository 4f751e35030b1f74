// Experiment runners: turn a validated ExperimentConfig into CSV grids and
// JSON sidecars on disk. Sweep points run on a worker pool; file assembly is
// single-threaded and deterministic.
#pragma once

#include <string>
#include <vector>

#include "qrsim/config.hpp"

namespace qrsim {

struct RunOptions {
  std::string out_dir = ".";
  int workers = 1;
  unsigned long long seed = 0;  // used only by shot-sampling layers
};

// Runs the experiment and returns the paths of every file written
// (data files first, the sidecar JSON last).
std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

// Runs fn(0..n-1) on up to `workers` threads; rethrows the first failure.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace qrsim
