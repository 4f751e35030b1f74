// Wigner tomography: dataset synthesis, displaced-parity measurement
// operators, maximum-likelihood reconstruction and double-Gaussian fits.
#pragma once

#include <optional>
#include <vector>

#include "qrsim/space.hpp"

namespace qrsim {

struct WignerPoint {
  cxd alpha;
  double value = 0.0;
  int shots = 0;  // 0 = noiseless expectation value
};

// Measured (or synthesized) Wigner samples plus the two spaces involved:
// operators are built at space_build and cropped to space_trunc for the
// reconstruction.
struct WignerDataset {
  std::vector<WignerPoint> points;
  SpaceSpec space_build{40};
  SpaceSpec space_trunc{8};

  void validate() const;
};

// Truncated displaced-parity operators M_alpha = D(alpha) Pi D^dag(alpha),
// built at space_build then cropped to space_trunc. Hermitian with
// eigenvalues in [-1, 1].
struct MeasurementOps {
  std::vector<Mat> ops;          // one per dataset point, dim space_trunc
  bool informationally_complete = true;
};
MeasurementOps build_measurement_ops(const WignerDataset& dataset);

struct MleResult {
  Mat rho;
  double log_likelihood = 0.0;   // negated weighted squared residual
  int iterations = 0;
  bool converged = false;
  bool rank_deficient_data = false;
};

// Gaussian-likelihood maximum-likelihood fit of rho to the Wigner values:
// maximize -sum_i w_i (v_i - (2/pi) tr[M_i rho])^2 over rho >= 0, tr rho = 1,
// by a diluted R rho R fixed-point iteration (monotone in the likelihood).
// Weights are uniform, or binomial-variance based when shots are given.
MleResult mle_reconstruct(const WignerDataset& dataset, const MeasurementOps& ops);

// One isotropic Gaussian peak of a Wigner-plane fit.
struct GaussianPeak {
  cxd center;
  double width = 0.0;
  double weight = 0.0;  // peak amplitude
};

struct DoubleGaussianFit {
  GaussianPeak peaks[2];  // sorted by weight, heaviest first
  double residual_rms = 0.0;
  bool single_peak_fallback = false;
};

// Nonlinear least squares of two isotropic Gaussians to Wigner samples on
// arbitrary points (typically a rectangular grid). Initialized from the two
// largest local maxima; falls back to a single peak when the peaks collapse
// to within one width or the lighter peak carries negligible weight.
DoubleGaussianFit double_gaussian_fit(const std::vector<WignerPoint>& grid);

// Conjugation by exp(i theta a^dag a): rotates phase space by theta while
// leaving photon populations invariant.
Mat systematic_phase_correction(const Mat& rho, double theta);

}  // namespace qrsim
