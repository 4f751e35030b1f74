// Flux-pulse predistortion math: convolution kernels built from sampled step
// responses, triangular-system inversion, parametric correction forms, and
// least-squares fitting of step shapes.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qrsim {

struct KernelTrace {
  enum class Kind { step_response, impulse_response };

  double dt = 1.0;  // sampling period in ns
  std::vector<double> samples;
  Kind kind = Kind::step_response;

  void validate() const;
};

// h[n] = x[n] - x[n-1], with x[-1] = 0 (causal input).
KernelTrace impulse_from_step(const KernelTrace& step);

// Cumulative sum; exact inverse of impulse_from_step.
KernelTrace step_from_impulse(const KernelTrace& impulse);

// n-by-n lower-triangular Toeplitz convolution matrix with h[j] on the j-th
// lower diagonal. Requires n <= len(samples).
Eigen::MatrixXd transfer_matrix(const KernelTrace& impulse, int n);

// Predistortion kernel for a distorting system with the given step response:
// the inverse impulse response via forward substitution, returned as a step
// response of length n. Requires h[0] != 0.
KernelTrace invert_kernel(const KernelTrace& step, int n);

// Analytic step-response families used for distortion models and fits.
struct StepForm {
  enum class Kind { linear_ramp, exp_approach, quadratic, skin_effect };

  Kind kind = Kind::exp_approach;
  double a = 0.0;               // linear_ramp:  s(t) = 1 + a t
  double alpha = 0.0;           // exp_approach: s(t) = 1 + alpha exp(-t / tau)
  double tau = 1.0;
  double c1 = 0.0, c2 = 0.0;    // quadratic:    s(t) = 1 + c1 t + c2 t^2
  double alpha_db = 0.0;        // skin_effect:  s(t) = 1 - erf(alpha_db / (21 sqrt(t + 1)))

  double eval(double t_ns) const;
  // Longest time constant of the form (for settle-index computation); forms
  // without an intrinsic scale report 0.
  double time_constant() const;
  std::string name() const;
};

StepForm::Kind step_form_kind_from_name(const std::string& name);

// Sampled step response of the given form at period dt over n samples,
// converted to an impulse kernel.
KernelTrace parametric_kernel(const StepForm& form, double dt, int n);

struct StepFormFit {
  StepForm form;
  double residual_rms = 0.0;
  bool converged = true;
};

// Least-squares fit of a step-response trace to the named form. Linear
// parameters are solved exactly; the single nonlinear parameter (tau or
// alpha_db) is profiled by golden-section search.
StepFormFit fit_step_form(const KernelTrace& trace, StepForm::Kind kind);

// Convolution of impulse kernels, truncated to the shortest input length.
KernelTrace compose_kernels(const std::vector<KernelTrace>& kernels);

// Causal convolution of an impulse kernel with a waveform (output length
// equals the waveform length).
std::vector<double> apply_kernel(const KernelTrace& impulse,
                                 const std::vector<double>& waveform);

// First sample index after `multiplier` times the given time constant.
int settle_index(double time_constant_ns, double dt, double multiplier = 5.0);

}  // namespace qrsim
