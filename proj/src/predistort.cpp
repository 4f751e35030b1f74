#include "qrsim/predistort.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace qrsim {

namespace {

// Golden-section minimization of f over [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters = 120) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void KernelTrace::validate() const {
  if (dt <= 0.0) throw std::invalid_argument("KernelTrace: dt must be positive");
  if (samples.empty()) throw std::invalid_argument("KernelTrace: empty trace");
}

KernelTrace impulse_from_step(const KernelTrace& step) {
  step.validate();
  if (step.kind != KernelTrace::Kind::step_response)
    throw std::invalid_argument("impulse_from_step: input is not a step response");
  KernelTrace out{step.dt, step.samples, KernelTrace::Kind::impulse_response};
  for (size_t n = step.samples.size(); n-- > 1;) out.samples[n] -= step.samples[n - 1];
  return out;
}

KernelTrace step_from_impulse(const KernelTrace& impulse) {
  impulse.validate();
  if (impulse.kind != KernelTrace::Kind::impulse_response)
    throw std::invalid_argument("step_from_impulse: input is not an impulse response");
  KernelTrace out{impulse.dt, impulse.samples, KernelTrace::Kind::step_response};
  for (size_t n = 1; n < out.samples.size(); ++n) out.samples[n] += out.samples[n - 1];
  return out;
}

Eigen::MatrixXd transfer_matrix(const KernelTrace& impulse, int n) {
  impulse.validate();
  if (impulse.kind != KernelTrace::Kind::impulse_response)
    throw std::invalid_argument("transfer_matrix: input is not an impulse response");
  if (n < 1 || n > int(impulse.samples.size()))
    throw std::invalid_argument("transfer_matrix: n out of range");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) h(i, j) = impulse.samples[i - j];
  return h;
}

KernelTrace invert_kernel(const KernelTrace& step, int n) {
  const KernelTrace h = impulse_from_step(step);
  if (n < 1 || n > int(h.samples.size()))
    throw std::invalid_argument("invert_kernel: n out of range");
  if (h.samples[0] == 0.0)
    throw std::invalid_argument("invert_kernel: h[0] = 0, system not invertible");

  // First column of H^{-1} by forward substitution: sum_j h[j] g[k-j] = delta_k.
  std::vector<double> g(n);
  g[0] = 1.0 / h.samples[0];
  for (int k = 1; k < n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += h.samples[j] * g[k - j];
    g[k] = -acc / h.samples[0];
  }
  return step_from_impulse({step.dt, std::move(g), KernelTrace::Kind::impulse_response});
}

double StepForm::eval(double t_ns) const {
  switch (kind) {
    case Kind::linear_ramp:
      return 1.0 + a * t_ns;
    case Kind::exp_approach:
      return 1.0 + alpha * std::exp(-t_ns / tau);
    case Kind::quadratic:
      return 1.0 + c1 * t_ns + c2 * t_ns * t_ns;
    case Kind::skin_effect:
      return 1.0 - std::erf(alpha_db / (21.0 * std::sqrt(t_ns + 1.0)));
  }
  throw std::logic_error("StepForm: unknown kind");
}

double StepForm::time_constant() const {
  return kind == Kind::exp_approach ? tau : 0.0;
}

std::string StepForm::name() const {
  switch (kind) {
    case Kind::linear_ramp: return "linear_ramp";
    case Kind::exp_approach: return "exp_approach";
    case Kind::quadratic: return "quadratic";
    case Kind::skin_effect: return "skin_effect";
  }
  throw std::logic_error("StepForm: unknown kind");
}

StepForm::Kind step_form_kind_from_name(const std::string& name) {
  if (name == "linear_ramp") return StepForm::Kind::linear_ramp;
  if (name == "exp_approach") return StepForm::Kind::exp_approach;
  if (name == "quadratic") return StepForm::Kind::quadratic;
  if (name == "skin_effect") return StepForm::Kind::skin_effect;
  throw std::invalid_argument("unknown step form '" + name + "'");
}

KernelTrace parametric_kernel(const StepForm& form, double dt, int n) {
  if (dt <= 0.0 || n < 1) throw std::invalid_argument("parametric_kernel: need dt > 0, n >= 1");
  if (form.kind == StepForm::Kind::exp_approach && form.tau <= 0.0)
    throw std::invalid_argument("parametric_kernel: tau must be positive");
  KernelTrace step{dt, std::vector<double>(n), KernelTrace::Kind::step_response};
  for (int k = 0; k < n; ++k) step.samples[k] = form.eval(k * dt);
  return impulse_from_step(step);
}

StepFormFit fit_step_form(const KernelTrace& trace, StepForm::Kind kind) {
  trace.validate();
  KernelTrace step = trace.kind == KernelTrace::Kind::step_response
                         ? trace
                         : step_from_impulse(trace);
  const int n = int(step.samples.size());
  Eigen::VectorXd t(n), s(n);
  for (int k = 0; k < n; ++k) {
    t(k) = k * step.dt;
    s(k) = step.samples[k];
  }

  StepFormFit fit;
  fit.form.kind = kind;
  auto rms = [&](const StepForm& f) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = f.eval(t(k)) - s(k);
      acc += d * d;
    }
    return std::sqrt(acc / n);
  };

  switch (kind) {
    case StepForm::Kind::linear_ramp: {
      fit.form.a = t.squaredNorm() > 0.0 ? (s.array() - 1.0).matrix().dot(t) / t.squaredNorm() : 0.0;
      break;
    }
    case StepForm::Kind::quadratic: {
      Eigen::MatrixXd basis(n, 2);
      basis.col(0) = t;
      basis.col(1) = t.cwiseProduct(t);
      const Eigen::Vector2d c = basis.colPivHouseholderQr().solve((s.array() - 1.0).matrix());
      fit.form.c1 = c(0);
      fit.form.c2 = c(1);
      break;
    }
    case StepForm::Kind::exp_approach: {
      // alpha is linear given tau; profile the residual over log tau.
      auto alpha_for = [&](double tau) {
        const Eigen::VectorXd e = (-t.array() / tau).exp().matrix();
        return (s.array() - 1.0).matrix().dot(e) / e.squaredNorm();
      };
      auto obj = [&](double log_tau) {
        StepForm f = fit.form;
        f.tau = std::exp(log_tau);
        f.alpha = alpha_for(f.tau);
        return rms(f);
      };
      const double span = t(n - 1) > 0.0 ? t(n - 1) : step.dt;
      const double log_tau = golden_min(obj, std::log(0.25 * step.dt), std::log(20.0 * span));
      fit.form.tau = std::exp(log_tau);
      fit.form.alpha = alpha_for(fit.form.tau);
      // A flat trace leaves tau unconstrained; report alpha = 0 as converged.
      fit.converged = std::isfinite(fit.form.alpha);
      break;
    }
    case StepForm::Kind::skin_effect: {
      auto obj = [&](double adb) {
        StepForm f = fit.form;
        f.alpha_db = adb;
        return rms(f);
      };
      fit.form.alpha_db = golden_min(obj, 0.0, 60.0);
      break;
    }
  }
  fit.residual_rms = rms(fit.form);
  if (!std::isfinite(fit.residual_rms)) fit.converged = false;
  return fit;
}

KernelTrace compose_kernels(const std::vector<KernelTrace>& kernels) {
  if (kernels.empty()) throw std::invalid_argument("compose_kernels: empty list");
  size_t len = kernels[0].samples.size();
  for (const auto& k : kernels) {
    k.validate();
    if (k.kind != KernelTrace::Kind::impulse_response)
      throw std::invalid_argument("compose_kernels: inputs must be impulse responses");
    if (std::abs(k.dt - kernels[0].dt) > 1e-12)
      throw std::invalid_argument("compose_kernels: mismatched sampling periods");
    len = std::min(len, k.samples.size());
  }
  // Truncated causal convolution: out[k] depends only on inputs up to k, so
  // truncating to the shortest length keeps composition exactly associative.
  std::vector<double> acc(kernels[0].samples.begin(), kernels[0].samples.begin() + len);
  for (size_t m = 1; m < kernels.size(); ++m) {
    std::vector<double> next(len, 0.0);
    for (size_t k = 0; k < len; ++k)
      for (size_t j = 0; j <= k; ++j) next[k] += acc[j] * kernels[m].samples[k - j];
    acc = std::move(next);
  }
  return {kernels[0].dt, std::move(acc), KernelTrace::Kind::impulse_response};
}

std::vector<double> apply_kernel(const KernelTrace& impulse, const std::vector<double>& waveform) {
  impulse.validate();
  if (impulse.kind != KernelTrace::Kind::impulse_response)
    throw std::invalid_argument("apply_kernel: kernel must be an impulse response");
  std::vector<double> out(waveform.size(), 0.0);
  const size_t hl = impulse.samples.size();
  for (size_t k = 0; k < waveform.size(); ++k) {
    const size_t jmax = std::min(k + 1, hl);
    for (size_t j = 0; j < jmax; ++j) out[k] += impulse.samples[j] * waveform[k - j];
  }
  return out;
}

int settle_index(double time_constant_ns, double dt, double multiplier) {
  if (dt <= 0.0) throw std::invalid_argument("settle_index: dt must be positive");
  if (time_constant_ns <= 0.0) return 0;
  return int(std::ceil(multiplier * time_constant_ns / dt)) + 1;
}

}  // namespace qrsim
