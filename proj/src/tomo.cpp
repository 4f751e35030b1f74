#include "qrsim/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qrsim/operators.hpp"

namespace qrsim {

namespace {

constexpr double kWignerBound = 2.0 / M_PI;

// Deterministic Nelder-Mead minimizer, used by the double-Gaussian fit.
Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                            Eigen::VectorXd x0, double scale, int max_iter) {
  const int n = int(x0.size());
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1](i) += scale;
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  for (int it = 0; it < max_iter; ++it) {
    // Order: pts[order[0]] best, pts[order[n]] worst.
    std::vector<int> order(n + 1);
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (std::abs(vals[worst] - vals[best]) < 1e-14 * (1.0 + std::abs(vals[best]))) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    const Eigen::VectorXd refl = centroid + (centroid - pts[worst]);
    const double fr = f(refl);
    if (fr < vals[best]) {
      const Eigen::VectorXd exp_pt = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(exp_pt);
      if (fe < fr) {
        pts[worst] = exp_pt;
        vals[worst] = fe;
      } else {
        pts[worst] = refl;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = refl;
      vals[worst] = fr;
    } else {
      const Eigen::VectorXd contr = centroid + 0.5 * (pts[worst] - centroid);
      const double fc = f(contr);
      if (fc < vals[worst]) {
        pts[worst] = contr;
        vals[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (vals[i] < vals[best]) best = i;
  return pts[best];
}

double gauss2(const Eigen::VectorXd& p, double x, double y) {
  // p = (cx1, cy1, log sigma1, a1, cx2, cy2, log sigma2, a2)
  double out = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double dx = x - p(4 * k), dy = y - p(4 * k + 1);
    const double s2 = std::exp(2.0 * p(4 * k + 2));
    out += p(4 * k + 3) * std::exp(-(dx * dx + dy * dy) / (2.0 * s2));
  }
  return out;
}

}  // namespace

void WignerDataset::validate() const {
  if (points.empty()) throw std::invalid_argument("WignerDataset: no points");
  space_build.validate();
  space_trunc.validate();
  if (space_trunc.n_max > space_build.n_max)
    throw std::invalid_argument("WignerDataset: space_trunc larger than space_build");
  double max_a2 = 0.0;
  for (const auto& pt : points) max_a2 = std::max(max_a2, std::norm(pt.alpha));
  if (double(space_build.n_max) < 4.0 * max_a2)
    throw std::invalid_argument("WignerDataset: space_build.n_max must exceed 4 max|alpha|^2 = " +
                                std::to_string(4.0 * max_a2));
  for (const auto& pt : points) {
    const double eps = 1e-9 + (pt.shots > 0 ? 3.0 * kWignerBound / std::sqrt(double(pt.shots)) : 0.0);
    if (std::abs(pt.value) > kWignerBound + eps)
      throw std::invalid_argument("WignerDataset: value " + std::to_string(pt.value) +
                                  " outside the Wigner bound 2/pi");
  }
}

MeasurementOps build_measurement_ops(const WignerDataset& dataset) {
  dataset.validate();
  const int dt = dataset.space_trunc.dim_res();
  const Mat pi_big = parity_operator(dataset.space_build).entries;

  MeasurementOps result;
  result.ops.reserve(dataset.points.size());
  for (const auto& pt : dataset.points) {
    const Mat d = displacement(pt.alpha, dataset.space_build).entries;
    const Mat m_big = d * pi_big * d.adjoint();
    Mat m = m_big.topLeftCorner(dt, dt);
    m = 0.5 * (m + Mat(m.adjoint()));
    result.ops.push_back(std::move(m));
  }

  // Informational completeness: the M_alpha must span dt^2 real dimensions.
  const int n = int(result.ops.size());
  Eigen::MatrixXd vecs(n, dt * dt);
  for (int i = 0; i < n; ++i) {
    int col = 0;
    for (int r = 0; r < dt; ++r) {
      vecs(i, col++) = result.ops[i](r, r).real();
      for (int c = r + 1; c < dt; ++c) {
        vecs(i, col++) = result.ops[i](r, c).real();
        vecs(i, col++) = result.ops[i](r, c).imag();
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vecs);
  const double thresh = 1e-10 * svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thresh) ++rank;
  result.informationally_complete = (rank >= dt * dt);
  return result;
}

MleResult mle_reconstruct(const WignerDataset& dataset, const MeasurementOps& ops) {
  dataset.validate();
  const int n = int(dataset.points.size());
  if (int(ops.ops.size()) != n)
    throw std::invalid_argument("mle_reconstruct: ops/point count mismatch");
  const int dt = dataset.space_trunc.dim_res();

  // Per-point weights: uniform, or inverse binomial variance when sampled.
  Eigen::VectorXd w(n), v(n);
  bool any_shots = false;
  for (int i = 0; i < n; ++i) {
    v(i) = dataset.points[i].value;
    if (dataset.points[i].shots > 0) any_shots = true;
  }
  for (int i = 0; i < n; ++i) {
    if (any_shots && dataset.points[i].shots > 0) {
      const double pi_hat = std::clamp(v(i) / kWignerBound, -1.0, 1.0);
      w(i) = dataset.points[i].shots / std::max(1.0 - pi_hat * pi_hat, 0.05);
    } else {
      w(i) = 1.0;
    }
  }
  w /= w.mean();

  Mat rho = Mat::Identity(dt, dt) / double(dt);
  auto predictions = [&](const Mat& r) {
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p(i) = kWignerBound * (ops.ops[i] * r).trace().real();
    return p;
  };
  auto log_likelihood = [&](const Mat& r) {
    const Eigen::VectorXd res = v - predictions(r);
    return -res.cwiseAbs2().dot(w);
  };

  double ll = log_likelihood(rho);
  double lambda = 0.1;
  int stall = 0, it = 0;
  for (; it < 5000 && stall < 10; ++it) {
    const Eigen::VectorXd res = v - predictions(rho);
    Mat grad = Mat::Zero(dt, dt);
    for (int i = 0; i < n; ++i) grad += (w(i) * res(i)) * ops.ops[i];
    grad *= kWignerBound;

    const Mat r_op = Mat::Identity(dt, dt) + lambda * grad;
    Mat cand = r_op * rho * r_op.adjoint();
    cand /= cand.trace().real();
    const double cand_ll = log_likelihood(cand);
    if (cand_ll >= ll - 1e-15) {
      stall = (cand_ll - ll < 1e-10) ? stall + 1 : 0;
      rho = std::move(cand);
      ll = cand_ll;
      lambda = std::min(lambda * 1.2, 5.0);
    } else {
      lambda *= 0.5;
      if (lambda < 1e-8) break;
    }
  }
  rho = 0.5 * (rho + Mat(rho.adjoint()));

  MleResult out;
  out.rho = std::move(rho);
  out.log_likelihood = ll;
  out.iterations = it;
  out.converged = (stall >= 10);
  out.rank_deficient_data = !ops.informationally_complete;
  return out;
}

DoubleGaussianFit double_gaussian_fit(const std::vector<WignerPoint>& grid) {
  if (grid.size() < 8)
    throw std::invalid_argument("double_gaussian_fit: need at least 8 samples");

  // Initialize from the global maximum and the largest value far from it.
  int i1 = 0;
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i].value > grid[i1].value) i1 = int(i);
  int i2 = -1;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid[i].alpha - grid[i1].alpha) < 1.0) continue;
    if (i2 < 0 || grid[i].value > grid[i2].value) i2 = int(i);
  }
  if (i2 < 0) i2 = i1;

  Eigen::VectorXd p0(8);
  p0 << grid[i1].alpha.real(), grid[i1].alpha.imag(), std::log(0.5),
      std::max(grid[i1].value, 1e-3), grid[i2].alpha.real(), grid[i2].alpha.imag(),
      std::log(0.5), std::max(grid[i2].value, 1e-3);

  auto sse = [&](const Eigen::VectorXd& p) {
    double s = 0.0;
    for (const auto& pt : grid) {
      const double diff = gauss2(p, pt.alpha.real(), pt.alpha.imag()) - pt.value;
      s += diff * diff;
    }
    return s;
  };
  Eigen::VectorXd p = nelder_mead(sse, p0, 0.2, 4000);
  p = nelder_mead(sse, p, 0.05, 2000);  // refinement pass from the first optimum

  DoubleGaussianFit fit;
  for (int k = 0; k < 2; ++k) {
    fit.peaks[k].center = cxd(p(4 * k), p(4 * k + 1));
    fit.peaks[k].width = std::exp(p(4 * k + 2));
    fit.peaks[k].weight = p(4 * k + 3);
  }
  if (fit.peaks[1].weight > fit.peaks[0].weight) std::swap(fit.peaks[0], fit.peaks[1]);
  fit.residual_rms = std::sqrt(sse(p) / double(grid.size()));

  // Peaks closer than one width cannot be resolved, and neither can a peak
  // carrying negligible weight: refit a single Gaussian.
  const double sep = std::abs(fit.peaks[0].center - fit.peaks[1].center);
  const bool negligible = std::abs(fit.peaks[1].weight) < 0.05 * std::abs(fit.peaks[0].weight);
  if (sep < std::max(fit.peaks[0].width, fit.peaks[1].width) || negligible) {
    auto sse1 = [&](const Eigen::VectorXd& q) {
      Eigen::VectorXd full(8);
      full << q(0), q(1), q(2), q(3), q(0), q(1), q(2), 0.0;
      return sse(full);
    };
    Eigen::VectorXd q0(4);
    q0 << fit.peaks[0].center.real(), fit.peaks[0].center.imag(),
        std::log(fit.peaks[0].width), fit.peaks[0].weight;
    const Eigen::VectorXd q = nelder_mead(sse1, q0, 0.1, 2000);
    fit.peaks[0] = {cxd(q(0), q(1)), std::exp(q(2)), q(3)};
    fit.peaks[1] = {cxd(q(0), q(1)), std::exp(q(2)), 0.0};
    Eigen::VectorXd full(8);
    full << q(0), q(1), q(2), q(3), q(0), q(1), q(2), 0.0;
    fit.residual_rms = std::sqrt(sse(full) / double(grid.size()));
    fit.single_peak_fallback = true;
  }
  return fit;
}

Mat systematic_phase_correction(const Mat& rho, double theta) {
  const int d = int(rho.rows());
  Vec phases(d);
  for (int n = 0; n < d; ++n) phases(n) = std::exp(cxd(0, theta * n));
  return phases.asDiagonal() * rho * phases.conjugate().asDiagonal();
}

}  // namespace qrsim
