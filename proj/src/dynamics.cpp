#include "qrsim/dynamics.hpp"

#include <cmath>
#include <map>

#include <Eigen/SparseCore>
#include <unsupported/Eigen/MatrixFunctions>

#include "qrsim/operators.hpp"

namespace qrsim {

namespace {

// Apply a 2x2 qubit operator to a joint vector (qubit factor first).
void apply_qubit_inplace(const Mat& q, Vec& psi, int dres) {
  Vec top = psi.head(dres);
  psi.head(dres) = q(0, 0) * top + q(0, 1) * psi.tail(dres);
  psi.tail(dres) = q(1, 0) * top + q(1, 1) * psi.tail(dres);
}

Mat qubit_to_joint(const Mat& q, int dres) {
  return embed(q, Mat::Identity(dres, dres));
}

// (I (x) a) rho: rows of rho shifted down one photon, scaled by sqrt(n+1).
Mat apply_a_left(const Mat& rho, int dres) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (int q = 0; q < 2; ++q)
    for (int n = 0; n + 1 < dres; ++n)
      out.row(q * dres + n) = std::sqrt(double(n + 1)) * rho.row(q * dres + n + 1);
  return out;
}

// m (I (x) a^dag): columns shifted, scaled by sqrt(n+1).
Mat apply_adag_right(const Mat& m, int dres) {
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (int q = 0; q < 2; ++q)
    for (int n = 0; n + 1 < dres; ++n)
      out.col(q * dres + n) = std::sqrt(double(n + 1)) * m.col(q * dres + n + 1);
  return out;
}

// Photon-number scaling of rows (left) or columns (right).
void number_scale_left(Mat& m, int dres, double factor) {
  for (int q = 0; q < 2; ++q)
    for (int n = 0; n < dres; ++n) m.row(q * dres + n) *= factor * n;
}

Mat dissipator(const Mat& rho, int dres, double kappa) {
  Mat out = apply_adag_right(apply_a_left(rho, dres), dres);
  Mat nrho = rho;
  number_scale_left(nrho, dres, 1.0);
  out -= 0.5 * (nrho + nrho.adjoint());
  return kappa * out;
}

Mat master_rhs(const Eigen::SparseMatrix<cxd>& h, const Mat& rho, int dres, double kappa) {
  const Mat hrho = h * rho;
  Mat out = cxd(0, -1) * (hrho - Mat(hrho.adjoint()));
  if (kappa > 0.0) out += dissipator(rho, dres, kappa);
  return out;
}

void rk4_segment(const Eigen::SparseMatrix<cxd>& h, Mat& rho, int dres, double kappa,
                 double duration, double dt_target) {
  if (duration <= 0.0) return;
  const int nsub = std::max(1, int(std::ceil(duration / dt_target)));
  const double dt = duration / nsub;
  for (int s = 0; s < nsub; ++s) {
    const Mat k1 = master_rhs(h, rho, dres, kappa);
    const Mat k2 = master_rhs(h, rho + (0.5 * dt) * k1, dres, kappa);
    const Mat k3 = master_rhs(h, rho + (0.5 * dt) * k2, dres, kappa);
    const Mat k4 = master_rhs(h, rho + dt * k3, dres, kappa);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

// Liouvillian on column-major vec(rho): vec(A X B) = (B^T (x) A) vec(X).
Mat liouvillian(const Mat& h, int dres, double kappa) {
  const int d = int(h.rows());
  const Mat id = Mat::Identity(d, d);
  Mat a_joint = Mat::Zero(d, d);
  for (int q = 0; q < 2; ++q)
    for (int n = 0; n + 1 < dres; ++n)
      a_joint(q * dres + n, q * dres + n + 1) = std::sqrt(double(n + 1));
  const Mat n_joint = a_joint.adjoint() * a_joint;

  auto kron = [](const Mat& x, const Mat& y) { return embed(x, y); };
  Mat l = cxd(0, -1) * (kron(id, h) - kron(h.transpose(), id));
  if (kappa > 0.0) {
    l += kappa * kron(a_joint.conjugate(), a_joint);
    l -= (0.5 * kappa) * (kron(id, n_joint) + kron(n_joint.transpose(), id));
  }
  return l;
}

void check_trace(const Mat& rho, double t) {
  const cxd tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > 1e-8 || std::abs(tr.imag()) > 1e-8)
    throw std::runtime_error("evolve_lindblad: trace drifted to " + std::to_string(tr.real()) +
                             " at t = " + std::to_string(t) + " us; reduce rk4_dt");
}

// Exact amplitude-damping Kraus operators for decay probability gamma,
// K_k connecting |n> -> |n-k>.
std::vector<Mat> damping_kraus(int dres, double gamma) {
  std::vector<Mat> ks;
  if (gamma <= 0.0) {
    ks.push_back(Mat::Identity(dres, dres));
    return ks;
  }
  for (int k = 0; k < dres; ++k) {
    Mat kk = Mat::Zero(dres, dres);
    for (int n = k; n < dres; ++n) {
      // sqrt(binomial(n, k) gamma^k (1-gamma)^(n-k)), accumulated in logs
      double logw = 0.0;
      for (int j = 0; j < k; ++j) logw += std::log(double(n - j) / double(k - j));
      logw += k * std::log(gamma) + (n - k) * std::log1p(-gamma);
      kk(n - k, n) = std::exp(0.5 * logw);
    }
    ks.push_back(std::move(kk));
  }
  return ks;
}

}  // namespace

Trajectory evolve_unitary(const QuantumOperator& h, const QuantumState& psi0,
                          const std::vector<double>& times) {
  if (!h.hermitian) {
    const double scale = std::max(1.0, h.entries.norm());
    if ((h.entries - h.entries.adjoint()).norm() > 1e-10 * scale)
      throw std::invalid_argument("evolve_unitary: Hamiltonian is not Hermitian");
  }
  if (!psi0.is_pure()) throw std::invalid_argument("evolve_unitary: needs a pure state");
  if (psi0.entries.rows() != h.entries.rows())
    throw std::invalid_argument("evolve_unitary: state/operator dimension mismatch");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (times[i + 1] < times[i])
      throw std::invalid_argument("evolve_unitary: times must be sorted");
  if (!times.empty() && times.front() < 0.0)
    throw std::invalid_argument("evolve_unitary: times must start at >= 0");

  Eigen::SelfAdjointEigenSolver<Mat> es(h.entries);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("evolve_unitary: eigendecomposition failed");
  const Vec coeff = es.eigenvectors().adjoint() * psi0.vector();

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  for (double t : times) {
    Vec phased(coeff.size());
    for (int i = 0; i < coeff.size(); ++i)
      phased(i) = coeff(i) * std::exp(cxd(0, -es.eigenvalues()(i) * t));
    Vec psi = es.eigenvectors() * phased;
    psi /= psi.norm();
    traj.states.emplace_back(psi0.space, psi0.support, std::move(psi));
  }
  return traj;
}

Trajectory evolve_trotter(const TrotterPlan& plan, const QuantumState& psi0,
                          const SpaceSpec& space, const TrotterRunOptions& opts) {
  plan.validate();
  if (!psi0.is_pure() || psi0.support != Support::joint)
    throw std::invalid_argument("evolve_trotter: needs a pure joint state");
  if (opts.sample_stride < 1)
    throw std::invalid_argument("evolve_trotter: sample_stride must be >= 1");
  const int dres = space.dim_res();

  // All JC segments share at most two generators: detuned (outer JC
  // segments) and resonant (inside the AJC block).
  Eigen::SelfAdjointEigenSolver<Mat> es_outer(
      build_jc(plan.g, 0.0, plan.delta_q_jc, space).entries);
  auto propagator = [&](const Eigen::SelfAdjointEigenSolver<Mat>& es, double t) {
    Vec ph(es.eigenvalues().size());
    for (int i = 0; i < ph.size(); ++i) ph(i) = std::exp(cxd(0, -es.eigenvalues()(i) * t));
    return Mat(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
  };
  Mat u_inner;
  if (plan.delta_q_jc == 0.0) {
    u_inner = propagator(es_outer, plan.tau);
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es_inner(build_jc(plan.g, 0.0, 0.0, space).entries);
    u_inner = propagator(es_inner, plan.tau);
  }
  const Mat u_full = propagator(es_outer, plan.tau);
  const Mat u_half = (plan.order == 2) ? propagator(es_outer, 0.5 * plan.tau) : Mat();

  const auto schedule = phase_schedule(plan);
  Vec psi = psi0.vector();

  Trajectory traj;
  traj.params = plan;
  traj.times.push_back(0.0);
  traj.states.emplace_back(space, Support::joint, psi);

  auto record = [&](int step) {
    Vec copy = psi;
    copy /= copy.norm();
    traj.times.push_back(step * plan.tau);
    traj.states.emplace_back(space, Support::joint, std::move(copy));
  };

  if (plan.order == 1) {
    for (int n = 1; n <= plan.n_steps; ++n) {
      psi = u_full * psi;  // the JC pulse comes first in time
      apply_qubit_inplace(bit_flip(schedule[n - 1].first).entries, psi, dres);
      psi = u_inner * psi;
      apply_qubit_inplace(bit_flip(schedule[n - 1].second).entries, psi, dres);
      if (n % opts.sample_stride == 0 || n == plan.n_steps) record(n);
    }
    return traj;
  }

  // Order 2. Between two samples the trailing half pulse of one step and the
  // leading half pulse of the next share a generator and can be merged.
  bool pending_half = false;  // a trailing half pulse not yet applied
  for (int n = 1; n <= plan.n_steps; ++n) {
    if (pending_half) {
      psi = (opts.merge_half_steps ? u_full : Mat(u_half * u_half)) * psi;
    } else {
      psi = u_half * psi;
    }
    apply_qubit_inplace(bit_flip(schedule[n - 1].first).entries, psi, dres);
    psi = u_inner * psi;
    apply_qubit_inplace(bit_flip(schedule[n - 1].second).entries, psi, dres);
    if (n % opts.sample_stride == 0 || n == plan.n_steps) {
      psi = u_half * psi;
      record(n);
      pending_half = false;
    } else {
      pending_half = true;
    }
  }
  return traj;
}

Trajectory evolve_lindblad(const std::vector<std::pair<QuantumOperator, double>>& segments,
                           const QuantumState& rho0, double t1_res,
                           const LindbladOptions& opts) {
  if (t1_res <= 0.0) throw std::invalid_argument("evolve_lindblad: t1_res must be > 0");
  const double kappa = std::isfinite(t1_res) ? 1.0 / t1_res : 0.0;
  const SpaceSpec space = rho0.space;
  const int dres = space.dim_res();
  const int d = space.dim_total();
  if (rho0.support != Support::joint)
    throw std::invalid_argument("evolve_lindblad: needs a joint-space state");

  Mat rho = rho0.density();
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.emplace_back(space, Support::joint, rho);

  const bool dense_superop = d <= opts.superop_budget;
  double t = 0.0;
  for (const auto& [h_op, duration] : segments) {
    if (duration < 0.0) throw std::invalid_argument("evolve_lindblad: negative duration");
    if (h_op.entries.rows() != d)
      throw std::invalid_argument("evolve_lindblad: segment dimension mismatch");
    if (dense_superop) {
      const Mat prop = expm(liouvillian(h_op.entries, dres, kappa) * duration);
      Eigen::Map<Vec> v(rho.data(), d * d);
      Vec out = prop * v;
      rho = Eigen::Map<Mat>(out.data(), d, d);
    } else {
      Eigen::SparseMatrix<cxd> hs = h_op.entries.sparseView(1.0, 1e-14);
      rk4_segment(hs, rho, dres, kappa, duration, opts.rk4_dt);
    }
    t += duration;
    check_trace(rho, t);
    rho = 0.5 * (rho + Mat(rho.adjoint()));
    traj.times.push_back(t);
    traj.states.emplace_back(space, Support::joint, rho);
  }
  return traj;
}

Trajectory evolve_lindblad_trotter(const TrotterPlan& plan, const QuantumState& rho0,
                                   double t1_res, const SpaceSpec& space,
                                   const LindbladOptions& opts) {
  plan.validate();
  if (t1_res <= 0.0) throw std::invalid_argument("evolve_lindblad_trotter: t1_res must be > 0");
  const double kappa = std::isfinite(t1_res) ? 1.0 / t1_res : 0.0;
  const int dres = space.dim_res();
  const int d = space.dim_total();
  if (rho0.support != Support::joint || rho0.space != space)
    throw std::invalid_argument("evolve_lindblad_trotter: needs a joint-space state");

  const Mat h_outer = build_jc(plan.g, 0.0, plan.delta_q_jc, space).entries;
  const Mat h_inner = build_jc(plan.g, 0.0, 0.0, space).entries;
  const auto schedule = phase_schedule(plan);

  Mat rho = rho0.density();
  Trajectory traj;
  traj.params = plan;
  traj.times.push_back(0.0);
  traj.states.emplace_back(space, Support::joint, rho);

  auto conjugate_qubit = [&](const Mat& q) {
    const Mat u = qubit_to_joint(q, dres);
    rho = u * rho * u.adjoint();
  };

  const bool dense_superop = d <= opts.superop_budget;
  // Dense path: cache the segment propagators (three distinct ones at most).
  std::map<std::pair<const Mat*, double>, Mat> cache;
  auto evolve_segment = [&](const Mat& h, double duration) {
    if (opts.decay_during_segments && dense_superop) {
      auto key = std::make_pair(&h, duration);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, expm(liouvillian(h, dres, kappa) * duration)).first;
      Eigen::Map<Vec> v(rho.data(), d * d);
      Vec out = it->second * v;
      rho = Eigen::Map<Mat>(out.data(), d, d);
    } else if (opts.decay_during_segments) {
      Eigen::SparseMatrix<cxd> hs = h.sparseView(1.0, 1e-14);
      rk4_segment(hs, rho, dres, kappa, duration, opts.rk4_dt);
    } else {
      auto key = std::make_pair(&h, duration);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, expm_hermitian_propagator(h, duration)).first;
      rho = it->second * rho * it->second.adjoint();
    }
  };

  std::vector<Mat> kraus;
  if (!opts.decay_during_segments && kappa > 0.0) {
    const double gamma = 1.0 - std::exp(-kappa * 2.0 * plan.tau);
    for (const Mat& k : damping_kraus(dres, gamma))
      kraus.push_back(embed(Mat::Identity(2, 2), k));
  }

  for (int n = 1; n <= plan.n_steps; ++n) {
    const auto [phi1, phi2] = schedule[n - 1];
    if (plan.order == 2) {
      evolve_segment(h_outer, 0.5 * plan.tau);
      conjugate_qubit(bit_flip(phi1).entries);
      evolve_segment(h_inner, plan.tau);
      conjugate_qubit(bit_flip(phi2).entries);
      evolve_segment(h_outer, 0.5 * plan.tau);
    } else {
      evolve_segment(h_outer, plan.tau);
      conjugate_qubit(bit_flip(phi1).entries);
      evolve_segment(h_inner, plan.tau);
      conjugate_qubit(bit_flip(phi2).entries);
    }
    if (!kraus.empty()) {
      Mat next = Mat::Zero(d, d);
      for (const Mat& k : kraus) next += k * rho * k.adjoint();
      rho = std::move(next);
    }
    check_trace(rho, n * plan.tau);
    rho = 0.5 * (rho + Mat(rho.adjoint()));
    traj.times.push_back(n * plan.tau);
    traj.states.emplace_back(space, Support::joint, rho);
  }
  return traj;
}

}  // namespace qrsim
