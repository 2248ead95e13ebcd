#include <bit>
#include <cmath>

#include "qhd/errors.hpp"
#include "qhd/ising.hpp"

namespace qhd {

namespace {

using cd = std::complex<double>;

// psi <- (U along `axis`) psi on a row-major grid with `nodes` points per axis.
void apply_along_axis(CVector& psi, const Eigen::MatrixXcd& U, const Mesh& mesh, int axis) {
  const Eigen::Index n = mesh.nodes_per_edge();
  const auto inner = static_cast<Eigen::Index>(mesh.stride(axis));
  const Eigen::Index outer = psi.size() / (n * inner);
  CVector buf(n);
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index i = 0; i < inner; ++i) {
      const Eigen::Index base = o * n * inner + i;
      for (Eigen::Index j = 0; j < n; ++j) buf[j] = psi[base + j * inner];
      const CVector out = U * buf;
      for (Eigen::Index j = 0; j < n; ++j) psi[base + j * inner] = out[j];
    }
  }
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

Trajectory relaxed_qhd_evolve(const QpInstance& qp, int r, const Schedule& sched, double T, double dt,
                              const EvolveOptions& opts) {
  if (r < 1) throw InvalidArgument("resolution must be positive");
  if (!(dt > 0.0) || !(T > opts.t0)) throw InvalidArgument("need dt > 0 and T > t0");
  const Mesh mesh = Mesh::dirichlet(qp.dim, r);
  if (mesh.size() > 2'000'000) throw ResourceError("relaxed grid too large");
  const double steps_real = (T - opts.t0) / dt;
  const long steps = std::lround(steps_real);
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-6) throw InvalidArgument("dt must divide the time interval");

  Vector f(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) f[i] = qp_value(qp, mesh.point(i));

  std::vector<double> axis_amp(r + 1);
  for (int j = 0; j <= r; ++j) axis_amp[j] = std::sqrt(binomial(r, j) / std::ldexp(1.0, r));
  CVector psi(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    double a = 1.0;
    for (int j : mesh.multi_index(i)) a *= axis_amp[j];
    psi[i] = a;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(relaxed_adjacency_1d(r));
  const Eigen::MatrixXd W = es.eigenvectors();
  const Vector mu = es.eigenvalues();
  const double r2 = static_cast<double>(r) * r;

  Vector mask = Vector::Zero(static_cast<Eigen::Index>(mesh.size()));
  if (opts.target)
    for (std::size_t i = 0; i < mesh.size(); ++i)
      if (within_radius(mesh.point(i), *opts.target, opts.radius)) mask[i] = 1.0;

  Trajectory tr{mesh, {}, {}, {}, {}, {}};
  std::map<long, double> snaps;
  for (double ts : opts.snapshot_times) {
    const long k = std::lround((ts - opts.t0) / dt);
    if (k < 0 || k > steps || std::abs(opts.t0 + k * dt - ts) > 1e-6 * dt)
      throw InvalidArgument("snapshot time is not on the step grid");
    snaps[k] = ts;
  }
  const int every = std::max(1, opts.record_every);
  auto record = [&](long j) {
    const double t = opts.t0 + static_cast<double>(j) * dt;
    if (j % every == 0 || j == steps) {
      const Vector p = psi.cwiseAbs2();
      tr.times.push_back(t);
      tr.observables["Ef"].push_back(p.dot(f));
      tr.observables["norm"].push_back(std::sqrt(p.sum()));
      if (opts.target) tr.observables["success_prob"].push_back(std::min(1.0, p.dot(mask)));
    }
    if (auto it = snaps.find(j); it != snaps.end()) {
      tr.snapshot_times.push_back(it->second);
      tr.snapshots.push_back(WaveFunction::normalized(mesh, psi));
    }
  };
  record(0);

  auto kick = [&](double t) {
    const double c = 0.5 * dt * sched.e_chi(t);
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -c * f[i]);
  };
  for (long j = 0; j < steps; ++j) {
    const double t = opts.t0 + static_cast<double>(j) * dt;
    kick(t);
    // exp(+i c A') with c = dt e^phi r^2 / 2
    const double c = dt * sched.e_phi(t + 0.5 * dt) * r2 / 2.0;
    CVector phase(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) phase[i] = std::polar(1.0, c * mu[i]);
    const Eigen::MatrixXcd U = W.cast<cd>() * phase.asDiagonal() * W.transpose().cast<cd>();
    for (int axis = 0; axis < mesh.dim(); ++axis) apply_along_axis(psi, U, mesh, axis);
    kick(t + dt);
    if (!std::isfinite(psi.squaredNorm())) throw NumericalBlowup("non-finite amplitude at step " + std::to_string(j + 1), j + 1);
    record(j + 1);
  }
  tr.final_amplitudes = psi;
  return tr;
}

std::vector<Vector> hamming_marginals(const CVector& state, int n, int block_size) {
  if (block_size < 1 || n % block_size != 0) throw InvalidArgument("block size must divide the qubit count");
  const int d = n / block_size;
  const std::uint64_t mask = (std::uint64_t{1} << block_size) - 1;
  std::vector<Vector> out(d, Vector::Zero(block_size + 1));
  for (Eigen::Index b = 0; b < state.size(); ++b) {
    const double p = std::norm(state[b]);
    for (int k = 0; k < d; ++k) {
      const auto block = (static_cast<std::uint64_t>(b) >> (block_size * (d - 1 - k))) & mask;
      out[k][std::popcount(block)] += p;
    }
  }
  return out;
}

static CVector dense_run(const Vector& diag, int n, const AnnealEnvelope& env, double t_f, long steps) {
  const double dxi = t_f / static_cast<double>(steps);
  const Eigen::Index size = diag.size();
  CVector psi = CVector::Constant(size, 1.0 / std::sqrt(static_cast<double>(size)));
  auto kick = [&](double xi) {
    const double c = 0.5 * dxi * env.B_over_h(xi) / 2.0;
    for (Eigen::Index i = 0; i < size; ++i) psi[i] *= std::polar(1.0, -c * diag[i]);
  };
  for (long j = 0; j < steps; ++j) {
    const double xi = static_cast<double>(j) * dxi;
    kick(xi);
    const double theta = dxi * env.A_over_h(xi + 0.5 * dxi) / 2.0;
    const double c = std::cos(theta), s = std::sin(theta);
    for (int q = 0; q < n; ++q) {
      const Eigen::Index m = Eigen::Index{1} << q;
      for (Eigen::Index i = 0; i < size; ++i) {
        if (i & m) continue;
        const cd u = psi[i], v = psi[i | m];
        psi[i] = c * u + cd(0.0, s) * v;
        psi[i | m] = c * v + cd(0.0, s) * u;
      }
    }
    kick(xi + dxi);
  }
  const double drift = std::abs(psi.norm() - 1.0);
  if (!(drift <= 1e-8)) throw StabilityError("dense ising norm drift " + std::to_string(drift) + "; reduce dt");
  return psi;
}

DenseIsingResult simulate_ising_dense(const IsingModel& model, const AnnealEnvelope& env, double t_f, double dt,
                                      const DenseIsingOptions& opts) {
  if (model.n > 14) throw ResourceError("dense ising simulation limited to 14 qubits");
  if (!(dt > 0.0) || !(t_f > 0.0)) throw InvalidArgument("need positive t_f and dt");
  long steps = std::max(1L, std::lround(t_f / dt));
  const Vector diag = ising_diagonal(model);
  DenseIsingResult res;
  res.state = dense_run(diag, model.n, env, t_f, steps);
  if (opts.refine) {
    for (int h = 0; h < opts.max_halvings; ++h) {
      steps *= 2;
      CVector finer = dense_run(diag, model.n, env, t_f, steps);
      const double diff = (finer - res.state).cwiseAbs().maxCoeff();
      res.state = std::move(finer);
      if (diff <= opts.refine_tol) break;
    }
  }
  res.steps = steps;
  res.dt_used = t_f / static_cast<double>(steps);
  if (opts.block_size > 0) res.marginals = hamming_marginals(res.state, model.n, opts.block_size);
  return res;
}

}  // namespace qhd
