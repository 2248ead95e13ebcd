#include "qhd/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "qhd/errors.hpp"

namespace qhd {

namespace {

using cd = std::complex<double>;

long step_count(double t0, double T, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(T > t0)) throw InvalidArgument("final time must exceed start time");
  const double n = (T - t0) / dt;
  const long k = std::lround(n);
  if (std::abs(n - static_cast<double>(k)) > 1e-6) throw InvalidArgument("dt must divide the time interval");
  return k;
}

// Maps requested snapshot times onto step indices.
std::map<long, double> snapshot_steps(const std::vector<double>& times, double t0, double dt, long n) {
  std::map<long, double> out;
  for (double ts : times) {
    const double x = (ts - t0) / dt;
    const long k = std::lround(x);
    if (std::abs(x - static_cast<double>(k)) > 1e-6 || k < 0 || k > n)
      throw InvalidArgument("snapshot time is not on the step grid");
    out[k] = ts;
  }
  return out;
}

class Recorder {
 public:
  Recorder(const Mesh& mesh, const Vector& potential, const std::optional<Vector>& target, double radius)
      : potential_(potential), mask_(Vector::Zero(static_cast<Eigen::Index>(mesh.size()))) {
    has_target_ = target.has_value();
    if (has_target_) {
      if (target->size() != mesh.dim()) throw InvalidArgument("target dimension mismatch");
      if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
      for (std::size_t i = 0; i < mesh.size(); ++i)
        if (within_radius(mesh.point(i), *target, radius)) mask_[i] = 1.0;
    }
  }

  void record(Trajectory& tr, double t, const CVector& psi) const {
    const Vector p = psi.cwiseAbs2();
    const double mass = p.sum();
    tr.times.push_back(t);
    tr.observables["Ef"].push_back(p.dot(potential_) / mass);
    tr.observables["norm"].push_back(std::sqrt(mass));
    if (has_target_) tr.observables["success_prob"].push_back(std::min(1.0, p.dot(mask_) / mass));
  }

 private:
  const Vector& potential_;
  Vector mask_;
  bool has_target_ = false;
};

void check_finite(const CVector& psi, long step) {
  const double n = psi.squaredNorm();
  if (!std::isfinite(n)) throw NumericalBlowup("non-finite amplitude at step " + std::to_string(step), step);
}

}  // namespace

Vector kinetic_spectrum(const Mesh& mesh) {
  if (mesh.boundary() != Boundary::periodic) throw InvalidArgument("kinetic spectrum needs a periodic mesh");
  const int n = mesh.nodes_per_edge();
  Vector kin(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    double s = 0.0;
    for (int j : mesh.multi_index(i)) {
      const int k = j < n / 2 ? j : j - n;
      const double w = 2.0 * std::numbers::pi * k;
      s += w * w;
    }
    kin[i] = 0.5 * s;
  }
  return kin;
}

CVector apply_fourier_multiplier(const Mesh& mesh, const CVector& psi, const CVector& mult) {
  if (mesh.boundary() != Boundary::periodic) throw InvalidArgument("fourier multiplier needs a periodic mesh");
  detail::FftBuffer buf(mesh.dim(), mesh.nodes_per_edge());
  const double scale = 1.0 / static_cast<double>(mesh.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf.data()[i] = psi[i];
  buf.forward();
  for (std::size_t i = 0; i < buf.size(); ++i) buf.data()[i] *= mult[i] * scale;
  buf.backward();
  CVector out(psi.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf.data()[i];
  return out;
}

Trajectory qhd_evolve(const Mesh& mesh, const DiagonalOperator& potential, const Schedule& sched,
                      double T, double dt, const WaveFunction& psi0, const EvolveOptions& opts) {
  if (mesh.boundary() != Boundary::periodic) throw InvalidArgument("qhd_evolve needs a periodic mesh");
  if (psi0.mesh() != mesh || potential.mesh() != mesh) throw InvalidArgument("mesh mismatch");
  const long n = step_count(opts.t0, T, dt);
  const auto snaps = snapshot_steps(opts.snapshot_times, opts.t0, dt, n);
  const int every = std::max(1, opts.record_every);

  const Vector& f = potential.values();
  const Vector kin = kinetic_spectrum(mesh);
  const double scale = 1.0 / static_cast<double>(mesh.size());
  detail::FftBuffer buf(mesh.dim(), mesh.nodes_per_edge());
  cd* psi = buf.data();
  const std::size_t m = buf.size();
  for (std::size_t i = 0; i < m; ++i) psi[i] = psi0.amplitudes()[i];

  Trajectory tr{mesh, {}, {}, {}, {}, {}};
  Recorder rec(mesh, f, opts.target, opts.radius);
  auto view = [&]() { return CVector(Eigen::Map<const CVector>(psi, static_cast<Eigen::Index>(m))); };
  auto on_step = [&](long j) {
    const double t = opts.t0 + static_cast<double>(j) * dt;
    if (j % every == 0 || j == n) rec.record(tr, t, view());
    if (auto it = snaps.find(j); it != snaps.end()) {
      tr.snapshot_times.push_back(it->second);
      tr.snapshots.push_back(WaveFunction::normalized(mesh, view()));
    }
  };
  on_step(0);

  for (long j = 0; j < n; ++j) {
    const double t = opts.t0 + static_cast<double>(j) * dt;
    const double a = sched.e_phi(t);
    const double b = sched.e_chi(t);
    if (!std::isfinite(a) || !std::isfinite(b))
      throw NumericalBlowup("schedule is not finite at t=" + std::to_string(t), j);
    for (std::size_t i = 0; i < m; ++i) psi[i] *= std::polar(1.0, -dt * b * f[i]);
    buf.forward();
    for (std::size_t i = 0; i < m; ++i) psi[i] *= std::polar(scale, -dt * a * kin[i]);
    buf.backward();
    if ((j + 1) % 64 == 0 || j + 1 == n) check_finite(view(), j + 1);
    on_step(j + 1);
  }
  tr.final_amplitudes = view();
  return tr;
}

Trajectory qhd_evolve(const Mesh& mesh, const Objective& f, const Schedule& sched, double T,
                      double dt, const WaveFunction& psi0, const EvolveOptions& opts) {
  EvolveOptions o = opts;
  if (!o.target && f.minimizer) o.target = f.minimizer;
  return qhd_evolve(mesh, discretize_objective(mesh, f), sched, T, dt, psi0, o);
}

Radix2Problem radix2_problem(const Objective& f, int bits_per_var) {
  if (bits_per_var < 1) throw InvalidArgument("need at least one bit per variable");
  if (f.dim * bits_per_var > 24) throw ResourceError("radix-2 encoding limited to 24 qubits");
  Mesh mesh = Mesh::periodic(f.dim, 1 << bits_per_var);
  Vector diag = discretize_objective(mesh, f).values();
  return Radix2Problem{f.dim, bits_per_var, mesh, std::move(diag)};
}

void qaa_step(CVector& psi, const Vector& diag, int qubits, const Schedule& sched, double t, double dt) {
  const Eigen::Index m = psi.size();
  auto kick = [&](double tk) {
    const double c = 0.5 * dt * sched.e_chi(tk);
    for (Eigen::Index i = 0; i < m; ++i) psi[i] *= std::polar(1.0, -c * diag[i]);
  };
  kick(t);
  // exp(-i dt A (-sigma_x)) = cos(theta) + i sin(theta) sigma_x per qubit
  const double theta = dt * sched.e_phi(t + 0.5 * dt);
  const double c = std::cos(theta), s = std::sin(theta);
  for (int q = 0; q < qubits; ++q) {
    const Eigen::Index mask = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i & mask) continue;
      const cd u = psi[i], v = psi[i | mask];
      psi[i] = c * u + cd(0.0, s) * v;
      psi[i | mask] = c * v + cd(0.0, s) * u;
    }
  }
  kick(t + dt);
}

Trajectory qaa_evolve(const Radix2Problem& problem, const Schedule& sched, double T, double dt,
                      const EvolveOptions& opts) {
  const long n = step_count(opts.t0, T, dt);
  const auto snaps = snapshot_steps(opts.snapshot_times, opts.t0, dt, n);
  const int every = std::max(1, opts.record_every);
  const int qubits = problem.qubits();
  const Mesh& mesh = problem.mesh;

  CVector psi = uniform_state(mesh).amplitudes();
  Trajectory tr{mesh, {}, {}, {}, {}, {}};
  Recorder rec(mesh, problem.diag, opts.target, opts.radius);
  auto on_step = [&](long j) {
    const double t = opts.t0 + static_cast<double>(j) * dt;
    if (j % every == 0 || j == n) rec.record(tr, t, psi);
    if (auto it = snaps.find(j); it != snaps.end()) {
      tr.snapshot_times.push_back(it->second);
      tr.snapshots.push_back(WaveFunction::normalized(mesh, psi));
    }
  };
  on_step(0);
  for (long j = 0; j < n; ++j) {
    qaa_step(psi, problem.diag, qubits, sched, opts.t0 + static_cast<double>(j) * dt, dt);
    if ((j + 1) % 64 == 0 || j + 1 == n) {
      check_finite(psi, j + 1);
      const double elapsed = static_cast<double>(j + 1) * dt;
      const double drift = std::abs(psi.norm() - 1.0);
      if (drift > 1e-6 * std::max(1.0, elapsed))
        throw StabilityError("norm drift " + std::to_string(drift) + " exceeds tolerance; reduce dt");
    }
    on_step(j + 1);
  }
  tr.final_amplitudes = psi;
  return tr;
}

}  // namespace qhd
