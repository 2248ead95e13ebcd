#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "qhd/bench.hpp"
#include "qhd/dynamics.hpp"
#include "qhd/io.hpp"
#include "qhd/ising.hpp"
#include "qhd/spectral.hpp"

using namespace qhd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool eigen_ok(const SparseMatrix& H, const EigenSystem& eig, std::string& note) {
  const double res = max_residual(H, eig);
  const double orth = orthonormality_error(eig);
  const double bound = 1e-8 * inf_norm(H);
  note += " residual=" + fmt(res) + " orth=" + fmt(orth);
  return res <= bound && orth <= 1e-10;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome quadratic_rate() {
  const double L = 16.0;
  const int N = 512;
  const Mesh mesh = Mesh::periodic(1, N);
  const Objective f = centered_quadratic(1, 0.5 * L * L);
  const Schedule s = two_param_schedule(
      "quadratic", [L](double t) { return 2.0 / (t * t * t * L * L); }, [](double t) { return 2.0 * t * t * t; });
  Vector c(1);
  c << 0.5;
  const WaveFunction psi0 = gaussian_state(mesh, c, 1.0 / (L * L));
  EvolveOptions o;
  o.t0 = 1.0;
  o.record_every = 10;
  const Trajectory tr = qhd_evolve(mesh, f, s, 10.0, 1e-3, psi0, o);
  std::vector<double> lx, ly;
  const auto& ef = tr.series("Ef");
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    if (tr.times[i] >= 2.0 - 1e-9) {
      lx.push_back(std::log(tr.times[i]));
      ly.push_back(std::log(ef[i]));
    }
  const double k = slope(lx, ly);
  return {std::abs(k + 3.0) <= 0.3, "slope=" + fmt(k)};
}

Outcome kinetic_limit() {
  const Mesh mesh = Mesh::dirichlet(2, 64);
  const DiagonalOperator zero(mesh, Vector::Zero(static_cast<Eigen::Index>(mesh.size())));
  const SpectralHamiltonian h = build_hamiltonian(mesh, zero, 1.0, 0.0);
  const EigenSystem eig = lowest_eigenpairs(h.H, 2);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double e0 = eig.eigenvalues[0], ratio = eig.eigenvalues[1] / e0;
  std::string note = "E0/pi^2=" + fmt(e0 / pi2) + " E1/E0=" + fmt(ratio);
  const bool ok = eigen_ok(h.H, eig, note);
  return {ok && std::abs(e0 / pi2 - 1.0) <= 0.02 && std::abs(ratio - 2.5) <= 0.05, note};
}

Outcome semiclassical() {
  const Objective f = levy2();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*f.hessian_at_min);
  std::vector<double> omega;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) omega.push_back(std::sqrt(es.eigenvalues()[i]));
  const double pred = semiclassical_ratio(omega);

  const Mesh mesh = Mesh::dirichlet(2, 128);
  const SpectralHamiltonian h = build_hamiltonian(mesh, f, 2e-3, 2e3);
  const EigenSystem eig = lowest_eigenpairs(h.H, 2);
  const double ratio = energy_ratio(eig);
  std::string note = "semiclassical=" + fmt(pred) + " full E1/E0=" + fmt(ratio);
  const bool ok = eigen_ok(h.H, eig, note);
  return {ok && std::abs(pred - 1.3819) <= 1e-3 && ratio >= 1.30 && ratio <= 1.45, note};
}

struct LevyRun {
  double qhd_success = 0, qaa_success = 0;
  std::vector<WaveFunction> snapshots;
  std::vector<double> snapshot_times;
};

LevyRun levy_run() {
  const Objective f = levy2();
  const Mesh mesh = Mesh::periodic(2, 128);
  EvolveOptions o;
  o.snapshot_times = {0.5, 10.0};
  o.record_every = 100;
  const Schedule s = nesterov_nonconvex(1e-3);
  const Trajectory q = qhd_evolve(mesh, f, s, 10.0, 1e-3, uniform_state(mesh), o);
  LevyRun run;
  run.qhd_success = q.series("success_prob").back();
  run.snapshots = q.snapshots;
  run.snapshot_times = q.snapshot_times;

  EvolveOptions oq;
  oq.target = f.minimizer;
  oq.record_every = 100;
  const Trajectory a = qaa_evolve(radix2_problem(f, 6), linear_qaa(10.0), 10.0, 1e-3, oq);
  run.qaa_success = a.series("success_prob").back();
  return run;
}

Outcome qhd_vs_qaa(const LevyRun& run) {
  return {run.qhd_success > run.qaa_success && run.qhd_success > 0.5,
          "qhd=" + fmt(run.qhd_success) + " qaa=" + fmt(run.qaa_success)};
}

Outcome three_phase(const LevyRun& run) {
  const Objective f = levy2();
  const Schedule s = nesterov_nonconvex(1e-3);
  const Mesh mesh = Mesh::dirichlet(2, 128);
  const DiagonalOperator fd = discretize_objective(mesh, f);
  std::vector<double> above;
  std::string note, checks;
  bool ok = true;
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const double t = run.snapshot_times[i];
    const SpectralHamiltonian h = build_hamiltonian(mesh, fd, s.e_phi(t), s.e_chi(t));
    const EigenSystem eig = eigenstates(h, 8);
    std::string c;
    ok = eigen_ok(h.H, lowest_eigenpairs(h.H, 8), c) && ok;
    checks += " t=" + fmt(t) + c;
    const ProbabilitySpectrum ps = probability_spectrum(periodic_to_dirichlet(run.snapshots[i]), eig);
    above.push_back(ps.mass_above(3));
    note += " t=" + fmt(t) + ":" + fmt(above.back());
  }
  return {ok && above.size() == 2 && above[0] > above[1], "mass above n=3" + note + " |" + checks};
}

Outcome lyapunov() {
  const Objective f = make_objective("sum_of_squares", 2);
  const Schedule s = nesterov_three_param(1e-3, 100.0);
  const Mesh mesh = Mesh::periodic(2, 128);
  const DiagonalOperator fd = discretize_objective(mesh, f);
  Vector c(2);
  c << 0.35, 0.6;
  WaveFunction psi = gaussian_state(mesh, c, 0.005);
  const double dt = 1e-3;
  const int chunk = 10;
  double t = 1.0;
  const double w0 = lyapunov_W(psi, s, t, fd, *f.minimizer);
  double prev = w0, worst = -INFINITY;
  for (int k = 0; k < 900; ++k) {
    EvolveOptions o;
    o.t0 = t;
    o.record_every = chunk;
    const double t1 = 1.0 + (k + 1) * chunk * dt;
    const Trajectory tr = qhd_evolve(mesh, fd, s, t1, dt, psi, o);
    psi = tr.final_state();
    t = t1;
    const double w = lyapunov_W(psi, s, t, fd, *f.minimizer);
    worst = std::max(worst, w - prev);
    prev = w;
  }
  return {worst <= 1e-3 * std::abs(w0), "W0=" + fmt(w0) + " max increase=" + fmt(worst) + " W(10)=" + fmt(prev)};
}

Outcome dilation() {
  const Objective f = levy2();
  const Mesh mesh = Mesh::periodic(2, 64);
  const Schedule s = nesterov_nonconvex(1e-3);
  const Schedule sd = dilate_schedule(s, [](double t) { return 2.0 * t; }, [](double) { return 2.0; }, 0.0, 5.0);
  EvolveOptions o;
  o.record_every = 1000;
  const Trajectory a = qhd_evolve(mesh, f, s, 10.0, 1e-3, uniform_state(mesh), o);
  const Trajectory b = qhd_evolve(mesh, f, sd, 5.0, 5e-4, uniform_state(mesh), o);
  const double diff = (a.final_state().density() - b.final_state().density()).cwiseAbs().maxCoeff();
  return {diff <= 1e-6, "sup|rho-rho~|=" + fmt(diff)};
}

double binom(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

Outcome encoding_exactness() {
  double leak = 0, mis = 0, sx = 0, coef = 0;
  int cases = 0;
  for (int d = 1; d <= 10; ++d)
    for (int r = 1; d * r <= 10; ++r) {
      const int n = d * r;
      const Eigen::MatrixXd V = hamming_isometry(r, d);
      const Eigen::MatrixXd X = dense_pauli_sum(n, 'x');
      const double r32 = std::pow(static_cast<double>(r), 1.5);
      const Eigen::MatrixXd kin = -(static_cast<double>(r) * r / 2.0) * Eigen::MatrixXd(relaxed_adjacency(r, d));
      const Mesh grid = Mesh::dirichlet(d, r);
      for (int k = 0; k < 20; ++k) {
        const QpInstance qp = generate_qp(d, d, 1000 * n + 17 * r + k);
        const IsingModel m = hamming_encode_qp(qp, r);
        Eigen::MatrixXd H = -(r32 / 2.0) * X;
        H.diagonal() += ising_diagonal(m);
        Eigen::MatrixXd target = kin;
        for (std::size_t i = 0; i < grid.size(); ++i) target(i, i) += qp_value(qp, grid.point(i));
        const EncodingReport rep = verify_subspace_encoding(H, V, target, 1e-12);
        leak = std::max(leak, rep.leakage);
        mis = std::max(mis, rep.mismatch);
        ++cases;
      }
    }
  for (int n = 1; n <= 10; ++n) {
    const Eigen::MatrixXd X = dense_pauli_sum(n, 'x');
    const Vector plus = Vector::Constant(Eigen::Index{1} << n, std::pow(2.0, -0.5 * n));
    for (int j = 0; j <= n; ++j) {
      const Vector hj = hamming_state(n, j);
      coef = std::max(coef, std::abs(hj.dot(plus) - std::sqrt(binom(n, j) / std::ldexp(1.0, n))));
      for (int k = 0; k <= n; ++k) {
        const double expect = k == j + 1 ? std::sqrt((j + 1.0) * (n - j)) : k == j - 1 ? std::sqrt(double(j) * (n - j + 1)) : 0.0;
        sx = std::max(sx, std::abs(hamming_state(n, k).dot(X * hj) - expect));
      }
    }
  }
  const bool ok = leak <= 1e-12 && mis <= 1e-12 && sx <= 1e-12 && coef <= 1e-14;
  return {ok, std::to_string(cases) + " instances leakage=" + fmt(leak) + " mismatch=" + fmt(mis) + " Sx=" + fmt(sx) +
                  " coeff=" + fmt(coef)};
}

Outcome analog_equivalence() {
  double worst = 0;
  const Schedule s = nesterov_nonconvex(1e-3);
  const double T = 2.0, dt = 1e-3;
  for (auto [d, r] : {std::pair{1, 4}, std::pair{2, 3}}) {
    for (int k = 0; k < 5; ++k) {
      const QpInstance qp = generate_qp(d, d, 4242 + 10 * d + k);
      const Trajectory rel = relaxed_qhd_evolve(qp, r, s, T, dt, EvolveOptions{0.0, {}, std::nullopt, 0.1, 1000});
      const Vector rho = rel.final_amplitudes.cwiseAbs2();
      const AnnealEnvelope env = anneal_rescale(s, r, MachineSpec{});
      DenseIsingOptions o;
      o.block_size = r;
      const DenseIsingResult dense = simulate_ising_dense(hamming_encode_qp(qp, r), env, T / env.lambda, dt / env.lambda, o);
      const Mesh grid = Mesh::dirichlet(d, r);
      for (int axis = 0; axis < d; ++axis) {
        Vector marg = Vector::Zero(r + 1);
        for (std::size_t i = 0; i < grid.size(); ++i) marg[grid.multi_index(i)[axis]] += rho[i];
        worst = std::max(worst, (marg - dense.marginals[axis]).cwiseAbs().maxCoeff());
      }
    }
  }
  return {worst <= 1e-6, "max marginal gap=" + fmt(worst)};
}

Outcome tcount_golden() {
  const bool exact = tcount(50, 5, 1000, 3) == 549'000'000ULL && tcount(75, 5, 1000, 3) == 823'500'000ULL;
  struct Cell {
    int d, q;
    double printed;
  };
  const Cell table[] = {{50, 3, 5.49e8},    {50, 16, 7.8386e9}, {50, 32, 2.672e10}, {60, 3, 6.588e8},  {60, 16, 9.4063e9},
                        {60, 32, 3.2064e10}, {75, 3, 8.235e8},   {75, 16, 1.1758e10}, {75, 32, 4.008e10}};
  int mismatches = 0;
  std::string note;
  for (const auto& c : table) {
    const double v = static_cast<double>(tcount(c.d, 5, 1000, c.q));
    if (std::abs(v - c.printed) > 5e-5 * c.printed) {
      ++mismatches;
      note += " d=" + std::to_string(c.d) + ",q=" + std::to_string(c.q) + ":" + fmt(v) + " vs " + fmt(c.printed);
    }
  }
  return {exact, "table cells differing beyond print precision: " + std::to_string(mismatches) + note};
}

Outcome tts_metric() {
  const Tts a = tts(1.0, 0.5), b = tts(3.7e-4, 0.99);
  return {!a.infinite && a.seconds == 7.0 && !b.infinite && b.seconds == 3.7e-4,
          "tts(1,0.5)=" + fmt(a.seconds) + " tts(t,0.99)/t=" + fmt(b.seconds / 3.7e-4)};
}

Outcome mini_benchmark() {
  const std::string cfg_text = R"({
    "instances": {"generate": {"dim": 5, "sparsity": 5, "count": 10, "seed": 2024}},
    "truth_resolution": 8, "truth_starts": 32, "trials": 1000, "seed": 7,
    "solvers": [
      {"name": "relaxed-qhd", "resolution": 4, "schedule": "nesterov_nonconvex:s=0.001", "T": 10, "dt": 0.001, "refine": true},
      {"name": "uniform-random", "resolution": 4, "refine": true}
    ]})";
  const ExperimentConfig cfg = parse_experiment_config(cfg_text);
  const ExperimentResult res = run_experiment(cfg);
  double qhd = 0, uni = 0;
  int n = 0;
  for (const auto& r : res.reports) {
    if (!r.error.empty()) return {false, r.instance + "/" + r.solver + " failed: " + r.error};
    if (r.solver == "relaxed-qhd") {
      qhd += r.p_s;
      ++n;
    } else {
      uni += r.p_s;
    }
  }
  qhd /= n;
  uni /= n;
  return {qhd >= uni, "mean p_s relaxed-qhd=" + fmt(qhd) + " uniform-random=" + fmt(uni)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QHD_CLI + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("qhd_determinism_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<std::string> cmds = {
      "simulate-qhd --resolution 32 --T 1 --dt 0.001 --snapshots 0.5 --seed 11 --out {}/qhd",
      "simulate-qaa --resolution 16 --T 2 --dt 0.01 --seed 11 --out {}/qaa",
      "classical --algo sgd --runs 50 --iters 500 --seed 11 --out {}/sgd",
      "classical --algo nagd --runs 50 --iters 500 --seed 11 --out {}/nagd",
      "spectrum --resolution 32 --times 0.5,1 --levels 4 --out {}/spec",
      "qp-gen --dim 2 --sparsity 2 --count 2 --seed 11 --out {}/inst",
      "encode --qp {}/inst/instance_000.json --resolution 4 --out {}/model.txt",
      "anneal-sim --model {}/model.txt --bits 4 --tf 1e-8 --dt 1e-11 --shots 500 --seed 11 --out {}/samples.csv",
      "bench --config {}/bench.json --out {}/bench",
  };
  const std::string bench = R"({"instances": {"files": ["inst/instance_000.json", "inst/instance_001.json"]},
    "truth_resolution": 6, "trials": 200, "seed": 11,
    "solvers": ["exact-oracle", "uniform-random", {"name": "relaxed-qhd", "T": 2, "dt": 0.001}, {"name": "sgd", "iters": 200}]})";
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    write_text_file(dir / "bench.json", bench);
    for (std::string c : cmds) {
      for (auto p = c.find("{}"); p != std::string::npos; p = c.find("{}")) c.replace(p, 2, dir.string());
      if (run_cli(c) != 0) return {false, "command failed: " + c};
    }
  }
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    const fs::path other = root / "b" / fs::relative(e.path(), root / "a");
    if (!fs::exists(other) || read_text_file(e.path()) != read_text_file(other))
      return {false, "differs: " + fs::relative(e.path(), root / "a").string()};
    ++files;
  }
  fs::remove_all(root);
  return {files >= 8, std::to_string(files) + " csv files byte-identical"};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "quadratic convergence rate", quadratic_rate);
  report(2, "kinetic-limit spectrum", kinetic_limit);
  report(3, "semiclassical ratio", semiclassical);
  LevyRun levy;
  report(4, "QHD beats QAA on Levy", [&]() {
    levy = levy_run();
    return qhd_vs_qaa(levy);
  });
  report(5, "high-energy mass decays", [&]() { return three_phase(levy); });
  report(6, "Lyapunov monotonicity", lyapunov);
  report(7, "time dilation", dilation);
  report(8, "encoding exactness", encoding_exactness);
  report(9, "analog equivalence", analog_equivalence);
  report(10, "T-count golden numbers", tcount_golden);
  report(11, "TTS metric", tts_metric);
  report(12, "mini QP benchmark", mini_benchmark);
  report(13, "CLI determinism", determinism);
  std::printf("%d of 13 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
