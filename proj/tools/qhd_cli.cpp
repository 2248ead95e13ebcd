#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>

#include <CLI11.hpp>

#include "qhd/bench.hpp"
#include "qhd/classical.hpp"
#include "qhd/dynamics.hpp"
#include "qhd/errors.hpp"
#include "qhd/io.hpp"
#include "qhd/ising.hpp"
#include "qhd/spectral.hpp"

namespace fs = std::filesystem;
using namespace qhd;

namespace {

struct SimArgs {
  std::string objective = "levy";
  int dim = 2;
  int resolution = 128;
  std::string schedule;
  double T = 10.0;
  double dt = 1e-3;
  double t0 = 0.0;
  std::vector<double> snapshots;
  std::uint64_t seed = 0;
  double radius = 0.1;
  int record_every = 1;
  std::string out = ".";
};

void add_sim_options(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--objective", a.objective, "registered objective name")->capture_default_str();
  cmd->add_option("--dim", a.dim, "objective dimension")->capture_default_str();
  cmd->add_option("--resolution", a.resolution, "grid points per axis")->capture_default_str();
  cmd->add_option("--schedule", a.schedule, "schedule spec, e.g. nesterov_nonconvex:s=0.001");
  cmd->add_option("--T", a.T, "final time")->capture_default_str();
  cmd->add_option("--dt", a.dt, "time step")->capture_default_str();
  cmd->add_option("--t0", a.t0, "start time")->capture_default_str();
  cmd->add_option("--snapshots", a.snapshots, "comma separated snapshot times")->delimiter(',');
  cmd->add_option("--seed", a.seed, "master seed")->capture_default_str();
  cmd->add_option("--radius", a.radius, "success radius")->capture_default_str();
  cmd->add_option("--record-every", a.record_every, "observable stride in steps")->capture_default_str();
  cmd->add_option("--out", a.out, "output directory")->capture_default_str();
}

void write_trajectory(const Trajectory& tr, const fs::path& out) {
  CsvWriter csv({"t", "Ef", "success_prob", "norm"});
  const auto& ef = tr.series("Ef");
  const auto& nm = tr.series("norm");
  const auto sp = tr.observables.count("success_prob") ? tr.series("success_prob") : std::vector<double>(ef.size(), NAN);
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    csv.row({format_double(tr.times[i]), format_double(ef[i]), format_double(sp[i]), format_double(nm[i])});
  write_text_file(out / "observables.csv", csv.text());
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i)
    write_text_file(out / ("snapshot_" + format_double(tr.snapshot_times[i]) + ".json"),
                    density_to_json(tr.snapshots[i], tr.snapshot_times[i]));
}

bool on_off(const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw InvalidArgument("expected on or off, got " + v);
}

int bits_for(int resolution) {
  int q = 0;
  while ((1 << q) < resolution) ++q;
  if ((1 << q) != resolution) throw InvalidArgument("qaa resolution must be a power of two");
  return q;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Hamiltonian Descent toolkit"};
  app.require_subcommand(1);

  SimArgs qhd_args;
  auto* sim_qhd = app.add_subcommand("simulate-qhd", "pseudo-spectral QHD on a periodic grid");
  add_sim_options(sim_qhd, qhd_args);

  SimArgs qaa_args;
  qaa_args.resolution = 64;
  auto* sim_qaa = app.add_subcommand("simulate-qaa", "adiabatic baseline over a radix-2 encoding");
  add_sim_options(sim_qaa, qaa_args);

  struct {
    std::string algo = "nagd", objective = "levy", projection = "on", out = ".";
    int dim = 2, iters = 10000, runs = 1000;
    double step = 1e-3, noise = 1.0, radius = 0.1;
    std::uint64_t seed = 0;
  } ca;
  auto* classical = app.add_subcommand("classical", "NAGD or SGD ensembles");
  classical->add_option("--algo", ca.algo, "nagd or sgd")->check(CLI::IsMember({"nagd", "sgd"}))->capture_default_str();
  classical->add_option("--objective", ca.objective)->capture_default_str();
  classical->add_option("--dim", ca.dim)->capture_default_str();
  classical->add_option("--step", ca.step)->capture_default_str();
  classical->add_option("--iters", ca.iters)->capture_default_str();
  classical->add_option("--runs", ca.runs)->capture_default_str();
  classical->add_option("--noise", ca.noise, "sgd gradient noise sigma")->capture_default_str();
  classical->add_option("--radius", ca.radius)->capture_default_str();
  classical->add_option("--seed", ca.seed)->capture_default_str();
  classical->add_option("--projection", ca.projection, "on or off")->capture_default_str();
  classical->add_option("--out", ca.out)->capture_default_str();

  struct {
    std::string objective = "levy", schedule = "nesterov_nonconvex:s=0.001", out = ".";
    int dim = 2, resolution = 128, levels = 12;
    double dt = 1e-3;
    std::vector<double> times{0.5, 1.0, 10.0};
  } sa;
  auto* spectrum = app.add_subcommand("spectrum", "probability spectrum and energy ratios along a QHD run");
  spectrum->add_option("--objective", sa.objective)->capture_default_str();
  spectrum->add_option("--dim", sa.dim)->capture_default_str();
  spectrum->add_option("--resolution", sa.resolution)->capture_default_str();
  spectrum->add_option("--schedule", sa.schedule)->capture_default_str();
  spectrum->add_option("--times", sa.times)->delimiter(',');
  spectrum->add_option("--levels", sa.levels)->capture_default_str();
  spectrum->add_option("--dt", sa.dt)->capture_default_str();
  spectrum->add_option("--out", sa.out)->capture_default_str();

  struct {
    std::string qp, encoding = "hamming", format = "ising", out = "model.txt";
    int resolution = 8;
  } ea;
  auto* encode = app.add_subcommand("encode", "QP to Ising or QUBO coefficients");
  encode->add_option("--qp", ea.qp, "instance json")->required();
  encode->add_option("--encoding", ea.encoding)->check(CLI::IsMember({"hamming", "radix2"}))->capture_default_str();
  encode->add_option("--resolution,--bits", ea.resolution, "qubits per variable")->capture_default_str();
  encode->add_option("--format", ea.format)->check(CLI::IsMember({"ising", "qubo"}))->capture_default_str();
  encode->add_option("--out", ea.out)->capture_default_str();

  struct {
    std::string model, encoding = "hamming", schedule = "nesterov_nonconvex:s=0.004", out = "samples.csv";
    int bits = 0, shots = 1000;
    double tf = 800e-6, dt = 0, A0 = 9.63e9;
    std::uint64_t seed = 0;
  } aa;
  auto* anneal = app.add_subcommand("anneal-sim", "dense quantum Ising machine emulation");
  anneal->add_option("--model", aa.model, "ising or qubo text file")->required();
  anneal->add_option("--encoding", aa.encoding)->check(CLI::IsMember({"hamming", "radix2"}))->capture_default_str();
  anneal->add_option("--bits", aa.bits, "qubits per variable (default: all qubits)");
  anneal->add_option("--schedule", aa.schedule, "QHD schedule to rescale")->capture_default_str();
  anneal->add_option("--A0", aa.A0, "A(0)/h")->capture_default_str();
  anneal->add_option("--tf", aa.tf, "physical duration in seconds")->capture_default_str();
  anneal->add_option("--dt", aa.dt, "physical step (default tf/1000)");
  anneal->add_option("--shots", aa.shots)->capture_default_str();
  anneal->add_option("--seed", aa.seed)->capture_default_str();
  anneal->add_option("--out", aa.out)->capture_default_str();

  struct {
    int dim = 5, sparsity = 5, count = 10;
    std::uint64_t seed = 1;
    std::string out = "instances", count_diagonal = "on", dense_b = "on";
  } ga;
  auto* qpgen = app.add_subcommand("qp-gen", "random sparse box-constrained QPs");
  qpgen->add_option("--dim", ga.dim)->capture_default_str();
  qpgen->add_option("--sparsity", ga.sparsity)->capture_default_str();
  qpgen->add_option("--count", ga.count)->capture_default_str();
  qpgen->add_option("--seed", ga.seed)->capture_default_str();
  qpgen->add_option("--count-diagonal", ga.count_diagonal, "on or off")->capture_default_str();
  qpgen->add_option("--dense-b", ga.dense_b, "on or off")->capture_default_str();
  qpgen->add_option("--out", ga.out)->capture_default_str();

  std::string bench_config, bench_out = "bench_out";
  auto* bench = app.add_subcommand("bench", "solver x instance benchmark");
  bench->add_option("--config", bench_config)->required();
  bench->add_option("--out", bench_out)->capture_default_str();

  double tts_tf = 1.0, tts_ps = 0.5;
  auto* tts_cmd = app.add_subcommand("tts", "time to solution");
  tts_cmd->add_option("--tf", tts_tf)->required();
  tts_cmd->add_option("--ps", tts_ps)->required();

  int tc_dim = 50, tc_s = 5, tc_iters = 1000, tc_q = 3;
  auto* tc_cmd = app.add_subcommand("tcount", "digital T-count estimate");
  tc_cmd->add_option("--dim", tc_dim)->required();
  tc_cmd->add_option("--sparsity", tc_s)->required();
  tc_cmd->add_option("--iters", tc_iters)->required();
  tc_cmd->add_option("--qubits", tc_q)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_qhd->parsed()) {
      const SimArgs& a = qhd_args;
      const Objective f = make_objective(a.objective, a.dim);
      const Mesh mesh = Mesh::periodic(a.dim, a.resolution);
      const Schedule s = parse_schedule(a.schedule.empty() ? "nesterov_nonconvex:s=0.001" : a.schedule);
      EvolveOptions o{a.t0, a.snapshots, f.minimizer, a.radius, a.record_every};
      Trajectory tr = qhd_evolve(mesh, f, s, a.T, a.dt, uniform_state(mesh), o);
      write_trajectory(tr, a.out);
    } else if (sim_qaa->parsed()) {
      const SimArgs& a = qaa_args;
      const Objective f = make_objective(a.objective, a.dim);
      const Radix2Problem p = radix2_problem(f, bits_for(a.resolution));
      const Schedule s = parse_schedule(a.schedule.empty() ? "linear_qaa:T=" + format_double(a.T) : a.schedule);
      EvolveOptions o{a.t0, a.snapshots, f.minimizer, a.radius, a.record_every};
      write_trajectory(qaa_evolve(p, s, a.T, a.dt, o), a.out);
    } else if (classical->parsed()) {
      const Objective f = make_objective(ca.objective, ca.dim);
      if (!f.minimizer) throw InvalidArgument("objective has no declared minimizer");
      EnsembleConfig cfg{ca.algo == "nagd" ? ClassicalAlgo::nagd : ClassicalAlgo::sgd,
                         ca.step, ca.iters, ca.runs, ca.noise, ca.seed, on_off(ca.projection)};
      const EnsembleCurve c = run_ensemble_stats(f, cfg, *f.minimizer, ca.radius);
      CsvWriter csv({"t", "success_frac", "mean_loss"});
      for (std::size_t k = 0; k < c.times.size(); ++k)
        csv.row({format_double(c.times[k]), format_double(c.success_frac[k]), format_double(c.mean_loss[k])});
      write_text_file(fs::path(ca.out) / "ensemble.csv", csv.text());
    } else if (spectrum->parsed()) {
      const Objective f = make_objective(sa.objective, sa.dim);
      const Schedule s = parse_schedule(sa.schedule);
      std::vector<double> times = sa.times;
      std::sort(times.begin(), times.end());
      const Mesh pm = Mesh::periodic(sa.dim, sa.resolution);
      EvolveOptions o{0.0, times, f.minimizer, 0.1, 1000};
      Trajectory tr = qhd_evolve(pm, f, s, times.back(), sa.dt, uniform_state(pm), o);
      const Mesh dm = Mesh::dirichlet(sa.dim, sa.resolution);
      const DiagonalOperator fd = discretize_objective(dm, f);
      CsvWriter spec({"t", "n", "prob"});
      CsvWriter ratios({"t", "E0", "E1", "ratio"});
      for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        const double t = tr.snapshot_times[i];
        const EigenSystem eig = eigenstates(build_hamiltonian(dm, fd, s.e_phi(t), s.e_chi(t)), sa.levels);
        const ProbabilitySpectrum ps = probability_spectrum(periodic_to_dirichlet(tr.snapshots[i]), eig);
        for (std::size_t n = 0; n < ps.levels.size(); ++n)
          spec.row({format_double(t), std::to_string(n), format_double(ps.levels[n])});
        spec.row({format_double(t), "rest", format_double(ps.residual)});
        ratios.row({format_double(t), format_double(eig.eigenvalues[0]), format_double(eig.eigenvalues[1]),
                    format_double(energy_ratio(eig))});
      }
      write_text_file(fs::path(sa.out) / "spectrum.csv", spec.text());
      write_text_file(fs::path(sa.out) / "ratios.csv", ratios.text());
    } else if (encode->parsed()) {
      const QpInstance qp = qp_from_json(read_text_file(ea.qp));
      std::string text;
      if (ea.encoding == "hamming" && ea.format == "ising") {
        text = ising_to_text(hamming_encode_qp(qp, ea.resolution));
      } else {
        const PrecisionLayout layout =
            ea.encoding == "hamming" ? hamming_layout(qp.dim, ea.resolution) : radix2_layout(qp.dim, ea.resolution);
        const QuboModel q = qp_to_qubo(qp, layout);
        text = ea.format == "qubo" ? qubo_to_text(q) : ising_to_text(qubo_to_ising(q));
      }
      write_text_file(ea.out, text);
    } else if (anneal->parsed()) {
      const IsingModel model = model_from_text(read_text_file(aa.model));
      const int bits = aa.bits > 0 ? aa.bits : model.n;
      if (model.n % bits != 0) throw InvalidArgument("--bits must divide the qubit count");
      const int d = model.n / bits;
      const PrecisionLayout layout = aa.encoding == "hamming" ? hamming_layout(d, bits) : radix2_layout(d, bits);
      const AnnealEnvelope env = anneal_rescale(parse_schedule(aa.schedule), bits, MachineSpec{aa.A0, aa.tf});
      const double dt = aa.dt > 0 ? aa.dt : aa.tf / 1000.0;
      const DenseIsingResult r = simulate_ising_dense(model, env, aa.tf, dt);
      const Mesh flat = Mesh::periodic(1, static_cast<int>(r.state.size()));
      const auto idx = sample_indices(WaveFunction::normalized(flat, r.state), aa.shots, aa.seed);
      std::map<std::string, int> counts;
      for (auto i : idx) ++counts[basis_to_bits(i, model.n)];
      CsvWriter csv({"bitstring", "count", "decoded_point", "energy"});
      for (const auto& [b, c] : counts) {
        const Vector x = decode_bits(b, layout);
        std::string pt;
        for (Eigen::Index k = 0; k < x.size(); ++k) pt += (k ? ";" : "") + format_double(x[k]);
        csv.row({b, std::to_string(c), pt, format_double(model.energy_of_basis(bits_to_basis(b)))});
      }
      write_text_file(aa.out, csv.text());
    } else if (qpgen->parsed()) {
      const QpGenOptions o{on_off(ga.count_diagonal), on_off(ga.dense_b)};
      for (int i = 0; i < ga.count; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "instance_%03d.json", i);
        write_text_file(fs::path(ga.out) / name,
                        qp_to_json(generate_qp(ga.dim, ga.sparsity, ga.seed + static_cast<std::uint64_t>(i), o)));
      }
    } else if (bench->parsed()) {
      const std::string text = read_text_file(bench_config);
      ExperimentConfig cfg = parse_experiment_config(text);
      const fs::path base = fs::path(bench_config).parent_path();
      for (auto& p : cfg.instance_files)
        if (p.is_relative()) p = base / p;
      const ExperimentResult res = run_experiment(cfg);
      write_experiment(cfg, res, bench_out, text);
      if (res.any_failed) {
        std::cerr << "some instances failed; see run_meta.json\n";
        return 1;
      }
    } else if (tts_cmd->parsed()) {
      const Tts t = tts(tts_tf, tts_ps);
      std::cout << (t.infinite ? std::string("inf") : format_double(t.seconds)) << "\n";
    } else if (tc_cmd->parsed()) {
      std::cout << tcount(tc_dim, tc_s, tc_iters, tc_q) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
