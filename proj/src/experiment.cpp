#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include <json.hpp>

#include "qhd/bench.hpp"
#include "qhd/classical.hpp"
#include "qhd/errors.hpp"
#include "qhd/io.hpp"
#include "qhd/ising.hpp"
#include "qhd/schedule.hpp"

namespace qhd {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

GridMin ground_truth(const QpInstance& qp, int r, int starts) {
  const Mesh mesh = Mesh::dirichlet(qp.dim, r);
  std::vector<std::pair<double, std::size_t>> vals;
  vals.reserve(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) vals.emplace_back(qp_value(qp, mesh.point(i)), i);
  const std::size_t k = std::min<std::size_t>(std::max(1, starts), vals.size());
  std::partial_sort(vals.begin(), vals.begin() + static_cast<long>(k), vals.end());
  GridMin best{mesh.point(vals.front().second), vals.front().first};
  for (std::size_t s = 0; s < k; ++s) {
    Vector x = local_refine(qp, mesh.point(vals[s].second));
    const double v = qp_value(qp, x);
    if (v < best.f) best = {std::move(x), v};
  }
  return best;
}

struct TrialOutcome {
  double raw = 0.0;
  double refined = 0.0;
};

// Counts successes for a list of candidate points, refining each distinct one once.
void score(const QpInstance& qp, const std::vector<Vector>& pts, bool refine, double f_star, TtsReport& rep) {
  std::map<std::vector<double>, TrialOutcome> cache;
  int ok_raw = 0, ok = 0;
  for (const auto& x : pts) {
    std::vector<double> key(x.data(), x.data() + x.size());
    auto it = cache.find(key);
    if (it == cache.end()) {
      TrialOutcome o;
      o.raw = qp_value(qp, x);
      o.refined = refine ? std::min(o.raw, qp_value(qp, local_refine(qp, x))) : o.raw;
      it = cache.emplace(std::move(key), o).first;
    }
    ok_raw += success(it->second.raw, f_star);
    ok += success(it->second.refined, f_star);
  }
  rep.trials = static_cast<int>(pts.size());
  rep.p_s_raw = static_cast<double>(ok_raw) / rep.trials;
  rep.p_s = static_cast<double>(ok) / rep.trials;
}

TtsReport run_solver(const QpInstance& qp, const SolverConfig& sc, int trials, std::uint64_t seed,
                     const std::string& inst, double f_star, const Vector& x_star) {
  TtsReport rep;
  rep.instance = inst;
  rep.solver = sc.name;
  rep.t_f = sc.tf_seconds;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::vector<Vector> pts;
  if (sc.name == "exact-oracle") {
    pts.assign(static_cast<std::size_t>(trials), x_star);
  } else if (sc.name == "uniform-random") {
    const Mesh mesh = Mesh::dirichlet(qp.dim, sc.resolution);
    for (int t = 0; t < trials; ++t) pts.push_back(mesh.point(static_cast<std::size_t>(rng() % mesh.size())));
  } else if (sc.name == "relaxed-qhd") {
    Trajectory tr = relaxed_qhd_evolve(qp, sc.resolution, parse_schedule(sc.schedule), sc.T, sc.dt,
                                       EvolveOptions{0.0, {}, std::nullopt, 0.1, 1000});
    pts = sample_positions(tr.final_state(), trials, rng());
  } else if (sc.name == "nagd" || sc.name == "sgd") {
    const Objective f = qp_objective(qp);
    for (int t = 0; t < trials; ++t) {
      Vector x0(qp.dim);
      for (Eigen::Index k = 0; k < x0.size(); ++k) x0[k] = uniform01(rng);
      IterateTrace tr = sc.name == "nagd" ? nagd_run(f, x0, sc.step, sc.iters)
                                          : sgd_run(f, x0, sc.step, sc.iters, sc.noise, rng());
      pts.push_back(tr.points.back());
    }
  } else {
    throw InvalidArgument("unknown solver: " + sc.name);
  }
  score(qp, pts, sc.refine, f_star, rep);
  rep.tts = tts(rep.t_f, rep.p_s);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  ExperimentConfig c;
  if (j.contains("instances")) {
    const auto& ins = j["instances"];
    if (ins.contains("files"))
      for (const auto& f : ins["files"]) c.instance_files.emplace_back(f.get<std::string>());
    if (ins.contains("generate")) {
      const auto& g = ins["generate"];
      c.gen_dim = g.value("dim", c.gen_dim);
      c.gen_sparsity = g.value("sparsity", c.gen_sparsity);
      c.gen_count = g.value("count", c.gen_count);
      c.gen_seed = g.value("seed", c.gen_seed);
      c.gen_options.count_diagonal = g.value("count_diagonal", c.gen_options.count_diagonal);
      c.gen_options.dense_b = g.value("dense_b", c.gen_options.dense_b);
    }
  }
  c.truth_resolution = j.value("truth_resolution", c.truth_resolution);
  c.truth_starts = j.value("truth_starts", c.truth_starts);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.threads = j.value("threads", c.threads);
  if (c.trials < 1) throw InvalidArgument("trial count must be at least 1");
  if (!j.contains("solvers")) throw InvalidArgument("config needs a solvers list");
  for (const auto& s : j["solvers"]) {
    SolverConfig sc;
    if (s.is_string()) {
      sc.name = s.get<std::string>();
    } else {
      sc.name = s.at("name").get<std::string>();
      sc.resolution = s.value("resolution", sc.resolution);
      sc.schedule = s.value("schedule", sc.schedule);
      sc.T = s.value("T", sc.T);
      sc.dt = s.value("dt", sc.dt);
      sc.tf_seconds = s.value("tf_seconds", sc.tf_seconds);
      sc.iters = s.value("iters", sc.iters);
      sc.step = s.value("step", sc.step);
      sc.noise = s.value("noise", sc.noise);
      sc.refine = s.value("refine", sc.refine);
    }
    c.solvers.push_back(sc);
  }
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw InvalidArgument("trial count must be at least 1");
  std::vector<QpInstance> instances;
  ExperimentResult res;
  if (!config.instance_files.empty()) {
    for (const auto& p : config.instance_files) {
      instances.push_back(qp_from_json(read_text_file(p)));
      res.instance_names.push_back(p.stem().string());
    }
  } else {
    for (int i = 0; i < config.gen_count; ++i) {
      instances.push_back(generate_qp(config.gen_dim, config.gen_sparsity, config.gen_seed + static_cast<std::uint64_t>(i),
                                      config.gen_options));
      char name[32];
      std::snprintf(name, sizeof(name), "instance_%03d", i);
      res.instance_names.emplace_back(name);
    }
  }
  const std::size_t n_inst = instances.size();
  const std::size_t n_solv = config.solvers.size();
  res.f_star.assign(n_inst, 0.0);
  res.reports.assign(n_inst * n_solv, TtsReport{});

  auto work = [&](std::size_t i) {
    const std::uint64_t inst_seed = splitmix(config.seed ^ splitmix(i + 1));
    double f_star = 0.0;
    Vector x_star;
    std::string err;
    try {
      const GridMin gm = grid_bruteforce_min(instances[i], config.truth_resolution);
      const GridMin best = ground_truth(instances[i], config.truth_resolution, config.truth_starts);
      f_star = std::min(gm.f, best.f);
      x_star = best.f <= gm.f ? best.x : gm.x;
    } catch (const std::exception& e) {
      err = e.what();
    }
    res.f_star[i] = f_star;
    for (std::size_t s = 0; s < n_solv; ++s) {
      TtsReport& rep = res.reports[i * n_solv + s];
      if (!err.empty()) {
        rep.instance = res.instance_names[i];
        rep.solver = config.solvers[s].name;
        rep.error = err;
        continue;
      }
      try {
        rep = run_solver(instances[i], config.solvers[s], config.trials, splitmix(inst_seed + s), res.instance_names[i],
                         f_star, x_star);
      } catch (const std::exception& e) {
        rep.instance = res.instance_names[i];
        rep.solver = config.solvers[s].name;
        rep.t_f = config.solvers[s].tf_seconds;
        rep.error = e.what();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(config.threads, static_cast<int>(n_inst)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n_inst; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (std::size_t i = next++; i < n_inst; i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& r : res.reports)
    if (!r.error.empty()) res.any_failed = true;
  return res;
}

void write_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                      const std::filesystem::path& out_dir, const std::string& config_echo) {
  CsvWriter csv({"instance", "solver", "tf_seconds", "ps", "tts_seconds"});
  for (const auto& r : result.reports) {
    if (!r.error.empty()) {
      csv.row({r.instance, r.solver, format_double(r.t_f), "nan", "nan"});
      continue;
    }
    csv.row({r.instance, r.solver, format_double(r.t_f), format_double(r.p_s),
             r.tts.infinite ? "inf" : format_double(r.tts.seconds)});
  }
  write_text_file(out_dir / "tts_summary.csv", csv.text());

  nlohmann::json meta;
  meta["master_seed"] = config.seed;
  meta["trials"] = config.trials;
  meta["truth_resolution"] = config.truth_resolution;
  meta["versions"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"cxx", __cplusplus}};
  try {
    meta["config"] = nlohmann::json::parse(config_echo);
  } catch (const nlohmann::json::exception&) {
    meta["config"] = config_echo;
  }
  auto runs = nlohmann::json::array();
  for (std::size_t k = 0; k < result.reports.size(); ++k) {
    const auto& r = result.reports[k];
    nlohmann::json e = {{"instance", r.instance}, {"solver", r.solver},   {"ps", r.p_s},
                        {"ps_raw", r.p_s_raw},    {"trials", r.trials},   {"wall_seconds", r.wall_seconds}};
    if (!r.error.empty()) e["error"] = r.error;
    runs.push_back(e);
  }
  meta["runs"] = runs;
  auto fs = nlohmann::json::array();
  for (std::size_t i = 0; i < result.f_star.size(); ++i)
    fs.push_back({{"instance", result.instance_names[i]}, {"f_star", result.f_star[i]}});
  meta["ground_truth"] = fs;
  write_text_file(out_dir / "run_meta.json", meta.dump(2) + "\n");
}

}  // namespace qhd
