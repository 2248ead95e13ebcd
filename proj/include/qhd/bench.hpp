#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qhd/objectives.hpp"

namespace qhd {

struct QpGenOptions {
  bool count_diagonal = true;  // diagonal entry counts toward the per-row sparsity
  bool dense_b = true;         // otherwise b has at most s nonzeros
};

QpInstance generate_qp(int d, int s, std::uint64_t seed, const QpGenOptions& opts = {});

struct GridMin {
  Vector x;
  double f;
};

// Exhaustive search over the (r+1)^d grid; the first minimum in row-major
// order wins ties.
GridMin grid_bruteforce_min(const QpInstance& qp, int r);

// Projected gradient descent with Armijo backtracking on the unit box.
Vector local_refine(const QpInstance& qp, const Vector& x0, double tol = 1e-8, int max_iter = 10000);
double projected_gradient_norm(const QpInstance& qp, const Vector& x);

struct Tts {
  double seconds;
  bool infinite;
};

// t_f * ceil(ln 0.01 / ln(1 - p_s))
Tts tts(double t_f, double p_s);
// |f_found - f_star| <= 0.01
bool success(double f_found, double f_star);

// 2((c_add + c_mult)(s + 2) + c_aqft) d R for q in {3, 16, 32}
std::uint64_t tcount(int d, int s, int R, int q);

struct TtsReport {
  std::string instance;
  std::string solver;
  double t_f = 0.0;
  double p_s = 0.0;
  double p_s_raw = 0.0;  // before local refinement
  Tts tts{0.0, true};
  int trials = 0;
  double wall_seconds = 0.0;
  std::string error;  // non-empty when the run failed
};

struct SolverConfig {
  std::string name;            // exact-oracle, uniform-random, relaxed-qhd, nagd, sgd
  int resolution = 4;          // grid for samplers
  std::string schedule = "nesterov_nonconvex:s=0.001";
  double T = 10.0;
  double dt = 1e-3;
  double tf_seconds = 1e-6;    // declared per-trial duration
  int iters = 1000;            // classical solvers
  double step = 1e-3;
  double noise = 1.0;
  bool refine = true;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> instance_files;
  int gen_dim = 5;
  int gen_sparsity = 5;
  int gen_count = 10;
  std::uint64_t gen_seed = 1;
  QpGenOptions gen_options;
  int truth_resolution = 8;
  int truth_starts = 32;  // best grid nodes refined for the ground truth
  int trials = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<SolverConfig> solvers;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);

struct ExperimentResult {
  std::vector<std::string> instance_names;
  std::vector<double> f_star;
  std::vector<TtsReport> reports;  // instance-major, solver order as configured
  bool any_failed = false;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
// Writes tts_summary.csv and run_meta.json into `out_dir`.
void write_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                      const std::filesystem::path& out_dir, const std::string& config_echo);

}  // namespace qhd
