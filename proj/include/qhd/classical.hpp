#pragma once

#include <cstdint>
#include <vector>

#include "qhd/objectives.hpp"

namespace qhd {

struct IterateTrace {
  std::vector<Vector> points;
  std::vector<double> times;   // t_k = k s
  std::vector<double> values;  // f(x_k)
};

// x_k = P(y_{k-1} - s grad f(y_{k-1})), y_k = x_k + (k-1)/(k+2) (x_k - x_{k-1}), y_0 = x_0.
IterateTrace nagd_run(const Objective& f, const Vector& x0, double s, int steps, bool projection = true);

// x_{k+1} = P(x_k - s (grad f(x_k) + noise)), noise ~ N(0, sigma^2) per component.
IterateTrace sgd_run(const Objective& f, const Vector& x0, double s, int steps, double noise_sigma,
                     std::uint64_t seed, bool projection = true);

struct EnsembleCurve {
  std::vector<double> times;
  std::vector<double> success_frac;
  std::vector<double> mean_loss;
};

EnsembleCurve ensemble_stats(const std::vector<IterateTrace>& traces, const Vector& x_star, double radius);

enum class ClassicalAlgo { nagd, sgd };

struct EnsembleConfig {
  ClassicalAlgo algo = ClassicalAlgo::nagd;
  double step = 1e-3;
  int iters = 10000;
  int runs = 1000;
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
  bool projection = true;
};

// Runs from uniformly random starting points in the box; run i draws its
// start and noise from seed + i.
std::vector<IterateTrace> run_ensemble(const Objective& f, const EnsembleConfig& cfg);
// Same runs, accumulated on the fly without keeping the traces.
EnsembleCurve run_ensemble_stats(const Objective& f, const EnsembleConfig& cfg, const Vector& x_star,
                                 double radius);

}  // namespace qhd
