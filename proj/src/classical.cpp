#include "qhd/classical.hpp"

#include <cmath>
#include <random>

#include "qhd/errors.hpp"

namespace qhd {

namespace {

void project(Vector& x) { x = x.cwiseMax(0.0).cwiseMin(1.0); }

Vector checked_grad(const Objective& f, const Vector& x, int step) {
  Vector g = f.grad(x);
  if (!g.allFinite()) throw EvaluationError("non-finite gradient at step " + std::to_string(step), step);
  return g;
}

void push(IterateTrace& tr, const Objective& f, const Vector& x, int k, double s) {
  tr.points.push_back(x);
  tr.times.push_back(k * s);
  tr.values.push_back(f.eval(x));
}

}  // namespace

IterateTrace nagd_run(const Objective& f, const Vector& x0, double s, int steps, bool projection) {
  if (!(s > 0.0)) throw InvalidArgument("step size must be positive");
  if (x0.size() != f.dim) throw InvalidArgument("start point dimension mismatch");
  IterateTrace tr;
  Vector x_prev = x0, y = x0;
  push(tr, f, x0, 0, s);
  for (int k = 1; k <= steps; ++k) {
    Vector x = y - s * checked_grad(f, y, k);
    if (projection) project(x);
    const double mom = static_cast<double>(k - 1) / (k + 2);
    y = x + mom * (x - x_prev);
    x_prev = x;
    push(tr, f, x, k, s);
  }
  return tr;
}

IterateTrace sgd_run(const Objective& f, const Vector& x0, double s, int steps, double noise_sigma,
                     std::uint64_t seed, bool projection) {
  if (!(s > 0.0)) throw InvalidArgument("step size must be positive");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise level must be non-negative");
  if (x0.size() != f.dim) throw InvalidArgument("start point dimension mismatch");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  IterateTrace tr;
  Vector x = x0;
  push(tr, f, x, 0, s);
  for (int k = 1; k <= steps; ++k) {
    Vector g = checked_grad(f, x, k);
    if (noise_sigma > 0.0)
      for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += noise_sigma * normal(rng);
    x = x - s * g;
    if (projection) project(x);
    push(tr, f, x, k, s);
  }
  return tr;
}

EnsembleCurve ensemble_stats(const std::vector<IterateTrace>& traces, const Vector& x_star, double radius) {
  if (traces.empty()) throw InvalidArgument("empty ensemble");
  const std::size_t len = traces.front().points.size();
  for (const auto& t : traces)
    if (t.points.size() != len) throw InvalidArgument("traces have different lengths");
  EnsembleCurve c;
  c.times = traces.front().times;
  c.success_frac.assign(len, 0.0);
  c.mean_loss.assign(len, 0.0);
  for (const auto& t : traces) {
    for (std::size_t k = 0; k < len; ++k) {
      if (within_radius(t.points[k], x_star, radius)) c.success_frac[k] += 1.0;
      c.mean_loss[k] += t.values[k];
    }
  }
  const double n = static_cast<double>(traces.size());
  for (std::size_t k = 0; k < len; ++k) {
    c.success_frac[k] /= n;
    c.mean_loss[k] /= n;
  }
  return c;
}

static IterateTrace ensemble_member(const Objective& f, const EnsembleConfig& cfg, int i) {
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
  std::mt19937_64 rng(seed);
  Vector x0(f.dim);
  for (Eigen::Index k = 0; k < x0.size(); ++k) x0[k] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  if (cfg.algo == ClassicalAlgo::nagd) return nagd_run(f, x0, cfg.step, cfg.iters, cfg.projection);
  return sgd_run(f, x0, cfg.step, cfg.iters, cfg.noise_sigma, rng(), cfg.projection);
}

std::vector<IterateTrace> run_ensemble(const Objective& f, const EnsembleConfig& cfg) {
  if (cfg.runs < 1) throw InvalidArgument("need at least one run");
  std::vector<IterateTrace> out;
  out.reserve(cfg.runs);
  for (int i = 0; i < cfg.runs; ++i) out.push_back(ensemble_member(f, cfg, i));
  return out;
}

EnsembleCurve run_ensemble_stats(const Objective& f, const EnsembleConfig& cfg, const Vector& x_star,
                                 double radius) {
  if (cfg.runs < 1) throw InvalidArgument("need at least one run");
  EnsembleCurve total;
  for (int i = 0; i < cfg.runs; ++i) {
    EnsembleCurve one = ensemble_stats({ensemble_member(f, cfg, i)}, x_star, radius);
    if (i == 0) {
      total = std::move(one);
      continue;
    }
    for (std::size_t k = 0; k < total.times.size(); ++k) {
      total.success_frac[k] += one.success_frac[k];
      total.mean_loss[k] += one.mean_loss[k];
    }
  }
  for (std::size_t k = 0; k < total.times.size(); ++k) {
    total.success_frac[k] /= cfg.runs;
    total.mean_loss[k] /= cfg.runs;
  }
  return total;
}

}  // namespace qhd
