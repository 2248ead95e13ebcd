#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qhd/classical.hpp"
#include "qhd/errors.hpp"

using namespace qhd;

namespace {

Objective half_square(int d) {
  Objective f;
  f.name = "half_square";
  f.dim = d;
  f.lower = -10.0;
  f.upper = 10.0;
  f.eval = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  f.grad = [](const Vector& x) { return Vector(x); };
  return f;
}

Objective flat(int d) {
  Objective f;
  f.name = "flat";
  f.dim = d;
  f.eval = [](const Vector&) { return 3.0; };
  f.grad = [](const Vector& x) { return Vector::Zero(x.size()); };
  return f;
}

}  // namespace

TEST_CASE("nagd on a quadratic meets the accelerated rate") {
  const Objective f = half_square(2);
  const Vector x0 = Vector::Constant(2, 1.0);
  const double s = 0.1;
  const IterateTrace tr = nagd_run(f, x0, s, 500, false);
  REQUIRE(tr.values.size() == 501);
  for (std::size_t k = 1; k < tr.values.size(); ++k) {
    const double bound = 2.0 * x0.squaredNorm() / (s * (k + 1.0) * (k + 1.0));
    CHECK(tr.values[k] <= bound);
  }
  CHECK(tr.times[10] == doctest::Approx(1.0));
  CHECK(tr.values.back() < 1e-8);
}

TEST_CASE("first nagd step is a gradient step") {
  const Objective f = half_square(1);
  const IterateTrace tr = nagd_run(f, Vector::Constant(1, 2.0), 0.25, 2, false);
  CHECK(tr.points[1][0] == doctest::Approx(1.5));
  // k=2: momentum 1/4, y_1 = x_1, x_2 = 0.75 * 1.5
  CHECK(tr.points[2][0] == doctest::Approx(1.125));
}

TEST_CASE("zero gradient leaves iterates fixed") {
  const Vector x0 = Vector::Constant(3, 0.4);
  for (const auto& p : nagd_run(flat(3), x0, 0.01, 50).points) CHECK((p - x0).norm() == 0.0);
  for (const auto& p : sgd_run(flat(3), x0, 0.01, 50, 0.0, 1).points) CHECK((p - x0).norm() == 0.0);
}

TEST_CASE("noiseless sgd is gradient descent") {
  const Objective f = half_square(2);
  const IterateTrace tr = sgd_run(f, Vector::Constant(2, 1.0), 0.1, 20, 0.0, 99, false);
  for (std::size_t k = 0; k < tr.points.size(); ++k)
    CHECK(tr.points[k][0] == doctest::Approx(std::pow(0.9, static_cast<double>(k))));
}

TEST_CASE("projection keeps iterates in the unit box") {
  const Objective f = half_square(2);
  const IterateTrace tr = sgd_run(f, Vector::Constant(2, 0.5), 0.1, 200, 5.0, 3);
  for (const auto& p : tr.points) {
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.maxCoeff() <= 1.0);
  }
}

TEST_CASE("seeded runs reproduce") {
  const Objective f = levy2();
  const Vector x0 = Vector::Constant(2, 0.2);
  const auto a = sgd_run(f, x0, 1e-3, 100, 1.0, 42), b = sgd_run(f, x0, 1e-3, 100, 1.0, 42),
             c = sgd_run(f, x0, 1e-3, 100, 1.0, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);

  EnsembleConfig cfg;
  cfg.iters = 50;
  cfg.runs = 20;
  cfg.seed = 5;
  cfg.algo = ClassicalAlgo::sgd;
  const auto r1 = run_ensemble(f, cfg), r2 = run_ensemble(f, cfg);
  for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r1[i].values == r2[i].values);
}

TEST_CASE("ensemble statistics") {
  SUBCASE("trivial traces") {
    IterateTrace at, away;
    for (int k = 0; k < 3; ++k) {
      at.points.push_back(Vector::Zero(1));
      away.points.push_back(Vector::Constant(1, 1.0));
      at.times.push_back(k);
      away.times.push_back(k);
      at.values.push_back(0.0);
      away.values.push_back(2.0);
    }
    const EnsembleCurve c = ensemble_stats({at, away}, Vector::Zero(1), 0.5);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(c.success_frac[k] == 0.5);
      CHECK(c.mean_loss[k] == 1.0);
    }
    CHECK_THROWS_AS(ensemble_stats({}, Vector::Zero(1), 0.5), InvalidArgument);
  }
  SUBCASE("streaming and stored paths agree") {
    const Objective f = levy2();
    EnsembleConfig cfg;
    cfg.iters = 100;
    cfg.runs = 30;
    cfg.seed = 11;
    const EnsembleCurve a = ensemble_stats(run_ensemble(f, cfg), *f.minimizer, 0.1);
    const EnsembleCurve b = run_ensemble_stats(f, cfg, *f.minimizer, 0.1);
    CHECK(a.success_frac == b.success_frac);
    for (std::size_t k = 0; k < a.mean_loss.size(); ++k) CHECK(a.mean_loss[k] == doctest::Approx(b.mean_loss[k]));
  }
}

TEST_CASE("argument validation") {
  const Objective f = half_square(2);
  CHECK_THROWS_AS(nagd_run(f, Vector::Zero(2), 0.0, 10), InvalidArgument);
  CHECK_THROWS_AS(nagd_run(f, Vector::Zero(3), 0.1, 10), InvalidArgument);
  CHECK_THROWS_AS(sgd_run(f, Vector::Zero(2), 0.1, 10, -1.0, 0), InvalidArgument);
  Objective bad = f;
  bad.grad = [](const Vector& x) { return Vector::Constant(x.size(), NAN); };
  CHECK_THROWS_AS(nagd_run(bad, Vector::Zero(2), 0.1, 10), EvaluationError);
}
