#include "qhd/objectives.hpp"

#include <cmath>
#include <numbers>

#include "qhd/errors.hpp"

namespace qhd {

namespace {

constexpr double pi = std::numbers::pi;

double sq(double v) { return v * v; }

}  // namespace

// Levy: w = 1 + (x - 1)/4,
// f = sin^2(pi w_1) + sum_{i<d} (w_i - 1)^2 [1 + 10 sin^2(pi w_i + 1)]
//     + (w_d - 1)^2 [1 + sin^2(2 pi w_d)]
double levy_raw(const Vector& x) {
  const Eigen::Index d = x.size();
  auto w = [&](Eigen::Index i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  double f = sq(std::sin(pi * w(0)));
  for (Eigen::Index i = 0; i + 1 < d; ++i)
    f += sq(w(i) - 1.0) * (1.0 + 10.0 * sq(std::sin(pi * w(i) + 1.0)));
  const double wd = w(d - 1);
  f += sq(wd - 1.0) * (1.0 + sq(std::sin(2.0 * pi * wd)));
  return f;
}

static Vector levy_raw_grad(const Vector& x) {
  const Eigen::Index d = x.size();
  Vector g = Vector::Zero(d);
  auto w = [&](Eigen::Index i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  g[0] += pi * std::sin(2.0 * pi * w(0));
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    const double wi = w(i);
    const double s = std::sin(pi * wi + 1.0);
    g[i] += 2.0 * (wi - 1.0) * (1.0 + 10.0 * s * s) +
            sq(wi - 1.0) * 10.0 * pi * std::sin(2.0 * (pi * wi + 1.0));
  }
  const double wd = w(d - 1);
  g[d - 1] += 2.0 * (wd - 1.0) * (1.0 + sq(std::sin(2.0 * pi * wd))) +
              sq(wd - 1.0) * 2.0 * pi * std::sin(4.0 * pi * wd);
  return g / 4.0;
}

Objective levy_raw_objective(int dim) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  Objective f;
  f.name = "levy";
  f.dim = dim;
  f.eval = levy_raw;
  f.grad = levy_raw_grad;
  f.minimizer = Vector::Ones(dim);
  f.f_min = 0.0;
  f.lower = -10.0;
  f.upper = 10.0;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  // second-order terms at w = 1, divided by 16 from dw/dx and doubled
  const double s1 = sq(std::sin(1.0));
  if (dim == 1) {
    h(0, 0) = (pi * pi + 1.0) / 8.0;
  } else {
    h(0, 0) = (pi * pi + 1.0 + 10.0 * s1) / 8.0;
    for (int i = 1; i + 1 < dim; ++i) h(i, i) = (1.0 + 10.0 * s1) / 8.0;
    h(dim - 1, dim - 1) = 1.0 / 8.0;
  }
  f.hessian_at_min = h;
  return f;
}

Objective sum_of_squares_raw(int dim) {
  Objective f;
  f.name = "sum_of_squares";
  f.dim = dim;
  f.eval = [](const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += (i + 1) * x[i] * x[i];
    return s;
  };
  f.grad = [](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = 2.0 * (i + 1) * x[i];
    return g;
  };
  f.minimizer = Vector::Zero(dim);
  f.f_min = 0.0;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) h(i, i) = 2.0 * (i + 1);
  f.hessian_at_min = h;
  f.lower = -10.0;
  f.upper = 10.0;
  return f;
}

Objective rosenbrock_raw(int dim) {
  if (dim < 2) throw InvalidArgument("rosenbrock needs dim >= 2");
  Objective f;
  f.name = "rosenbrock";
  f.dim = dim;
  f.eval = [](const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
      s += 100.0 * sq(x[i + 1] - x[i] * x[i]) + sq(1.0 - x[i]);
    return s;
  };
  f.grad = [](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double t = x[i + 1] - x[i] * x[i];
      g[i] += -400.0 * x[i] * t - 2.0 * (1.0 - x[i]);
      g[i + 1] += 200.0 * t;
    }
    return g;
  };
  f.minimizer = Vector::Ones(dim);
  f.f_min = 0.0;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) {
    h(i, i) += 802.0;
    h(i + 1, i + 1) += 200.0;
    h(i, i + 1) -= 400.0;
    h(i + 1, i) -= 400.0;
  }
  f.hessian_at_min = h;
  f.lower = -2.0;
  f.upper = 2.0;
  return f;
}

Objective rastrigin_raw(int dim) {
  Objective f;
  f.name = "rastrigin";
  f.dim = dim;
  f.eval = [](const Vector& x) {
    double s = 10.0 * x.size();
    for (Eigen::Index i = 0; i < x.size(); ++i) s += x[i] * x[i] - 10.0 * std::cos(2.0 * pi * x[i]);
    return s;
  };
  f.grad = [](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i] + 20.0 * pi * std::sin(2.0 * pi * x[i]);
    return g;
  };
  f.minimizer = Vector::Zero(dim);
  f.f_min = 0.0;
  f.hessian_at_min = Eigen::MatrixXd::Identity(dim, dim) * (2.0 + 40.0 * pi * pi);
  f.lower = -5.12;
  f.upper = 5.12;
  return f;
}

Objective ackley_raw(int dim) {
  Objective f;
  f.name = "ackley";
  f.dim = dim;
  f.eval = [](const Vector& x) {
    const double n = static_cast<double>(x.size());
    const double r = std::sqrt(x.squaredNorm() / n);
    double c = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) c += std::cos(2.0 * pi * x[i]);
    return -20.0 * std::exp(-0.2 * r) - std::exp(c / n) + 20.0 + std::numbers::e;
  };
  f.grad = [](const Vector& x) {
    const double n = static_cast<double>(x.size());
    const double r = std::sqrt(x.squaredNorm() / n);
    double c = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) c += std::cos(2.0 * pi * x[i]);
    const double ec = std::exp(c / n);
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      // the cone term has no gradient at the origin; take the zero subgradient
      const double cone = r > 0.0 ? 4.0 * std::exp(-0.2 * r) * x[i] / (n * r) : 0.0;
      g[i] = cone + ec * (2.0 * pi / n) * std::sin(2.0 * pi * x[i]);
    }
    return g;
  };
  f.minimizer = Vector::Zero(dim);
  f.f_min = 0.0;
  f.lower = -32.768;
  f.upper = 32.768;
  return f;
}

Objective griewank_raw(int dim) {
  Objective f;
  f.name = "griewank";
  f.dim = dim;
  f.eval = [](const Vector& x) {
    double s = 0.0, p = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      s += x[i] * x[i] / 4000.0;
      p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + s - p;
  };
  f.grad = [](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double p = 1.0;
      for (Eigen::Index j = 0; j < x.size(); ++j)
        if (j != i) p *= std::cos(x[j] / std::sqrt(static_cast<double>(j + 1)));
      const double si = std::sqrt(static_cast<double>(i + 1));
      g[i] = x[i] / 2000.0 + std::sin(x[i] / si) / si * p;
    }
    return g;
  };
  f.minimizer = Vector::Zero(dim);
  f.f_min = 0.0;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) h(i, i) = 1.0 / 2000.0 + 1.0 / (i + 1);
  f.hessian_at_min = h;
  f.lower = -10.0;
  f.upper = 10.0;
  return f;
}

Objective styblinski_tang_raw(int dim) {
  Objective f;
  f.name = "styblinski_tang";
  f.dim = dim;
  auto eval = [](const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double v = x[i];
      s += v * v * v * v - 16.0 * v * v + 5.0 * v;
    }
    return 0.5 * s;
  };
  f.eval = eval;
  f.grad = [](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = 0.5 * (4.0 * x[i] * x[i] * x[i] - 32.0 * x[i] + 5.0);
    return g;
  };
  // root of 4x^3 - 32x + 5 in the left well
  double z = -2.9;
  for (int it = 0; it < 50; ++it) z -= (4.0 * z * z * z - 32.0 * z + 5.0) / (12.0 * z * z - 32.0);
  f.minimizer = Vector::Constant(dim, z);
  f.f_min = eval(*f.minimizer);
  f.hessian_at_min = Eigen::MatrixXd::Identity(dim, dim) * (0.5 * (12.0 * z * z - 32.0));
  f.lower = -5.0;
  f.upper = 5.0;
  return f;
}

Objective dropwave_raw() {
  Objective f;
  f.name = "dropwave";
  f.dim = 2;
  f.eval = [](const Vector& x) {
    const double r2 = x.squaredNorm();
    return -(1.0 + std::cos(12.0 * std::sqrt(r2))) / (0.5 * r2 + 2.0);
  };
  f.grad = [](const Vector& x) {
    const double r = x.norm();
    if (r == 0.0) return Vector(Vector::Zero(2));
    const double num = 1.0 + std::cos(12.0 * r);
    const double den = 0.5 * r * r + 2.0;
    const double dnum = -12.0 * std::sin(12.0 * r);
    const double dfdr = -(dnum * den - num * r) / (den * den);
    return Vector(dfdr * x / r);
  };
  f.minimizer = Vector::Zero(2);
  f.f_min = -1.0;
  f.lower = -5.12;
  f.upper = 5.12;
  return f;
}

Objective rescale_to_unit_box(const Objective& f) {
  const double a = f.lower, b = f.upper;
  if (!(a < b)) throw InvalidArgument("rescale needs a < b");
  if (!f.f_min) throw InvalidArgument("rescale needs a known f_min");
  const double L = b - a;
  const double fmin = *f.f_min;
  Objective g;
  g.name = f.name;
  g.dim = f.dim;
  auto ev = f.eval;
  auto gr = f.grad;
  g.eval = [ev, a, L, fmin](const Vector& u) {
    const Vector x = (a + L * u.array()).matrix();
    return (ev(x) - fmin) / L;
  };
  g.grad = [gr, a, L](const Vector& u) {
    const Vector x = (a + L * u.array()).matrix();
    return gr(x);
  };
  if (f.minimizer) g.minimizer = ((f.minimizer->array() - a) / L).matrix();
  g.f_min = 0.0;
  if (f.hessian_at_min) g.hessian_at_min = L * *f.hessian_at_min;
  g.lower = 0.0;
  g.upper = 1.0;
  return g;
}

Objective levy2() { return rescale_to_unit_box(levy_raw_objective(2)); }

std::vector<std::string> objective_names() {
  return {"levy", "sum_of_squares", "rosenbrock", "rastrigin", "ackley", "griewank", "styblinski_tang", "dropwave"};
}

Objective make_objective(std::string_view name, int dim) {
  if (name == "levy") return rescale_to_unit_box(levy_raw_objective(dim));
  if (name == "sum_of_squares") return rescale_to_unit_box(sum_of_squares_raw(dim));
  if (name == "rosenbrock") return rescale_to_unit_box(rosenbrock_raw(dim));
  if (name == "rastrigin") return rescale_to_unit_box(rastrigin_raw(dim));
  if (name == "ackley") return rescale_to_unit_box(ackley_raw(dim));
  if (name == "griewank") return rescale_to_unit_box(griewank_raw(dim));
  if (name == "styblinski_tang") return rescale_to_unit_box(styblinski_tang_raw(dim));
  if (name == "dropwave") {
    if (dim != 2) throw InvalidArgument("dropwave is two-dimensional");
    return rescale_to_unit_box(dropwave_raw());
  }
  throw InvalidArgument("unknown objective: " + std::string(name));
}

Objective quadratic_model(const Objective& f) {
  if (!f.minimizer || !f.hessian_at_min || !f.f_min)
    throw InvalidArgument("quadratic model needs minimizer, f_min and hessian");
  const Vector xs = *f.minimizer;
  const Eigen::MatrixXd h = *f.hessian_at_min;
  const double fm = *f.f_min;
  Objective q;
  q.name = f.name + "_quadratic";
  q.dim = f.dim;
  q.eval = [xs, h, fm](const Vector& x) {
    const Vector d = x - xs;
    return fm + 0.5 * d.dot(h * d);
  };
  q.grad = [xs, h](const Vector& x) { return Vector(h * (x - xs)); };
  q.minimizer = xs;
  q.f_min = fm;
  q.hessian_at_min = h;
  q.lower = f.lower;
  q.upper = f.upper;
  return q;
}

Objective centered_quadratic(int dim, double c) {
  Objective q;
  q.name = "centered_quadratic";
  q.dim = dim;
  q.eval = [c](const Vector& u) { return c * (u.array() - 0.5).square().sum(); };
  q.grad = [c](const Vector& u) { return Vector(2.0 * c * (u.array() - 0.5)); };
  q.minimizer = Vector::Constant(dim, 0.5);
  q.f_min = 0.0;
  q.hessian_at_min = 2.0 * c * Eigen::MatrixXd::Identity(dim, dim);
  return q;
}

}  // namespace qhd
