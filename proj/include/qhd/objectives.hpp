#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qhd/mesh.hpp"

namespace qhd {

struct Objective {
  std::string name;
  int dim = 0;
  std::function<double(const Vector&)> eval;
  std::function<Vector(const Vector&)> grad;
  std::optional<Vector> minimizer;
  std::optional<double> f_min;
  std::optional<Eigen::MatrixXd> hessian_at_min;
  // Box the function is natively defined on (per axis). Unit box by default.
  double lower = 0.0;
  double upper = 1.0;

  double operator()(const Vector& x) const { return eval(x); }
};

// Raw test functions on their literature domains.
double levy_raw(const Vector& x);
Objective levy_raw_objective(int dim = 2);
Objective sum_of_squares_raw(int dim);
Objective rosenbrock_raw(int dim);
Objective rastrigin_raw(int dim);
Objective ackley_raw(int dim);
Objective griewank_raw(int dim);
Objective styblinski_tang_raw(int dim);
Objective dropwave_raw();

// f~(u) = (f(a + L u) - f_min) / L with L = b - a.
Objective rescale_to_unit_box(const Objective& f);

// Levy on [-10,10]^2 rescaled to the unit square.
Objective levy2();

// Unit-box objectives by registry name (levy, sum_of_squares, rosenbrock,
// rastrigin, ackley, griewank, styblinski_tang, dropwave). dim defaults to 2.
Objective make_objective(std::string_view name, int dim = 2);
std::vector<std::string> objective_names();

// f_min + 1/2 (x - x*)^T H (x - x*)
Objective quadratic_model(const Objective& f);

// f(u) = c * sum (u_k - 1/2)^2 on the unit box, with the value computed
// through the minimum-image displacement so it is smooth on a periodic box.
Objective centered_quadratic(int dim, double c);

struct QpInstance {
  int dim = 0;
  SparseMatrix Q;  // symmetric, both triangles stored
  Vector b;
};

QpInstance make_qp(int dim, const std::vector<std::tuple<int, int, double>>& upper_triplets, Vector b);
std::pair<double, Vector> qp_eval_grad(const QpInstance& qp, const Vector& x);
double qp_value(const QpInstance& qp, const Vector& x);
Objective qp_objective(const QpInstance& qp);

std::string qp_to_json(const QpInstance& qp);
QpInstance qp_from_json(const std::string& text);

}  // namespace qhd
