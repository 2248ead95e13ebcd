#include <algorithm>
#include <cmath>
#include <tuple>

#include <json.hpp>

#include "qhd/errors.hpp"
#include "qhd/objectives.hpp"

namespace qhd {

QpInstance make_qp(int dim, const std::vector<std::tuple<int, int, double>>& upper_triplets, Vector b) {
  if (dim < 1) throw InvalidArgument("qp dimension must be positive");
  if (b.size() != dim) throw InvalidArgument("linear term has wrong length");
  std::vector<Eigen::Triplet<double>> trip;
  for (auto [i, j, v] : upper_triplets) {
    if (i < 0 || j < 0 || i >= dim || j >= dim || i > j)
      throw InvalidArgument("qp triplets must index the upper triangle");
    if (!std::isfinite(v)) throw InvalidArgument("non-finite qp coefficient");
    trip.emplace_back(i, j, v);
    if (i != j) trip.emplace_back(j, i, v);
  }
  QpInstance qp;
  qp.dim = dim;
  qp.Q.resize(dim, dim);
  qp.Q.setFromTriplets(trip.begin(), trip.end());
  qp.Q.makeCompressed();
  qp.b = std::move(b);
  return qp;
}

std::pair<double, Vector> qp_eval_grad(const QpInstance& qp, const Vector& x) {
  if (x.size() != qp.dim) throw InvalidArgument("point dimension does not match qp");
  Vector g = qp.b;
  double quad = 0.0;
  for (int col = 0; col < qp.Q.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(qp.Q, col); it; ++it) {
      const double qx = it.value() * x[col];
      g[it.row()] += qx;
      quad += x[it.row()] * qx;
    }
  }
  return {0.5 * quad + qp.b.dot(x), std::move(g)};
}

double qp_value(const QpInstance& qp, const Vector& x) { return qp_eval_grad(qp, x).first; }

Objective qp_objective(const QpInstance& qp) {
  Objective f;
  f.name = "qp";
  f.dim = qp.dim;
  f.eval = [qp](const Vector& x) { return qp_value(qp, x); };
  f.grad = [qp](const Vector& x) { return qp_eval_grad(qp, x).second; };
  return f;
}

std::string qp_to_json(const QpInstance& qp) {
  std::vector<std::tuple<int, int, double>> upper;
  for (int col = 0; col < qp.Q.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(qp.Q, col); it; ++it)
      if (it.row() <= col) upper.emplace_back(static_cast<int>(it.row()), col, it.value());
  std::sort(upper.begin(), upper.end());
  nlohmann::json j;
  j["dim"] = qp.dim;
  j["triplets"] = nlohmann::json::array();
  for (auto [r, c, v] : upper) j["triplets"].push_back({r, c, v});
  j["b"] = std::vector<double>(qp.b.data(), qp.b.data() + qp.b.size());
  return j.dump() + "\n";
}

QpInstance qp_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed qp json: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("triplets") || !j.contains("b"))
    throw InvalidArgument("qp json needs dim, triplets and b");
  const int dim = j["dim"].get<int>();
  std::vector<std::tuple<int, int, double>> trip;
  for (const auto& t : j["triplets"]) {
    if (!t.is_array() || t.size() != 3) throw InvalidArgument("qp triplet must be [i, j, value]");
    trip.emplace_back(t[0].get<int>(), t[1].get<int>(), t[2].get<double>());
  }
  const auto bv = j["b"].get<std::vector<double>>();
  Vector b = Eigen::Map<const Vector>(bv.data(), static_cast<Eigen::Index>(bv.size()));
  return make_qp(dim, trip, std::move(b));
}

}  // namespace qhd
