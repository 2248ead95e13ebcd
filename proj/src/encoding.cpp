#include <bit>
#include <cmath>

#include "qhd/errors.hpp"
#include "qhd/ising.hpp"

namespace qhd {

namespace {

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Dense upper-triangle-inclusive view of Q for small encoders.
Eigen::MatrixXd dense_q(const QpInstance& qp) { return Eigen::MatrixXd(qp.Q); }

}  // namespace

Eigen::MatrixXd relaxed_adjacency_1d(int r) {
  if (r < 1) throw InvalidArgument("resolution must be positive");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(r + 1, r + 1);
  for (int j = 0; j < r; ++j) {
    const double v = std::sqrt(static_cast<double>(j + 1) * (r - j) / r);
    a(j + 1, j) = v;
    a(j, j + 1) = v;
  }
  return a;
}

SparseMatrix relaxed_adjacency(int r, int d) {
  const Mesh mesh = Mesh::dirichlet(d, r);
  const Eigen::MatrixXd a1 = relaxed_adjacency_1d(r);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    auto idx = mesh.multi_index(i);
    for (int k = 0; k < d; ++k) {
      const std::size_t s = mesh.stride(k);
      const int j = idx[k];
      if (j > 0) trip.emplace_back(i, i - s, a1(j, j - 1));
      if (j < r) trip.emplace_back(i, i + s, a1(j, j + 1));
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.size());
  SparseMatrix out(n, n);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Vector hamming_state(int r, int j) {
  if (r < 1 || r > 24 || j < 0 || j > r) throw InvalidArgument("bad hamming state");
  const Eigen::Index size = Eigen::Index{1} << r;
  Vector v = Vector::Zero(size);
  const double amp = 1.0 / std::sqrt(binomial(r, j));
  for (Eigen::Index b = 0; b < size; ++b)
    if (std::popcount(static_cast<std::uint64_t>(b)) == j) v[b] = amp;
  return v;
}

Eigen::MatrixXd hamming_isometry(int r, int d) {
  if (r < 1 || d < 1) throw InvalidArgument("resolution and dimension must be positive");
  if (d * r > 14) throw ResourceError("hamming isometry limited to 14 qubits");
  const int n = d * r;
  const Mesh mesh = Mesh::dirichlet(d, r);
  const Eigen::Index rows = Eigen::Index{1} << n;
  std::vector<double> amp(r + 1);
  for (int j = 0; j <= r; ++j) amp[j] = 1.0 / std::sqrt(binomial(r, j));
  const std::uint64_t block_mask = (std::uint64_t{1} << r) - 1;
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(mesh.size()));
  for (Eigen::Index b = 0; b < rows; ++b) {
    std::vector<int> idx(d);
    double a = 1.0;
    for (int k = 0; k < d; ++k) {
      const auto block = (static_cast<std::uint64_t>(b) >> (r * (d - 1 - k))) & block_mask;
      idx[k] = std::popcount(block);
      a *= amp[idx[k]];
    }
    V(b, static_cast<Eigen::Index>(mesh.flat_index(idx))) = a;
  }
  return V;
}

IsingModel hamming_encode_qp(const QpInstance& qp, int r) {
  if (r < 1) throw InvalidArgument("resolution must be positive");
  const int d = qp.dim;
  const Eigen::MatrixXd Q = dense_q(qp);
  IsingModel m = make_ising(d * r);
  const double r2 = static_cast<double>(r) * r;
  for (int p = 0; p < d; ++p) {
    const double hp = -(Q.row(p).sum() + 2.0 * qp.b[p]) / (4.0 * r);
    for (int i = 0; i < r; ++i) m.h[p * r + i] = hp;
  }
  for (int p = 0; p < d; ++p) {
    for (int q = 0; q <= p; ++q) {
      const double v = Q(p, q);
      if (v == 0.0) continue;
      const double coupling = v / (4.0 * r2);
      if (p == q) {
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < i; ++j) m.J[{p * r + i, p * r + j}] = coupling;
      } else {
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) m.J[{p * r + i, q * r + j}] = coupling;
      }
    }
  }
  double g = 0.0;
  for (int p = 0; p < d; ++p) {
    g += 0.125 * (1.0 + 1.0 / r) * Q(p, p) + 0.5 * qp.b[p];
    for (int q = 0; q < p; ++q) g += 0.25 * Q(p, q);
  }
  m.offset = g;
  return m;
}

QuboModel qp_to_qubo(const QpInstance& qp, const PrecisionLayout& layout) {
  if (layout.d != qp.dim) throw InvalidArgument("layout dimension does not match qp");
  const int b = layout.bits;
  const Eigen::MatrixXd Q = dense_q(qp);
  QuboModel m = make_qubo(layout.qubits());
  for (int p = 0; p < qp.dim; ++p) {
    for (int i = 0; i < b; ++i) {
      const int a = p * b + i;
      m.linear[a] = 0.5 * layout.p[i] * layout.p[i] * Q(p, p) + layout.p[i] * qp.b[p];
    }
  }
  for (int a = 0; a < m.n; ++a) {
    for (int c = a + 1; c < m.n; ++c) {
      const int p = a / b, q = c / b;
      const double v = layout.p[a % b] * layout.p[c % b] * Q(p, q);
      if (v != 0.0) m.quadratic[{a, c}] = v;
    }
  }
  return m;
}

}  // namespace qhd
