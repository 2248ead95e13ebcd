#include "qhd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qhd/errors.hpp"
#include "qhd/objectives.hpp"

namespace qhd {

const char* to_string(Boundary b) {
  return b == Boundary::dirichlet ? "dirichlet" : "periodic";
}

Mesh::Mesh(int dim, int cells_per_edge, Boundary boundary)
    : dim_(dim), cells_(cells_per_edge), boundary_(boundary), size_(1) {
  if (dim <= 0 || cells_per_edge <= 0)
    throw InvalidArgument("mesh dimension and resolution must be positive");
  for (int k = 0; k < dim_; ++k) {
    size_ *= static_cast<std::size_t>(nodes_per_edge());
    if (size_ > (std::size_t{1} << 34)) throw ResourceError("mesh too large");
  }
}

std::size_t Mesh::stride(int axis) const {
  std::size_t s = 1;
  for (int k = dim_ - 1; k > axis; --k) s *= static_cast<std::size_t>(nodes_per_edge());
  return s;
}

std::vector<int> Mesh::multi_index(std::size_t flat) const {
  std::vector<int> idx(dim_);
  const auto n = static_cast<std::size_t>(nodes_per_edge());
  for (int k = dim_ - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

std::size_t Mesh::flat_index(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != dim_) throw InvalidArgument("multi-index rank mismatch");
  std::size_t flat = 0;
  for (int k = 0; k < dim_; ++k) {
    if (idx[k] < 0 || idx[k] >= nodes_per_edge()) throw InvalidArgument("multi-index out of range");
    flat = flat * nodes_per_edge() + idx[k];
  }
  return flat;
}

Vector Mesh::point(std::size_t flat) const {
  Vector x(dim_);
  const auto n = static_cast<std::size_t>(nodes_per_edge());
  for (int k = dim_ - 1; k >= 0; --k) {
    x[k] = coordinate(static_cast<int>(flat % n));
    flat /= n;
  }
  return x;
}

WaveFunction::WaveFunction(Mesh mesh, CVector amplitudes)
    : mesh_(std::move(mesh)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != mesh_.size())
    throw InvalidArgument("amplitude count does not match mesh");
  if (std::abs(amps_.squaredNorm() - 1.0) > 1e-10)
    throw InvalidArgument("wavefunction is not normalized");
}

WaveFunction WaveFunction::normalized(Mesh mesh, CVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize amplitudes");
  amplitudes /= n;
  return WaveFunction(std::move(mesh), std::move(amplitudes));
}

DiagonalOperator::DiagonalOperator(Mesh mesh, Vector values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != mesh_.size())
    throw InvalidArgument("operator size does not match mesh");
  for (Eigen::Index i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i])) throw EvaluationError("non-finite operator value", static_cast<std::size_t>(i));
}

static void require_dirichlet(const Mesh& mesh) {
  if (mesh.boundary() != Boundary::dirichlet)
    throw InvalidArgument("finite-difference operators need a dirichlet mesh");
}

SparseMatrix lattice_adjacency(const Mesh& mesh) {
  require_dirichlet(mesh);
  const auto n = static_cast<Eigen::Index>(mesh.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(2 * mesh.dim()) * mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    auto idx = mesh.multi_index(i);
    for (int k = 0; k < mesh.dim(); ++k) {
      const std::size_t s = mesh.stride(k);
      if (idx[k] > 0) trip.emplace_back(i, i - s, 1.0);
      if (idx[k] < mesh.cells_per_edge()) trip.emplace_back(i, i + s, 1.0);
    }
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

FdmOperators build_fdm_operators(const Mesh& mesh, BoundaryNodes nodes) {
  require_dirichlet(mesh);
  FdmOperators ops;
  const double r2 = static_cast<double>(mesh.cells_per_edge()) * mesh.cells_per_edge();
  const int r = mesh.cells_per_edge();

  std::vector<long> row_of(mesh.size(), -1);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    bool keep = true;
    if (nodes == BoundaryNodes::pinned) {
      for (int j : mesh.multi_index(i))
        if (j == 0 || j == r) keep = false;
    }
    if (keep) {
      row_of[i] = static_cast<long>(ops.active.size());
      ops.active.push_back(i);
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t row = 0; row < ops.active.size(); ++row) {
    const std::size_t i = ops.active[row];
    auto idx = mesh.multi_index(i);
    trip.emplace_back(row, row, -2.0 * mesh.dim() * r2);
    for (int k = 0; k < mesh.dim(); ++k) {
      const std::size_t s = mesh.stride(k);
      if (idx[k] > 0 && row_of[i - s] >= 0) trip.emplace_back(row, row_of[i - s], r2);
      if (idx[k] < r && row_of[i + s] >= 0) trip.emplace_back(row, row_of[i + s], r2);
    }
  }
  const auto m = static_cast<Eigen::Index>(ops.active.size());
  ops.laplacian.resize(m, m);
  ops.laplacian.setFromTriplets(trip.begin(), trip.end());

  for (int k = 0; k < mesh.dim(); ++k) {
    Vector v(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) v[i] = mesh.point(i)[k];
    ops.position.emplace_back(mesh, std::move(v));
  }
  return ops;
}

DiagonalOperator discretize_objective(const Mesh& mesh, const Objective& f) {
  if (f.dim != mesh.dim()) throw InvalidArgument("objective dimension does not match mesh");
  Vector v(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    v[i] = f.eval(mesh.point(i));
    if (!std::isfinite(v[i])) throw EvaluationError("objective is not finite at node " + std::to_string(i), i);
  }
  return DiagonalOperator(mesh, std::move(v));
}

WaveFunction uniform_state(const Mesh& mesh) {
  CVector a = CVector::Constant(mesh.size(), 1.0 / std::sqrt(static_cast<double>(mesh.size())));
  return WaveFunction::normalized(mesh, std::move(a));
}

WaveFunction gaussian_state(const Mesh& mesh, const Vector& center, double variance) {
  if (!(variance > 0.0)) throw InvalidArgument("variance must be positive");
  if (center.size() != mesh.dim()) throw InvalidArgument("center dimension mismatch");
  for (Eigen::Index k = 0; k < center.size(); ++k)
    if (!(center[k] >= 0.0 && center[k] <= 1.0)) throw InvalidArgument("gaussian center outside the unit box");
  CVector a(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double r2 = (mesh.point(i) - center).squaredNorm();
    a[i] = std::exp(-r2 / (4.0 * variance));
  }
  return WaveFunction::normalized(mesh, std::move(a));
}

WaveFunction point_mass(const Mesh& mesh, std::size_t node) {
  if (node >= mesh.size()) throw InvalidArgument("node out of range");
  CVector a = CVector::Zero(mesh.size());
  a[node] = 1.0;
  return WaveFunction(mesh, std::move(a));
}

double expectation(const WaveFunction& psi, const DiagonalOperator& obs) {
  if (psi.mesh() != obs.mesh()) throw InvalidArgument("mesh mismatch");
  return psi.amplitudes().cwiseAbs2().dot(obs.values());
}

std::vector<std::size_t> sample_indices(const WaveFunction& psi, int shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("shots must be positive");
  const Vector p = psi.density();
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) cdf[i] = (acc += p[i]);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out(shots);
  for (auto& o : out) {
    // 53 random mantissa bits, scaled by the total mass
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    if (i >= cdf.size()) i = cdf.size() - 1;
    while (p[i] == 0.0 && i > 0) --i;  // never land on an empty node
    o = i;
  }
  return out;
}

std::vector<Vector> sample_positions(const WaveFunction& psi, int shots, std::uint64_t seed) {
  std::vector<Vector> pts;
  for (std::size_t i : sample_indices(psi, shots, seed)) pts.push_back(psi.mesh().point(i));
  return pts;
}

bool within_radius(const Vector& x, const Vector& center, double radius) {
  return (x - center).norm() < radius * (1.0 - 1e-12);
}

double success_probability(const Mesh& mesh, const Vector& density, const Vector& x_star, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  if (x_star.size() != mesh.dim()) throw InvalidArgument("target dimension mismatch");
  double mass = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i)
    if (within_radius(mesh.point(i), x_star, radius)) mass += density[i];
  return std::clamp(mass, 0.0, 1.0);
}

double success_probability(const WaveFunction& psi, const Vector& x_star, double radius) {
  return success_probability(psi.mesh(), psi.density(), x_star, radius);
}

}  // namespace qhd
