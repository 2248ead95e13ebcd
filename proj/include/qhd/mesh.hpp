#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qhd {

using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Boundary { dirichlet, periodic };

const char* to_string(Boundary b);

// Regular grid on [0,1]^d. Dirichlet meshes have r+1 nodes per edge at j/r,
// periodic meshes have N nodes per edge at j/N. Flat indices are row-major
// with axis 0 varying slowest.
class Mesh {
 public:
  Mesh(int dim, int cells_per_edge, Boundary boundary);

  static Mesh dirichlet(int dim, int r) { return Mesh(dim, r, Boundary::dirichlet); }
  static Mesh periodic(int dim, int n) { return Mesh(dim, n, Boundary::periodic); }

  int dim() const { return dim_; }
  int cells_per_edge() const { return cells_; }
  Boundary boundary() const { return boundary_; }
  int nodes_per_edge() const { return boundary_ == Boundary::dirichlet ? cells_ + 1 : cells_; }
  std::size_t size() const { return size_; }

  double coordinate(int j) const { return static_cast<double>(j) / cells_; }
  std::vector<int> multi_index(std::size_t flat) const;
  std::size_t flat_index(std::span<const int> idx) const;
  Vector point(std::size_t flat) const;
  // stride of axis k in the flat layout
  std::size_t stride(int axis) const;

  bool operator==(const Mesh& o) const {
    return dim_ == o.dim_ && cells_ == o.cells_ && boundary_ == o.boundary_;
  }
  bool operator!=(const Mesh& o) const { return !(*this == o); }

 private:
  int dim_;
  int cells_;
  Boundary boundary_;
  std::size_t size_;
};

class WaveFunction {
 public:
  // Throws if the amplitudes are not unit norm within 1e-10.
  WaveFunction(Mesh mesh, CVector amplitudes);
  // Rescales to unit norm; throws on a zero or non-finite vector.
  static WaveFunction normalized(Mesh mesh, CVector amplitudes);

  const Mesh& mesh() const { return mesh_; }
  const CVector& amplitudes() const { return amps_; }
  Vector density() const { return amps_.cwiseAbs2(); }
  double norm() const { return amps_.norm(); }

 private:
  Mesh mesh_;
  CVector amps_;
};

class DiagonalOperator {
 public:
  DiagonalOperator(Mesh mesh, Vector values);
  const Mesh& mesh() const { return mesh_; }
  const Vector& values() const { return values_; }

 private:
  Mesh mesh_;
  Vector values_;
};

enum class BoundaryNodes {
  included,  // operator acts on all (r+1)^d nodes
  pinned     // boundary nodes fixed to zero, operator acts on interior nodes only
};

struct FdmOperators {
  SparseMatrix laplacian;                // over `active` nodes
  std::vector<DiagonalOperator> position;
  std::vector<std::size_t> active;       // mesh index of each operator row
};

// Lattice adjacency of the Dirichlet grid (nearest neighbours, unit weights).
SparseMatrix lattice_adjacency(const Mesh& mesh);
FdmOperators build_fdm_operators(const Mesh& mesh, BoundaryNodes nodes = BoundaryNodes::included);

struct Objective;
DiagonalOperator discretize_objective(const Mesh& mesh, const Objective& f);

WaveFunction uniform_state(const Mesh& mesh);
// |psi|^2 follows a Gaussian density with the given variance per axis.
WaveFunction gaussian_state(const Mesh& mesh, const Vector& center, double variance);
WaveFunction point_mass(const Mesh& mesh, std::size_t node);

double expectation(const WaveFunction& psi, const DiagonalOperator& obs);
std::vector<std::size_t> sample_indices(const WaveFunction& psi, int shots, std::uint64_t seed);
std::vector<Vector> sample_positions(const WaveFunction& psi, int shots, std::uint64_t seed);
// Strictly inside the ball; points on the sphere up to round-off are outside.
bool within_radius(const Vector& x, const Vector& center, double radius);

double success_probability(const WaveFunction& psi, const Vector& x_star, double radius);
// Same statistic on a raw density aligned with the mesh.
double success_probability(const Mesh& mesh, const Vector& density, const Vector& x_star, double radius);

}  // namespace qhd
