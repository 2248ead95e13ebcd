#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qhd/mesh.hpp"
#include "qhd/objectives.hpp"
#include "qhd/schedule.hpp"

namespace qhd {

struct EigenSystem {
  Vector eigenvalues;            // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
  std::optional<Mesh> mesh;      // set when the columns are functions on a mesh
};

struct LanczosOptions {
  bool shift_invert = true;
  int max_basis = 160;
  double tol = 1e-11;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  int max_runs = 400;
};

// k smallest eigenpairs of a real symmetric sparse matrix. Lanczos with full
// reorthogonalization, locking of converged pairs and a final check that no
// smaller eigenvalue is left in the complement of the locked space.
EigenSystem lowest_eigenpairs(const SparseMatrix& H, int k, const LanczosOptions& opts = {});
// Dense reference solver.
EigenSystem dense_lowest_eigenpairs(const Eigen::MatrixXd& H, int k);

double max_residual(const SparseMatrix& H, const EigenSystem& eig);
double orthonormality_error(const EigenSystem& eig);
double inf_norm(const SparseMatrix& H);

struct SpectralHamiltonian {
  Mesh mesh;
  SparseMatrix H;                   // rows indexed by `active`
  std::vector<std::size_t> active;  // mesh node of each row
};

// e_phi (-1/2 laplacian) + e_chi diag(f). By default the Dirichlet boundary
// nodes are pinned to zero so the operator acts on interior nodes.
SpectralHamiltonian build_hamiltonian(const Mesh& mesh, const DiagonalOperator& f, double e_phi, double e_chi,
                                      BoundaryNodes nodes = BoundaryNodes::pinned);
SpectralHamiltonian build_hamiltonian(const Mesh& mesh, const Objective& f, double e_phi, double e_chi,
                                      BoundaryNodes nodes = BoundaryNodes::pinned);

// Eigenpairs of a spectral Hamiltonian with eigenvectors embedded on the mesh
// (zero on pinned nodes).
EigenSystem eigenstates(const SpectralHamiltonian& h, int k, const LanczosOptions& opts = {});

struct LevelCluster {
  int first;
  int last;  // inclusive
  double mass;
};

struct ProbabilitySpectrum {
  std::vector<double> levels;         // |<n|psi>|^2 per eigenvector
  std::vector<LevelCluster> clusters; // degenerate groups with block mass
  double residual = 0.0;              // 1 - sum of level masses

  // Mass outside the clusters that contain levels 0..n.
  double mass_above(int n) const;
};

ProbabilitySpectrum probability_spectrum(const WaveFunction& psi, const EigenSystem& eig,
                                         double degeneracy_tol = 1e-8);

double energy_ratio(const EigenSystem& eig);
// (w1 + 3 w2) / (w1 + w2) for d = 2
double semiclassical_ratio(std::span<const double> omega);

// 1/2 || e^{-gamma} p psi + (x - x*) psi ||^2 + e^{beta} <f> on a periodic mesh,
// momentum by spectral differentiation, displacement by minimum image.
double lyapunov_W(const WaveFunction& psi, const Schedule& sched, double t, const DiagonalOperator& f,
                  const Vector& x_star);

// Copies a periodic N-node state onto the interior of the Dirichlet mesh with
// r = N (node j keeps coordinate j/N, node 0 is dropped) and renormalizes.
WaveFunction periodic_to_dirichlet(const WaveFunction& psi);

}  // namespace qhd
