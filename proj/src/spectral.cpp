#include "qhd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qhd/dynamics.hpp"
#include "qhd/errors.hpp"

namespace qhd {

SpectralHamiltonian build_hamiltonian(const Mesh& mesh, const DiagonalOperator& f, double e_phi, double e_chi,
                                      BoundaryNodes nodes) {
  if (mesh.boundary() != Boundary::dirichlet) throw InvalidArgument("spectral hamiltonian needs a dirichlet mesh");
  if (f.mesh() != mesh) throw InvalidArgument("mesh mismatch");
  if (!(e_phi >= 0.0) || !(e_chi >= 0.0)) throw InvalidArgument("coefficients must be non-negative");
  FdmOperators ops = build_fdm_operators(mesh, nodes);
  SparseMatrix H = (-0.5 * e_phi) * ops.laplacian;
  for (std::size_t row = 0; row < ops.active.size(); ++row)
    H.coeffRef(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(row)) += e_chi * f.values()[ops.active[row]];
  H.prune(0.0);
  H.makeCompressed();
  return SpectralHamiltonian{mesh, std::move(H), std::move(ops.active)};
}

SpectralHamiltonian build_hamiltonian(const Mesh& mesh, const Objective& f, double e_phi, double e_chi,
                                      BoundaryNodes nodes) {
  return build_hamiltonian(mesh, discretize_objective(mesh, f), e_phi, e_chi, nodes);
}

EigenSystem eigenstates(const SpectralHamiltonian& h, int k, const LanczosOptions& opts) {
  EigenSystem raw = lowest_eigenpairs(h.H, k, opts);
  EigenSystem e;
  e.eigenvalues = raw.eigenvalues;
  e.eigenvectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(h.mesh.size()), raw.eigenvectors.cols());
  for (std::size_t row = 0; row < h.active.size(); ++row)
    e.eigenvectors.row(static_cast<Eigen::Index>(h.active[row])) = raw.eigenvectors.row(static_cast<Eigen::Index>(row));
  e.mesh = h.mesh;
  return e;
}

double ProbabilitySpectrum::mass_above(int n) const {
  double below = 0.0;
  for (const auto& c : clusters)
    if (c.first <= n) below += c.mass;
  double total = residual;
  for (double l : levels) total += l;
  return std::max(0.0, total - below);
}

ProbabilitySpectrum probability_spectrum(const WaveFunction& psi, const EigenSystem& eig, double degeneracy_tol) {
  if (eig.mesh && *eig.mesh != psi.mesh()) throw InvalidArgument("mesh mismatch");
  if (eig.eigenvectors.rows() != psi.amplitudes().size()) throw InvalidArgument("eigenvector length mismatch");
  const CVector& a = psi.amplitudes();
  const Vector re = a.real(), im = a.imag();
  ProbabilitySpectrum ps;
  const Eigen::Index k = eig.eigenvectors.cols();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double cr = eig.eigenvectors.col(i).dot(re);
    const double ci = eig.eigenvectors.col(i).dot(im);
    ps.levels.push_back(cr * cr + ci * ci);
    sum += ps.levels.back();
  }
  for (int i = 0; i < static_cast<int>(k);) {
    int j = i;
    const double e = eig.eigenvalues[i];
    while (j + 1 < k && std::abs(eig.eigenvalues[j + 1] - e) <= degeneracy_tol * std::max(1.0, std::abs(e))) ++j;
    double m = 0.0;
    for (int l = i; l <= j; ++l) m += ps.levels[l];
    ps.clusters.push_back({i, j, m});
    i = j + 1;
  }
  ps.residual = std::max(0.0, psi.amplitudes().squaredNorm() - sum);
  return ps;
}

double energy_ratio(const EigenSystem& eig) {
  if (eig.eigenvalues.size() < 2) throw InvalidArgument("need two eigenvalues");
  if (!(eig.eigenvalues[0] > 0.0)) throw DomainError("ground energy must be positive; shift f by its minimum");
  return eig.eigenvalues[1] / eig.eigenvalues[0];
}

double semiclassical_ratio(std::span<const double> omega) {
  if (omega.size() != 2) throw UnsupportedDimension("semiclassical ratio is defined for d = 2");
  double w1 = omega[0], w2 = omega[1];
  if (!(w1 > 0.0) || !(w2 > 0.0)) throw InvalidArgument("frequencies must be positive");
  if (w2 > w1) std::swap(w1, w2);
  return (w1 + 3.0 * w2) / (w1 + w2);
}

double lyapunov_W(const WaveFunction& psi, const Schedule& sched, double t, const DiagonalOperator& f,
                  const Vector& x_star) {
  const Mesh& mesh = psi.mesh();
  if (mesh.boundary() != Boundary::periodic) throw InvalidArgument("lyapunov monitor needs a periodic mesh");
  if (!sched.beta || !sched.gamma) throw InvalidArgument("lyapunov monitor needs a three-parameter schedule");
  if (f.mesh() != mesh) throw InvalidArgument("mesh mismatch");
  if (x_star.size() != mesh.dim()) throw InvalidArgument("minimizer dimension mismatch");
  const double eg = std::exp(-sched.gamma(t));
  const double eb = std::exp(sched.beta(t));
  const int n = mesh.nodes_per_edge();
  const CVector& a = psi.amplitudes();
  double jj = 0.0;
  for (int axis = 0; axis < mesh.dim(); ++axis) {
    // p = -i d/dx has symbol 2 pi k
    CVector sym(a.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const int j = mesh.multi_index(i)[axis];
      const int kk = j < n / 2 ? j : j - n;
      sym[i] = 2.0 * std::numbers::pi * kk;
    }
    CVector jpsi = eg * apply_fourier_multiplier(mesh, a, sym);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      double dx = mesh.point(i)[axis] - x_star[axis];
      dx -= std::round(dx);
      jpsi[i] += dx * a[i];
    }
    jj += jpsi.squaredNorm();
  }
  return 0.5 * jj + eb * expectation(psi, f);
}

WaveFunction periodic_to_dirichlet(const WaveFunction& psi) {
  const Mesh& pm = psi.mesh();
  if (pm.boundary() != Boundary::periodic) throw InvalidArgument("source state must be periodic");
  Mesh dm = Mesh::dirichlet(pm.dim(), pm.cells_per_edge());
  CVector out = CVector::Zero(static_cast<Eigen::Index>(dm.size()));
  for (std::size_t i = 0; i < pm.size(); ++i) {
    auto idx = pm.multi_index(i);
    if (std::any_of(idx.begin(), idx.end(), [](int j) { return j == 0; })) continue;
    out[dm.flat_index(idx)] = psi.amplitudes()[i];
  }
  return WaveFunction::normalized(dm, std::move(out));
}

}  // namespace qhd
