#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qhd/mesh.hpp"
#include "qhd/objectives.hpp"
#include "qhd/schedule.hpp"

namespace qhd {

struct EvolveOptions {
  double t0 = 0.0;
  std::vector<double> snapshot_times;
  std::optional<Vector> target;  // success_prob reference; defaults to the objective minimizer
  double radius = 0.1;
  int record_every = 1;          // observables every k steps (first and last always)
};

struct Trajectory {
  Mesh mesh;
  std::vector<double> times;
  std::map<std::string, std::vector<double>> observables;  // Ef, success_prob, norm
  std::vector<double> snapshot_times;
  std::vector<WaveFunction> snapshots;
  CVector final_amplitudes;

  WaveFunction final_state() const { return WaveFunction::normalized(mesh, final_amplitudes); }
  const std::vector<double>& series(const std::string& name) const { return observables.at(name); }
};

// Pseudo-spectral split step on a periodic mesh: potential phase exp(-i dt b_j f)
// then kinetic phase exp(-i dt a_j L) in Fourier space, a_j = e_phi(t_j),
// b_j = e_chi(t_j), L(k) = 1/2 sum (2 pi k_i)^2 with signed k.
Trajectory qhd_evolve(const Mesh& mesh, const DiagonalOperator& potential, const Schedule& sched,
                      double T, double dt, const WaveFunction& psi0, const EvolveOptions& opts = {});
Trajectory qhd_evolve(const Mesh& mesh, const Objective& f, const Schedule& sched, double T,
                      double dt, const WaveFunction& psi0, const EvolveOptions& opts = {});

// Kinetic eigenvalue per flat mesh index in FFT order.
Vector kinetic_spectrum(const Mesh& mesh);
// psi -> F^{-1} diag(mult) F psi on a periodic mesh, unitary transforms.
CVector apply_fourier_multiplier(const Mesh& mesh, const CVector& psi, const CVector& mult);

// Radix-2 encoding with q bits per variable. Variable 0 owns the most
// significant q bits and each variable reads its bits as j/2^q, so the basis
// index of a bitstring equals the flat index of the periodic mesh with N=2^q.
struct Radix2Problem {
  int dim = 0;
  int bits = 0;
  Mesh mesh;
  Vector diag;

  int qubits() const { return dim * bits; }
  Vector decode(std::uint64_t bitstring) const { return mesh.point(bitstring); }
};

Radix2Problem radix2_problem(const Objective& f, int bits_per_var);

// One kick-drift-kick step of H = e_phi(t) H0 + e_chi(t) diag with H0 = -sum sigma_x.
// dt may be negative; a step from t with dt is inverted by a step from t+dt with -dt.
void qaa_step(CVector& psi, const Vector& diag, int qubits, const Schedule& sched, double t, double dt);

Trajectory qaa_evolve(const Radix2Problem& problem, const Schedule& sched, double T, double dt,
                      const EvolveOptions& opts = {});

}  // namespace qhd
