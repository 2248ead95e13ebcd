#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qhd/dynamics.hpp"
#include "qhd/objectives.hpp"
#include "qhd/schedule.hpp"

namespace qhd {

// Qubit j is bit j of a bitstring written left to right, i.e. the (n-1-j)th
// bit of the basis index. sigma_z |0> = |0>, so bit 0 <-> spin +1.

// H_P = sum h_j z_j + sum_{j>k} J_{jk} z_j z_k + offset
struct IsingModel {
  int n = 0;
  Vector h;
  std::map<std::pair<int, int>, double> J;  // keys (j, k) with j > k
  double offset = 0.0;

  double energy(const std::vector<int>& spins) const;
  double energy_of_basis(std::uint64_t index) const;
};

// sum q_j x_j + sum_{j<k} q_jk x_j x_k + offset
struct QuboModel {
  int n = 0;
  Vector linear;
  std::map<std::pair<int, int>, double> quadratic;  // keys (j, k) with j < k
  double offset = 0.0;

  double energy(const std::vector<int>& bits) const;
  double energy_of_basis(std::uint64_t index) const;
};

IsingModel make_ising(int n);
QuboModel make_qubo(int n);

enum class Encoding { hamming, radix2 };

struct PrecisionLayout {
  int d = 0;
  int bits = 0;
  Vector p;
  Encoding encoding = Encoding::hamming;

  int qubits() const { return d * bits; }
};

PrecisionLayout hamming_layout(int d, int r);
// p = (2^{-(b-1)}, 2^{-(b-1)}, 2^{-(b-2)}, ..., 1/2), which sums to 1
PrecisionLayout radix2_layout(int d, int b);

// Per-axis tridiagonal matrix with off-diagonal sqrt((j+1)(r-j)/r), the exact
// restriction V^T (S_x / sqrt r) V to the Hamming subspace.
Eigen::MatrixXd relaxed_adjacency_1d(int r);
// Kronecker sum over d axes on the (r+1)^d grid, row-major like Mesh.
SparseMatrix relaxed_adjacency(int r, int d);

// 2^{dr} x (r+1)^d matrix whose columns are tensor products of Hamming states.
Eigen::MatrixXd hamming_isometry(int r, int d);
// Amplitudes of a single Hamming state |H_j> over r qubits.
Vector hamming_state(int r, int j);

IsingModel hamming_encode_qp(const QpInstance& qp, int r);
QuboModel qp_to_qubo(const QpInstance& qp, const PrecisionLayout& layout);
IsingModel qubo_to_ising(const QuboModel& m);
QuboModel ising_to_qubo(const IsingModel& m);

Vector decode_bits(const std::string& bits, const PrecisionLayout& layout);
std::vector<Vector> decode_samples(const std::vector<std::string>& bits, const PrecisionLayout& layout);
std::string basis_to_bits(std::uint64_t index, int n);
std::uint64_t bits_to_basis(const std::string& bits);

// Dense 2^n realizations.
Vector ising_diagonal(const IsingModel& m);
Eigen::MatrixXd dense_pauli_sum(int n, char axis);  // sum_j sigma_axis^(j), axis in {x, z}

struct MachineSpec {
  double A0_over_h = 9.63e9;
  double t_f = 800e-6;
};

struct AnnealEnvelope {
  double lambda = 1.0;
  double t_f = 1.0;
  ScalarFn A_over_h;  // functions of physical time
  ScalarFn B_over_h;

  double effective_time() const { return lambda * t_f; }
};

// lambda = A0 / (r^{3/2} e^{phi(0)}), A(xi) = lambda r^{3/2} e^{phi(lambda xi)},
// B(xi) = 2 lambda e^{chi(lambda xi)}.
AnnealEnvelope anneal_rescale(const Schedule& sched, int r, const MachineSpec& machine);
// Machine-emulation envelope: A linear from A0 down to 0, B quadratic up to B1,
// driven by the knots of a piecewise schedule expressed in `time_unit` seconds.
AnnealEnvelope surrogate_envelope(const Schedule& piecewise, double t_f, double A0_over_h = 9.63e9,
                                  double B1_over_h = 7.57e9, double time_unit = 1e-6);

// Strang-split evolution of -(e^phi r^2 / 2) A'_d + e^chi F on the (r+1)^d grid,
// starting from the binomial state sqrt(C(r,j)/2^r) per axis.
Trajectory relaxed_qhd_evolve(const QpInstance& qp, int r, const Schedule& sched, double T, double dt,
                              const EvolveOptions& opts = {});

struct DenseIsingOptions {
  int block_size = 0;       // qubits per variable for Hamming marginals; 0 skips them
  bool refine = false;      // halve dt until successive final states agree
  double refine_tol = 1e-9;
  int max_halvings = 8;
};

struct DenseIsingResult {
  CVector state;
  std::vector<Vector> marginals;  // per variable, probability of each Hamming weight
  double dt_used = 0.0;
  long steps = 0;
};

// H(xi) = -(A/2) sum sigma_x + (B/2) H_P from |+>^n over [0, t_f], using the
// same kick-drift-kick order as relaxed_qhd_evolve with exact per-qubit
// rotations for the transverse field.
DenseIsingResult simulate_ising_dense(const IsingModel& model, const AnnealEnvelope& env, double t_f, double dt,
                                      const DenseIsingOptions& opts = {});

std::vector<Vector> hamming_marginals(const CVector& state, int n, int block_size);

struct EncodingReport {
  double leakage = 0.0;
  double mismatch = 0.0;
  bool pass = false;
};

EncodingReport verify_subspace_encoding(const Eigen::MatrixXd& H_dense, const Eigen::MatrixXd& V,
                                        const Eigen::MatrixXd& H_target, double tol);

}  // namespace qhd
