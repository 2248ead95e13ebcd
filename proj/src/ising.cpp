#include "qhd/ising.hpp"

#include <cmath>

#include "qhd/errors.hpp"

namespace qhd {

namespace {

int bit_of(std::uint64_t index, int n, int qubit) { return static_cast<int>((index >> (n - 1 - qubit)) & 1u); }

}  // namespace

IsingModel make_ising(int n) {
  if (n < 1) throw InvalidArgument("model needs at least one qubit");
  IsingModel m;
  m.n = n;
  m.h = Vector::Zero(n);
  return m;
}

QuboModel make_qubo(int n) {
  if (n < 1) throw InvalidArgument("model needs at least one variable");
  QuboModel m;
  m.n = n;
  m.linear = Vector::Zero(n);
  return m;
}

double IsingModel::energy(const std::vector<int>& spins) const {
  if (static_cast<int>(spins.size()) != n) throw InvalidArgument("spin count mismatch");
  double e = offset;
  for (int j = 0; j < n; ++j) e += h[j] * spins[j];
  for (const auto& [key, v] : J) e += v * spins[key.first] * spins[key.second];
  return e;
}

double IsingModel::energy_of_basis(std::uint64_t index) const {
  std::vector<int> z(n);
  for (int j = 0; j < n; ++j) z[j] = 1 - 2 * bit_of(index, n, j);
  return energy(z);
}

double QuboModel::energy(const std::vector<int>& bits) const {
  if (static_cast<int>(bits.size()) != n) throw InvalidArgument("bit count mismatch");
  double e = offset;
  for (int j = 0; j < n; ++j) e += linear[j] * bits[j];
  for (const auto& [key, v] : quadratic) e += v * bits[key.first] * bits[key.second];
  return e;
}

double QuboModel::energy_of_basis(std::uint64_t index) const {
  std::vector<int> x(n);
  for (int j = 0; j < n; ++j) x[j] = bit_of(index, n, j);
  return energy(x);
}

PrecisionLayout hamming_layout(int d, int r) {
  if (d < 1 || r < 1) throw InvalidArgument("layout needs positive d and r");
  return PrecisionLayout{d, r, Vector::Constant(r, 1.0 / r), Encoding::hamming};
}

PrecisionLayout radix2_layout(int d, int b) {
  if (d < 1 || b < 1 || b > 52) throw InvalidArgument("layout needs positive d and 1..52 bits");
  Vector p(b);
  p[0] = std::ldexp(1.0, -(b - 1));
  for (int i = 1; i < b; ++i) p[i] = std::ldexp(1.0, -(b - i));
  return PrecisionLayout{d, b, std::move(p), Encoding::radix2};
}

IsingModel qubo_to_ising(const QuboModel& m) {
  // x = (1 - z) / 2
  IsingModel out = make_ising(m.n);
  out.offset = m.offset;
  for (int j = 0; j < m.n; ++j) {
    out.h[j] -= m.linear[j] / 2.0;
    out.offset += m.linear[j] / 2.0;
  }
  for (const auto& [key, q] : m.quadratic) {
    const auto [j, k] = key;
    out.offset += q / 4.0;
    out.h[j] -= q / 4.0;
    out.h[k] -= q / 4.0;
    out.J[{k, j}] += q / 4.0;
  }
  return out;
}

QuboModel ising_to_qubo(const IsingModel& m) {
  // z = 1 - 2x
  QuboModel out = make_qubo(m.n);
  out.offset = m.offset;
  for (int j = 0; j < m.n; ++j) {
    out.offset += m.h[j];
    out.linear[j] -= 2.0 * m.h[j];
  }
  for (const auto& [key, v] : m.J) {
    const auto [j, k] = key;
    out.offset += v;
    out.linear[j] -= 2.0 * v;
    out.linear[k] -= 2.0 * v;
    out.quadratic[{k, j}] += 4.0 * v;
  }
  return out;
}

std::string basis_to_bits(std::uint64_t index, int n) {
  std::string s(n, '0');
  for (int j = 0; j < n; ++j)
    if (bit_of(index, n, j)) s[j] = '1';
  return s;
}

std::uint64_t bits_to_basis(const std::string& bits) {
  if (bits.size() > 63) throw InvalidArgument("bitstring too long");
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidArgument("bitstring must contain only 0 and 1");
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

Vector decode_bits(const std::string& bits, const PrecisionLayout& layout) {
  if (static_cast<int>(bits.size()) != layout.qubits()) throw InvalidArgument("bitstring length does not match layout");
  Vector x = Vector::Zero(layout.d);
  for (int v = 0; v < layout.d; ++v) {
    for (int i = 0; i < layout.bits; ++i) {
      const char c = bits[static_cast<std::size_t>(v * layout.bits + i)];
      if (c != '0' && c != '1') throw InvalidArgument("bitstring must contain only 0 and 1");
      if (c == '1') x[v] += layout.p[i];
    }
  }
  return x;
}

std::vector<Vector> decode_samples(const std::vector<std::string>& bits, const PrecisionLayout& layout) {
  std::vector<Vector> out;
  out.reserve(bits.size());
  for (const auto& b : bits) out.push_back(decode_bits(b, layout));
  return out;
}

Vector ising_diagonal(const IsingModel& m) {
  if (m.n > 24) throw ResourceError("dense diagonal limited to 24 qubits");
  const std::uint64_t size = std::uint64_t{1} << m.n;
  Vector d(static_cast<Eigen::Index>(size));
  for (std::uint64_t i = 0; i < size; ++i) d[static_cast<Eigen::Index>(i)] = m.energy_of_basis(i);
  return d;
}

Eigen::MatrixXd dense_pauli_sum(int n, char axis) {
  if (n > 14) throw ResourceError("dense operators limited to 14 qubits");
  const Eigen::Index size = Eigen::Index{1} << n;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Index mask = Eigen::Index{1} << (n - 1 - j);
      if (axis == 'x') s(i ^ mask, i) += 1.0;
      else if (axis == 'z') s(i, i) += (i & mask) ? -1.0 : 1.0;
      else throw InvalidArgument("pauli axis must be x or z");
    }
  }
  return s;
}

AnnealEnvelope anneal_rescale(const Schedule& sched, int r, const MachineSpec& machine) {
  if (r < 1) throw InvalidArgument("resolution must be positive");
  if (!(machine.t_f > 0.0) || !(machine.A0_over_h > 0.0)) throw InvalidArgument("machine parameters must be positive");
  const double phi0 = sched.e_phi(0.0);
  if (!(phi0 > 0.0) || !std::isfinite(phi0)) throw InvalidArgument("e^phi(0) must be positive and finite");
  const double r32 = std::pow(static_cast<double>(r), 1.5);
  const double lambda = machine.A0_over_h / (r32 * phi0);
  AnnealEnvelope env;
  env.lambda = lambda;
  env.t_f = machine.t_f;
  auto phi = sched.e_phi;
  auto chi = sched.e_chi;
  env.A_over_h = [phi, lambda, r32](double xi) { return lambda * r32 * phi(lambda * xi); };
  env.B_over_h = [chi, lambda](double xi) { return 2.0 * lambda * chi(lambda * xi); };
  return env;
}

AnnealEnvelope surrogate_envelope(const Schedule& piecewise, double t_f, double A0_over_h, double B1_over_h,
                                  double time_unit) {
  if (piecewise.kind != ScheduleKind::piecewise_anneal) throw InvalidArgument("surrogate needs a piecewise schedule");
  AnnealEnvelope env;
  env.lambda = 1.0;
  env.t_f = t_f;
  Schedule s = piecewise;
  env.A_over_h = [s, A0_over_h, time_unit](double xi) { return A0_over_h * (1.0 - s.progress(xi / time_unit)); };
  env.B_over_h = [s, B1_over_h, time_unit](double xi) {
    const double p = s.progress(xi / time_unit);
    return B1_over_h * p * p;
  };
  return env;
}

EncodingReport verify_subspace_encoding(const Eigen::MatrixXd& H_dense, const Eigen::MatrixXd& V,
                                        const Eigen::MatrixXd& H_target, double tol) {
  if (H_dense.rows() != H_dense.cols() || V.rows() != H_dense.rows() || H_target.rows() != V.cols() ||
      H_target.cols() != V.cols())
    throw InvalidArgument("shapes are not conformable");
  const Eigen::MatrixXd HV = H_dense * V;
  const Eigen::MatrixXd proj = V.transpose() * HV;
  const Eigen::MatrixXd leak = HV - V * proj;
  EncodingReport r;
  r.leakage = leak.size() ? leak.cwiseAbs().maxCoeff() : 0.0;
  r.mismatch = (proj - H_target).cwiseAbs().maxCoeff();
  r.pass = r.leakage <= tol && r.mismatch <= tol;
  return r;
}

}  // namespace qhd
