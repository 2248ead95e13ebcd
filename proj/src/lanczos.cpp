#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include <Eigen/SparseCholesky>

#include "qhd/errors.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

namespace {

using Mat = Eigen::MatrixXd;

struct RitzPairs {
  Vector theta;  // descending
  Mat vectors;
  Vector residual;
};

void orthogonalize(Vector& w, const Mat& basis, Eigen::Index cols) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Vector c = basis.leftCols(cols).transpose() * w;
    w.noalias() -= basis.leftCols(cols) * c;
  }
}

// Largest `want` eigenpairs of `op` restricted to the complement of `locked`.
RitzPairs lanczos(const std::function<Vector(const Vector&)>& op, const Mat& locked, Eigen::Index n_locked,
                  Vector start, int max_basis, int want, double tol) {
  const Eigen::Index n = start.size();
  const int m = static_cast<int>(std::min<Eigen::Index>(max_basis, n - n_locked));
  Mat Q(n, m + 1);
  std::vector<double> alpha, beta;
  orthogonalize(start, locked, n_locked);
  start.normalize();
  Q.col(0) = start;

  RitzPairs out;
  for (int j = 0; j < m; ++j) {
    Vector w = op(Q.col(j));
    const double a = Q.col(j).dot(w);
    alpha.push_back(a);
    orthogonalize(w, Q, j + 1);
    orthogonalize(w, locked, n_locked);
    const double b = w.norm();
    const int size = j + 1;
    const bool last = (j + 1 == m);
    const bool exhausted = b <= 1e-13 * std::max(1.0, std::abs(a));
    if (size >= want && (size % 5 == 0 || last || exhausted)) {
      Mat T = Mat::Zero(size, size);
      for (int i = 0; i < size; ++i) T(i, i) = alpha[i];
      for (int i = 0; i + 1 < size; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
      Eigen::SelfAdjointEigenSolver<Mat> es(T);
      const Vector& ev = es.eigenvalues();
      const double scale = std::max(std::abs(ev[0]), std::abs(ev[size - 1]));
      out.theta.resize(want);
      out.residual.resize(want);
      Mat S(size, want);
      bool ok = true;
      for (int i = 0; i < want; ++i) {
        const int idx = size - 1 - i;
        out.theta[i] = ev[idx];
        out.residual[i] = exhausted ? 0.0 : std::abs(b * es.eigenvectors()(size - 1, idx));
        S.col(i) = es.eigenvectors().col(idx);
        if (out.residual[i] > tol * scale) ok = false;
      }
      if (ok || last || exhausted) {
        out.vectors = Q.leftCols(size) * S;
        for (int i = 0; i < want; ++i) out.residual[i] /= std::max(scale, 1e-300);
        return out;
      }
    }
    if (exhausted) break;
    beta.push_back(b);
    Q.col(j + 1) = w / b;
  }
  // Krylov space smaller than `want`
  const int size = static_cast<int>(alpha.size());
  Mat T = Mat::Zero(size, size);
  for (int i = 0; i < size; ++i) T(i, i) = alpha[i];
  for (int i = 0; i + 1 < size; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
  Eigen::SelfAdjointEigenSolver<Mat> es(T);
  const int got = std::min(want, size);
  out.theta.resize(got);
  out.residual = Vector::Zero(got);
  Mat S(size, got);
  for (int i = 0; i < got; ++i) {
    out.theta[i] = es.eigenvalues()[size - 1 - i];
    S.col(i) = es.eigenvectors().col(size - 1 - i);
  }
  out.vectors = Q.leftCols(size) * S;
  return out;
}

void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0) v = -v;
}

}  // namespace

double inf_norm(const SparseMatrix& H) {
  Vector rows = Vector::Zero(H.rows());
  for (int c = 0; c < H.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(H, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

double max_residual(const SparseMatrix& H, const EigenSystem& eig) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const Vector v = eig.eigenvectors.col(i);
    r = std::max(r, (H * v - eig.eigenvalues[i] * v).norm());
  }
  return r;
}

double orthonormality_error(const EigenSystem& eig) {
  const Eigen::Index k = eig.eigenvectors.cols();
  const Mat g = eig.eigenvectors.transpose() * eig.eigenvectors;
  return (g - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
}

EigenSystem dense_lowest_eigenpairs(const Eigen::MatrixXd& H, int k) {
  if (k < 1 || k > H.rows()) throw InvalidArgument("bad eigenpair count");
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  EigenSystem e;
  e.eigenvalues = es.eigenvalues().head(k);
  e.eigenvectors = es.eigenvectors().leftCols(k);
  for (int i = 0; i < k; ++i) fix_sign(e.eigenvectors.col(i));
  return e;
}

EigenSystem lowest_eigenpairs(const SparseMatrix& H, int k, const LanczosOptions& opts) {
  const Eigen::Index n = H.rows();
  if (H.cols() != n) throw InvalidArgument("operator must be square");
  if (k < 1 || k > 32 || k > n) throw InvalidArgument("eigenpair count must be in [1, 32] and at most the size");

  const double hnorm = inf_norm(H);
  double gersh = std::numeric_limits<double>::infinity();
  {
    Vector diag = Vector::Zero(n), off = Vector::Zero(n);
    for (int c = 0; c < H.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(H, c); it; ++it) {
        if (it.row() == it.col()) diag[it.row()] += it.value();
        else off[it.row()] += std::abs(it.value());
      }
    gersh = (diag - off).minCoeff();
  }

  std::function<Vector(const Vector&)> op;
  std::function<double(double)> to_lambda;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  const double sigma = gersh - 1e-3 * (hnorm + std::abs(gersh)) - 1e-300;
  bool inverted = false;
  if (opts.shift_invert) {
    SparseMatrix shifted = H;
    for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
    ldlt.compute(shifted);
    inverted = ldlt.info() == Eigen::Success;
  }
  if (inverted) {
    op = [&ldlt](const Vector& v) { return Vector(ldlt.solve(v)); };
  } else {
    op = [&H](const Vector& v) { return Vector(-(H * v)); };
  }

  std::mt19937_64 rng(opts.seed);
  auto random_start = [&]() {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    return v;
  };

  const Eigen::Index cap = std::min<Eigen::Index>(n, 3 * 32 + 8);
  Mat locked(n, cap);
  std::vector<double> lambdas;
  Eigen::Index n_locked = 0;
  int basis = opts.max_basis;
  int stalls = 0;
  std::vector<double> last_residuals;

  auto lock = [&](Vector v) {
    orthogonalize(v, locked, n_locked);
    const double nv = v.norm();
    if (nv < 1e-8) return false;
    v /= nv;
    locked.col(n_locked++) = v;
    lambdas.push_back(v.dot(H * v));
    return true;
  };

  for (int run = 0; run < opts.max_runs; ++run) {
    if (n_locked == n) break;
    const bool verifying = static_cast<int>(n_locked) >= k;
    const int want = verifying ? 1 : static_cast<int>(std::min<Eigen::Index>(k - n_locked, n - n_locked));
    RitzPairs rp = lanczos(op, locked, n_locked, random_start(), basis, want, opts.tol);
    last_residuals.assign(rp.residual.data(), rp.residual.data() + rp.residual.size());

    int added = 0;
    for (Eigen::Index i = 0; i < rp.theta.size(); ++i) {
      if (rp.residual[i] > opts.tol * 10.0) break;
      if (n_locked >= cap) break;
      if (verifying) {
        std::vector<double> sorted = lambdas;
        std::sort(sorted.begin(), sorted.end());
        const Vector v = rp.vectors.col(i).normalized();
        const double lam = v.dot(H * v);
        if (lam >= sorted[k - 1] - 1e-10 * std::max(1.0, hnorm)) {
          added = -1;  // nothing below the k-th locked value
          break;
        }
      }
      if (lock(rp.vectors.col(i))) ++added;
    }
    if (added < 0) {
      std::vector<int> order(lambdas.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lambdas[a] < lambdas[b]; });
      EigenSystem e;
      e.eigenvalues.resize(k);
      e.eigenvectors.resize(n, k);
      for (int i = 0; i < k; ++i) {
        e.eigenvalues[i] = lambdas[order[i]];
        e.eigenvectors.col(i) = locked.col(order[i]);
        fix_sign(e.eigenvectors.col(i));
      }
      const double res = max_residual(H, e);
      if (res > 1e-8 * std::max(hnorm, 1e-300)) {
        std::vector<double> all;
        for (int i = 0; i < k; ++i) {
          const Vector v = e.eigenvectors.col(i);
          all.push_back((H * v - e.eigenvalues[i] * v).norm());
        }
        throw ConvergenceError("eigenpair residuals above tolerance", all);
      }
      return e;
    }
    if (added == 0) {
      ++stalls;
      basis = static_cast<int>(std::min<Eigen::Index>(2 * basis, n));
      if (stalls > 6) break;
    } else {
      stalls = 0;
    }
  }
  if (n_locked == n && static_cast<int>(n_locked) >= k) {
    // the whole space is locked; nothing can be missing
    std::vector<int> order(lambdas.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lambdas[a] < lambdas[b]; });
    EigenSystem e;
    e.eigenvalues.resize(k);
    e.eigenvectors.resize(n, k);
    for (int i = 0; i < k; ++i) {
      e.eigenvalues[i] = lambdas[order[i]];
      e.eigenvectors.col(i) = locked.col(order[i]);
      fix_sign(e.eigenvectors.col(i));
    }
    return e;
  }
  throw ConvergenceError("lanczos did not converge", last_residuals);
}

}  // namespace qhd
