#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qhd/errors.hpp"
#include "qhd/mesh.hpp"
#include "qhd/objectives.hpp"

using namespace qhd;

namespace {

Objective poly1d(std::function<double(double)> g) {
  Objective f;
  f.name = "poly";
  f.dim = 1;
  f.eval = [g](const Vector& x) { return g(x[0]); };
  f.grad = [](const Vector& x) { return Vector::Zero(x.size()); };
  return f;
}

}  // namespace

TEST_CASE("mesh indexing is row-major with axis 0 slowest") {
  const Mesh m = Mesh::dirichlet(3, 2);
  CHECK(m.nodes_per_edge() == 3);
  CHECK(m.size() == 27);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto idx = m.multi_index(i);
    CHECK(m.flat_index(idx) == i);
  }
  CHECK(m.multi_index(5) == std::vector<int>{0, 1, 2});
  CHECK(m.stride(0) == 9);
  CHECK(m.stride(2) == 1);
  const Mesh p = Mesh::periodic(2, 4);
  CHECK(p.size() == 16);
  CHECK(p.point(5)[0] == doctest::Approx(0.25));
  CHECK(p.point(5)[1] == doctest::Approx(0.25));
  CHECK_THROWS_AS(Mesh(0, 4, Boundary::periodic), InvalidArgument);
  CHECK_THROWS_AS(Mesh(1, 0, Boundary::dirichlet), InvalidArgument);
}

TEST_CASE("fdm laplacian and position operators on r=2") {
  const Mesh m = Mesh::dirichlet(1, 2);
  const FdmOperators ops = build_fdm_operators(m);
  const Eigen::MatrixXd L(ops.laplacian);
  Eigen::MatrixXd expect(3, 3);
  expect << -2, 1, 0, 1, -2, 1, 0, 1, -2;
  expect *= 4.0;
  CHECK((L - expect).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(ops.position.size() == 1);
  CHECK(ops.position[0].values()[0] == 0.0);
  CHECK(ops.position[0].values()[1] == 0.5);
  CHECK(ops.position[0].values()[2] == 1.0);
}

TEST_CASE("unit square adjacency has four edges") {
  const SparseMatrix A = lattice_adjacency(Mesh::dirichlet(2, 1));
  CHECK(A.nonZeros() == 2 * 2 * 2);
  const Eigen::MatrixXd D(A);
  CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pinned operator acts on interior nodes only") {
  const Mesh m = Mesh::dirichlet(2, 4);
  const FdmOperators ops = build_fdm_operators(m, BoundaryNodes::pinned);
  CHECK(ops.active.size() == 9);
  CHECK(ops.laplacian.rows() == 9);
  for (auto node : ops.active)
    for (int j : m.multi_index(node)) CHECK((j > 0 && j < 4));
}

TEST_CASE("laplacian is symmetric with zero row sums in the interior") {
  const Mesh m = Mesh::dirichlet(2, 5);
  const Eigen::MatrixXd L(build_fdm_operators(m).laplacian);
  CHECK((L - L.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto idx = m.multi_index(i);
    bool interior = true;
    for (int j : idx) interior = interior && j > 0 && j < 5;
    if (interior) CHECK(std::abs(L.row(static_cast<Eigen::Index>(i)).sum()) < 1e-9);
  }
}

TEST_CASE("discretize_objective evaluates nodes") {
  const Mesh m = Mesh::dirichlet(1, 2);
  const auto sq = discretize_objective(m, poly1d([](double x) { return x * x; }));
  CHECK(sq.values()[0] == 0.0);
  CHECK(sq.values()[1] == 0.25);
  CHECK(sq.values()[2] == 1.0);
  const auto half = discretize_objective(m, poly1d([](double x) { return 0.5 * x * x; }));
  CHECK(half.values()[1] == 0.125);
  CHECK(half.values()[2] == 0.5);
  CHECK_THROWS_AS(discretize_objective(m, poly1d([](double) { return NAN; })), EvaluationError);
  CHECK_THROWS_AS(discretize_objective(Mesh::dirichlet(2, 2), poly1d([](double x) { return x; })), InvalidArgument);
}

TEST_CASE("levy node at the mapped minimizer is zero") {
  const Objective f = levy2();
  const Mesh m = Mesh::dirichlet(2, 20);
  const auto vals = discretize_objective(m, f);
  const int j = 11;  // 0.55 * 20
  const std::vector<int> idx{j, j};
  CHECK(std::abs(vals.values()[static_cast<Eigen::Index>(m.flat_index(idx))]) < 1e-12);
}

TEST_CASE("uniform state") {
  const WaveFunction u = uniform_state(Mesh::dirichlet(1, 2));
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(u.amplitudes()[i].real() == doctest::Approx(1.0 / std::sqrt(3.0)));
  const WaveFunction p = uniform_state(Mesh::periodic(2, 4));
  for (Eigen::Index i = 0; i < 16; ++i) CHECK(p.amplitudes()[i].real() == doctest::Approx(0.25));
  CHECK(p.norm() == doctest::Approx(1.0));
}

TEST_CASE("gaussian state") {
  SUBCASE("symmetric about the center") {
    const Mesh m = Mesh::dirichlet(1, 40);
    Vector c(1);
    c << 0.5;
    const WaveFunction g = gaussian_state(m, c, 1.0);
    for (int j = 0; j <= 40; ++j) CHECK(std::abs(g.amplitudes()[j] - g.amplitudes()[40 - j]) < 1e-15);
    for (int j = 0; j <= 40; ++j) CHECK(g.amplitudes()[j].imag() == 0.0);
  }
  SUBCASE("unit variance on a wide domain") {
    const double L = 16.0;
    const Mesh m = Mesh::periodic(1, 512);
    Vector c(1);
    c << 0.5;
    const Vector p = gaussian_state(m, c, 1.0 / (L * L)).density();
    double var = 0.0;
    for (int j = 0; j < 512; ++j) {
      const double x = L * (m.point(j)[0] - 0.5);
      var += x * x * p[j];
    }
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("very wide gaussian approaches uniform") {
    const Mesh m = Mesh::dirichlet(2, 10);
    Vector c(2);
    c << 0.3, 0.7;
    const WaveFunction g = gaussian_state(m, c, 1e8);
    CHECK((g.amplitudes() - uniform_state(m).amplitudes()).cwiseAbs().maxCoeff() < 1e-3);
  }
  Vector bad(1);
  bad << 0.5;
  CHECK_THROWS_AS(gaussian_state(Mesh::dirichlet(1, 4), bad, -1.0), InvalidArgument);
}

TEST_CASE("expectation values") {
  const Mesh m = Mesh::dirichlet(1, 2);
  const auto x = build_fdm_operators(m).position[0];
  CHECK(expectation(uniform_state(m), x) == doctest::Approx(0.5));
  CHECK(expectation(point_mass(m, 2), x) == doctest::Approx(1.0));
  const auto sq = discretize_objective(m, poly1d([](double v) { return v * v; }));
  CHECK(expectation(uniform_state(m), sq) == doctest::Approx(5.0 / 12.0));
  CHECK_THROWS_AS(expectation(uniform_state(Mesh::dirichlet(1, 3)), x), InvalidArgument);
}

TEST_CASE("wavefunction construction enforces unit norm") {
  const Mesh m = Mesh::dirichlet(1, 1);
  CVector a(2);
  a << 1.0, 1.0;
  CHECK_THROWS_AS(WaveFunction(m, a), InvalidArgument);
  CHECK(WaveFunction::normalized(m, a).norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(WaveFunction::normalized(m, CVector::Zero(2)), InvalidArgument);
}

TEST_CASE("sampling") {
  SUBCASE("point mass") {
    const Mesh m = Mesh::dirichlet(2, 3);
    for (const auto& x : sample_positions(point_mass(m, 7), 100, 3)) CHECK((x - m.point(7)).norm() == 0.0);
  }
  SUBCASE("uniform frequencies within 5 sigma") {
    const Mesh m = Mesh::dirichlet(1, 9);
    const int shots = 100000;
    const auto idx = sample_indices(uniform_state(m), shots, 12345);
    std::vector<int> counts(10, 0);
    for (auto i : idx) ++counts[i];
    const double p = 0.1, sigma = std::sqrt(shots * p * (1 - p));
    for (int c : counts) CHECK(std::abs(c - shots * p) < 5 * sigma);
  }
  SUBCASE("fixed seed reproduces") {
    const Mesh m = Mesh::dirichlet(2, 5);
    const WaveFunction g = gaussian_state(m, Vector::Constant(2, 0.4), 0.05);
    CHECK(sample_indices(g, 500, 77) == sample_indices(g, 500, 77));
    CHECK(sample_indices(g, 500, 77) != sample_indices(g, 500, 78));
  }
  CHECK_THROWS_AS(sample_indices(uniform_state(Mesh::dirichlet(1, 2)), 0, 1), InvalidArgument);
}

TEST_CASE("success probability") {
  const Mesh m = Mesh::dirichlet(2, 8);
  Vector xs = m.point(30);
  CHECK(success_probability(point_mass(m, 30), xs, 0.1) == 1.0);
  CHECK(success_probability(uniform_state(m), xs, std::sqrt(2.0) + 1e-9) == doctest::Approx(1.0));

  const Mesh line = Mesh::dirichlet(1, 100);
  Vector c(1);
  c << 0.5;
  // nodes strictly inside (0.4, 0.6): j = 41..59
  const int inside = 19;
  CHECK(success_probability(uniform_state(line), c, 0.1) == doctest::Approx(inside / 101.0));
  CHECK(success_probability(uniform_state(line), c, 0.1) == doctest::Approx(0.188).epsilon(0.01));
}
