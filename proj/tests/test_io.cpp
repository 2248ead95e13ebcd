#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

#include "qhd/errors.hpp"
#include "qhd/io.hpp"

using namespace qhd;

TEST_CASE("shortest round-trip doubles") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-9) == "-2.5e-09");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("qubo text round trip") {
  QuboModel m = make_qubo(3);
  m.linear << 0.5, -1.0 / 3, 0.0;
  m.quadratic[{0, 2}] = 0.25;
  m.quadratic[{1, 2}] = -7e-12;
  m.offset = 1.0 / 7;
  const std::string text = qubo_to_text(m);
  CHECK(text.rfind("# qubo n=3 offset=", 0) == 0);
  const QuboModel back = qubo_from_text(text);
  CHECK(back.n == 3);
  CHECK(back.offset == m.offset);
  CHECK((back.linear - m.linear).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.quadratic == m.quadratic);
  CHECK(qubo_to_text(back) == text);
}

TEST_CASE("ising text round trip") {
  IsingModel m = make_ising(3);
  m.h << -0.125, 0.0, 2.0;
  m.J[{1, 0}] = 0.0625;
  m.J[{2, 1}] = -0.3;
  m.offset = 0.1875;
  const std::string text = ising_to_text(m);
  CHECK(text.rfind("# ising n=3 offset=0.1875\n", 0) == 0);
  CHECK(text.find("0 1 0.0625\n") != std::string::npos);
  const IsingModel back = ising_from_text(text);
  CHECK(back.J == m.J);
  CHECK((back.h - m.h).cwiseAbs().maxCoeff() == 0.0);
  CHECK(ising_to_text(back) == text);
  // qubo input to the generic reader becomes ising with equal energies
  QuboModel q = make_qubo(2);
  q.linear << 1.0, -0.5;
  q.quadratic[{0, 1}] = 2.0;
  const IsingModel s = model_from_text(qubo_to_text(q));
  for (std::uint64_t i = 0; i < 4; ++i) CHECK(s.energy_of_basis(i) == doctest::Approx(q.energy_of_basis(i)));
}

TEST_CASE("malformed model files") {
  CHECK_THROWS_AS(qubo_from_text(""), InvalidArgument);
  CHECK_THROWS_AS(qubo_from_text("# qubits n=2 offset=0\n"), InvalidArgument);
  CHECK_THROWS_AS(qubo_from_text("# qubo n=2\n"), InvalidArgument);
  CHECK_THROWS_AS(qubo_from_text("# qubo n=2 offset=0\n0 5 1\n"), InvalidArgument);
  CHECK_THROWS_AS(qubo_from_text("# qubo n=2 offset=0\n1 0 1\n"), InvalidArgument);
  CHECK_THROWS_AS(qubo_from_text("# qubo n=2 offset=0\n0 1 x\n"), InvalidArgument);
  CHECK_THROWS_AS(qubo_from_text("# qubo n=2 offset=0\n0 1 inf\n"), InvalidArgument);
  CHECK_THROWS_AS(ising_from_text("# qubo n=2 offset=0\n"), InvalidArgument);
}

TEST_CASE("wavefunction json round trip") {
  const Mesh m = Mesh::periodic(2, 4);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  CVector a(16);
  for (auto& z : a) z = {g(rng), g(rng)};
  const WaveFunction psi = WaveFunction::normalized(m, a);
  const WaveFunction back = wavefunction_from_json(wavefunction_to_json(psi));
  CHECK(back.mesh() == m);
  CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(wavefunction_from_json("{}"), InvalidArgument);

  const auto j = nlohmann::json::parse(density_to_json(psi, 0.5));
  CHECK(j["t"].get<double>() == 0.5);
  CHECK(j["density"].size() == 16);
  double total = 0.0;
  for (const auto& v : j["density"]) total += v.get<double>();
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("csv writer") {
  CsvWriter w({"a", "b"});
  w.row({"1", "2"});
  CHECK(w.text() == "a,b\n1,2\n");
  CHECK_THROWS_AS(w.row({"1"}), InvalidArgument);
}
