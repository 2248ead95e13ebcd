#include "qhd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qhd/errors.hpp"

namespace qhd {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw InvalidArgument("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

std::string qubo_to_text(const QuboModel& m) {
  std::string s = "# qubo n=" + std::to_string(m.n) + " offset=" + format_double(m.offset) + "\n";
  for (int j = 0; j < m.n; ++j) s += std::to_string(j) + " " + std::to_string(j) + " " + format_double(m.linear[j]) + "\n";
  for (const auto& [key, v] : m.quadratic)
    s += std::to_string(key.first) + " " + std::to_string(key.second) + " " + format_double(v) + "\n";
  return s;
}

std::string ising_to_text(const IsingModel& m) {
  std::string s = "# ising n=" + std::to_string(m.n) + " offset=" + format_double(m.offset) + "\n";
  for (int j = 0; j < m.n; ++j) s += std::to_string(j) + " " + std::to_string(j) + " " + format_double(m.h[j]) + "\n";
  // (k, j) ascending with k < j
  std::map<std::pair<int, int>, double> upper;
  for (const auto& [key, v] : m.J) upper[{key.second, key.first}] = v;
  for (const auto& [key, v] : upper)
    s += std::to_string(key.first) + " " + std::to_string(key.second) + " " + format_double(v) + "\n";
  return s;
}

namespace {

struct ParsedModel {
  std::string kind;
  int n = 0;
  double offset = 0.0;
  std::vector<std::tuple<int, int, double>> terms;
};

double parse_number(const std::string& tok) {
  if (tok == "inf" || tok == "-inf" || tok == "nan") throw InvalidArgument("model coefficients must be finite");
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) throw InvalidArgument("bad number: " + tok);
  return v;
}

ParsedModel parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty model file");
  ParsedModel pm;
  {
    std::istringstream h(line);
    std::string hash, n_tok, off_tok;
    h >> hash >> pm.kind >> n_tok >> off_tok;
    if (hash != "#" || (pm.kind != "qubo" && pm.kind != "ising") || n_tok.rfind("n=", 0) != 0 ||
        off_tok.rfind("offset=", 0) != 0)
      throw InvalidArgument("bad model header: " + line);
    pm.n = std::stoi(n_tok.substr(2));
    pm.offset = parse_number(off_tok.substr(7));
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream l(line);
    int i = 0, j = 0;
    std::string v;
    if (!(l >> i >> j >> v)) throw InvalidArgument("bad model line: " + line);
    if (i < 0 || j < 0 || i >= pm.n || j >= pm.n || i > j) throw InvalidArgument("bad term index: " + line);
    pm.terms.emplace_back(i, j, parse_number(v));
  }
  return pm;
}

}  // namespace

QuboModel qubo_from_text(const std::string& text) {
  ParsedModel pm = parse_model(text);
  if (pm.kind != "qubo") throw InvalidArgument("not a qubo model");
  QuboModel m = make_qubo(pm.n);
  m.offset = pm.offset;
  for (auto [i, j, v] : pm.terms) {
    if (i == j) m.linear[i] += v;
    else m.quadratic[{i, j}] += v;
  }
  return m;
}

IsingModel ising_from_text(const std::string& text) {
  ParsedModel pm = parse_model(text);
  if (pm.kind != "ising") throw InvalidArgument("not an ising model");
  IsingModel m = make_ising(pm.n);
  m.offset = pm.offset;
  for (auto [i, j, v] : pm.terms) {
    if (i == j) m.h[i] += v;
    else m.J[{j, i}] += v;
  }
  return m;
}

IsingModel model_from_text(const std::string& text) {
  if (text.rfind("# qubo", 0) == 0) return qubo_to_ising(qubo_from_text(text));
  return ising_from_text(text);
}

static nlohmann::json mesh_json(const Mesh& m) {
  return {{"dim", m.dim()}, {"cells_per_edge", m.cells_per_edge()}, {"boundary", to_string(m.boundary())}};
}

std::string wavefunction_to_json(const WaveFunction& psi) {
  nlohmann::json j;
  j["mesh"] = mesh_json(psi.mesh());
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i)
    arr.push_back({psi.amplitudes()[i].real(), psi.amplitudes()[i].imag()});
  j["amplitudes"] = std::move(arr);
  return j.dump() + "\n";
}

WaveFunction wavefunction_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& m = j.at("mesh");
    const std::string b = m.at("boundary").get<std::string>();
    if (b != "periodic" && b != "dirichlet") throw InvalidArgument("unknown boundary: " + b);
    Mesh mesh(m.at("dim").get<int>(), m.at("cells_per_edge").get<int>(),
              b == "periodic" ? Boundary::periodic : Boundary::dirichlet);
    const auto& arr = j.at("amplitudes");
    if (arr.size() != mesh.size()) throw InvalidArgument("amplitude count does not match the mesh");
    CVector a(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) a[i] = {arr[i].at(0).get<double>(), arr[i].at(1).get<double>()};
    return WaveFunction(mesh, std::move(a));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed wavefunction: ") + e.what());
  }
}

std::string density_to_json(const WaveFunction& psi, double t) {
  nlohmann::json j;
  j["t"] = t;
  j["mesh"] = mesh_json(psi.mesh());
  const Vector p = psi.density();
  j["density"] = std::vector<double>(p.data(), p.data() + p.size());
  return j.dump() + "\n";
}

}  // namespace qhd
