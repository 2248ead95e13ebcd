#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qhd/ising.hpp"
#include "qhd/mesh.hpp"

namespace qhd {

// Shortest decimal that round-trips to the same double; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Rows joined by commas, LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

// "# qubo n=<n> offset=<v>" then "<i> <j> <coeff>" lines, i == j linear, i < j quadratic.
std::string qubo_to_text(const QuboModel& m);
// Same layout with an "# ising" header; pair lines list (k, j) with k < j for J_{jk}.
std::string ising_to_text(const IsingModel& m);
QuboModel qubo_from_text(const std::string& text);
IsingModel ising_from_text(const std::string& text);
// Detects the header kind; QUBO input is converted to Ising.
IsingModel model_from_text(const std::string& text);

std::string wavefunction_to_json(const WaveFunction& psi);
WaveFunction wavefunction_from_json(const std::string& text);
// {"t":..., "mesh":{...}, "density":[...]}
std::string density_to_json(const WaveFunction& psi, double t);

}  // namespace qhd
