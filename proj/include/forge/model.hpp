#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forge/hamiltonian.hpp"

namespace forge {

struct LieAlgebraData {
  FiniteLieAlgebra algebra;
  std::vector<RationalVector> subalgebra;
};

struct AlgebroidModel {
  std::string name;
  LieAlgebroid algebroid;
  std::optional<PresymplecticStructure> omega;
  std::optional<Connection> connection;
  std::optional<AForm> momentum;
  std::vector<std::vector<VectorField>> orthogonal_frames;
  std::optional<LieAlgebraData> lie_algebra;
  // Explicit probe points for the pointwise checks, in addition to sampling.
  std::vector<std::vector<double>> points;

  const Chart& chart() const { return algebroid.chart; }
  const SampleDomain& domain() const { return algebroid.chart.domain; }
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

AlgebroidModel parse_model(const std::string& json_text);
AlgebroidModel load_model(const std::string& path);
std::string dump_model(const AlgebroidModel& m);

}  // namespace forge
