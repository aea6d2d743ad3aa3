#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "eikonal/metrics.hpp"
#include "eikonal/problem.hpp"
#include "eikonal/slowness.hpp"
#include "eikonal/theta.hpp"
#include "eikonal/twoscale.hpp"

namespace eikonal {

/// Failure to read a config or write an artifact.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Geometry { Square, ModelStrip };

struct ExperimentConfig {
  int dimension = 2;
  int n = 10;
  int m = 50;
  Geometry geometry = Geometry::Square;
  std::string slowness_kind = "constant";
  nlohmann::json slowness_params = nlohmann::json::object();
  BoundarySpec gamma;

  TwoScaleOptions solver;
  ModelOptions model;

  std::filesystem::path out_dir = "out";
  bool timing = false;
  int snapshot_every = 0;

  std::uint64_t seed = 0;
  int trials = 1;
  double memory_budget_mb = 2048.0;

  std::vector<FlopModel> speedup_cases;

  /// Every field above, defaults expanded, in the input schema.
  nlohmann::json resolved;
};

/// Builds a config from a parsed document. `source` is the original text;
/// when given, error messages carry the line of the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::string& source = {});

/// Reads and parses a JSON config file. Syntax errors become ConfigError
/// with a "line L, column C" prefix; an unreadable file raises IoError.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Command-line overrides, applied after parsing. Negative values and empty
/// strings mean "not given".
struct Overrides {
  int workers = -1;
  long long seed = -1;
  std::string out_dir;
  int snapshot_every = -1;
};

void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

/// Bytes a run is expected to need; checked against memory_budget_mb.
double estimated_memory_mb(const ExperimentConfig& config);

SlownessField make_slowness(const ExperimentConfig& config, std::uint64_t seed);

/// Formats a double with 17 significant digits; INF becomes "inf".
std::string format_number(double v);

// Commands. Each writes its artifacts under config.out_dir, logs a short
// summary to `log` and returns the process exit status.
int cmd_run(const ExperimentConfig& config, std::ostream& log);
int cmd_reference(const ExperimentConfig& config, std::ostream& log);
int cmd_model(const ExperimentConfig& config, std::ostream& log);
int cmd_speedup(const ExperimentConfig& config, std::ostream& log);

}  // namespace eikonal
