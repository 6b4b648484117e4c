#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specid/dmd.hpp"

namespace specid {

inline constexpr int kConfigSchemaVersion = 1;

enum class RunMode { data, oracle };
std::string to_string(RunMode mode);
RunMode parse_mode(const std::string& s);

enum class IdentifyMethod { algorithm1, hull_extend, real_axis, hull_moments };
std::string to_string(IdentifyMethod method);
IdentifyMethod parse_method(const std::string& s);

struct GraphSpec {
  std::string generator = "erdos_renyi";  // erdos_renyi | dense_uniform
  int n = 10;
  double p_edge = 0.65;
  bool symmetrize = true;
};

struct ModelSpec {
  // linear | brusselator | matrices | random_linear
  std::string preset = "linear";
  std::map<std::string, double> parameters;
  // Only for preset "matrices"; C in gradient convention (m x r).
  std::optional<Eigen::MatrixXd> A, B, C;
};

struct SimulationSpec {
  int q = 10;
  int K = 25;
  double dt = 0.4;
  double width = 1e-4;
  int substeps = 10;
};

struct DmdSpec {
  int delays = 2;
  double svd_tol = 1e-10;
  std::vector<int> selector{0};
  EmbeddingLayout layout = EmbeddingLayout::stacked;
  Centering centering = Centering::equilibrium;
};

struct IdentifySpec {
  double epsilon = 0.05;
  IdentifyMethod method = IdentifyMethod::algorithm1;
  int k_max = 0;  // 0: use n
  double pencil_tol = 1e-7;
  double oracle_match_tol = 0.0;  // 0: use epsilon
  bool refine_lambda2 = false;
  std::optional<double> delta;  // accepted for Table-style configs, unused
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name = "experiment";
  std::uint64_t seed = 1;
  RunMode mode = RunMode::data;
  GraphSpec graph;
  ModelSpec model;
  SimulationSpec simulation;
  DmdSpec dmd;
  IdentifySpec identify;
  std::string output_dir;

  void validate() const;
  int k_max() const { return identify.k_max > 0 ? identify.k_max : graph.n; }
  double match_tol() const {
    return identify.oracle_match_tol > 0 ? identify.oracle_match_tol : identify.epsilon;
  }
};

/// Parses and validates a JSON config. Unknown or unused keys produce
/// warnings, never errors.
ExperimentConfig parse_config(const std::string& json_text,
                              std::vector<std::string>* warnings = nullptr);
ExperimentConfig load_config(const std::string& path,
                             std::vector<std::string>* warnings = nullptr);

/// Fully resolved config, including defaults, as pretty-printed JSON.
std::string config_to_json(const ExperimentConfig& config);

/// Independent sub-seeds derived from the experiment seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace specid
