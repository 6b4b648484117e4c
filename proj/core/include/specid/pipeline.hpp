#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specid/config.hpp"
#include "specid/dmd.hpp"
#include "specid/dynamics.hpp"
#include "specid/geig.hpp"
#include "specid/graph.hpp"
#include "specid/identify.hpp"
#include "specid/snapshots.hpp"

namespace specid {

// Seed streams.
inline constexpr std::uint64_t kGraphStream = 1;
inline constexpr std::uint64_t kModelStream = 2;
inline constexpr std::uint64_t kInitialStateStream = 3;

WeightedGraph generate_graph(const ExperimentConfig& config);
UnitModel make_model(const ExperimentConfig& config);
SnapshotSet simulate_snapshots(const ExperimentConfig& config, const UnitModel& model,
                               const WeightedGraph& graph);

/// Estimated continuous-time spectrum from the measured snapshots.
RitzSpectrum run_dmd(const ExperimentConfig& config, const UnitModel& model,
                     const SnapshotSet& snapshots);

/// Exact sigma(J), packaged like a DMD result (oracle mode).
RitzSpectrum oracle_spectrum(const LinearizedSystem& sys, const WeightedGraph& graph);

struct IdentifyResult {
  CandidateSet candidates;
  Identification identification;
  std::optional<ExtendedSpectrum> extended;
  std::optional<HullMoments> moments;
  std::optional<double> lambda2_refined;
  ComplexList spectrum;  // output of the configured method
  std::vector<std::string> warnings;
};

IdentifyResult identify_from_candidates(const ExperimentConfig& config,
                                        CandidateSet candidates);
IdentifyResult identify_stage(const ExperimentConfig& config, const LinearizedSystem& sys,
                              const ComplexList& mus);

struct SpectrumReport {
  ExperimentConfig config;
  int n = 0;
  int m = 0;
  int m_bar = 0;
  double trace_bc = 0.0;
  LinearizedSystem system;
  Spectrum exact_laplacian;
  ComplexList exact_jacobian;
  RitzSpectrum estimated;  // DMD output, or the exact spectrum in oracle mode
  FeasibilityReport feasibility;
  std::optional<CrossTermReport> cross_terms;
  IdentifyResult result;
  std::optional<ComplexList> recursion_moments;  // oracle mode only
  OracleComparison oracle;
  double exact_m1 = 0.0;
  double exact_m2 = 0.0;
  std::vector<std::string> warnings;
};

SpectrumReport build_report(const ExperimentConfig& config, const WeightedGraph& graph,
                            const RitzSpectrum& estimated, IdentifyResult result);

/// Full chain. With a non-empty `out`, every intermediate artifact and the
/// report are written there.
SpectrumReport run_pipeline(const ExperimentConfig& config,
                            const std::filesystem::path& out = {});

// Artifact I/O shared by the pipeline and the staged CLI commands.
namespace artifacts {
inline constexpr const char* kConfig = "config.json";
inline constexpr const char* kGraph = "graph.csv";
inline constexpr const char* kSnapshots = "snapshots";
inline constexpr const char* kMu = "mu.csv";
inline constexpr const char* kDmd = "dmd.json";
inline constexpr const char* kCandidates = "candidates.csv";
inline constexpr const char* kIdentified = "identified.csv";
inline constexpr const char* kIdentify = "identify.json";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kPlots = "plots";

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void write_graph(const std::filesystem::path& dir, const WeightedGraph& g);
WeightedGraph read_graph(const std::filesystem::path& dir);

void write_estimate(const std::filesystem::path& dir, const ExperimentConfig& config,
                    const RitzSpectrum& estimated);
RitzSpectrum read_estimate(const std::filesystem::path& dir);

void write_identify(const std::filesystem::path& dir, const ExperimentConfig& config,
                    const IdentifyResult& result);
CandidateSet read_candidates(const std::filesystem::path& file, int m, int m_bar);

std::string report_to_json(const SpectrumReport& report);
void write_report(const std::filesystem::path& dir, const SpectrumReport& report);
}  // namespace artifacts

}  // namespace specid
