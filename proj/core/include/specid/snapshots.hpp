#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "specid/dynamics.hpp"

namespace specid {

/// q simulated trajectories sharing dt, K and the state dimension m*n.
struct SnapshotSet {
  double dt = 0.0;
  int K = 0;
  std::vector<Trajectory> trajectories;  // each (m*n) x (K+1)
  std::vector<int> selector{0};          // measured coordinates

  // Provenance recorded in the sidecar.
  std::uint64_t seed = 0;
  std::string model;
  std::map<std::string, double> parameters;
  int substeps = 0;
  double width = 0.0;

  int q() const noexcept { return static_cast<int>(trajectories.size()); }
  int state_dimension() const noexcept {
    return trajectories.empty() ? 0 : static_cast<int>(trajectories.front().rows());
  }

  /// Measured series per trajectory, each p x (K+1).
  std::vector<Eigen::MatrixXd> measured() const;
  void validate() const;
};

// Layout on disk: traj_000.csv ... with header `t,x_1,...,x_{mn}` and a
// snapshots.json sidecar (q, K, dt, selector, seed, model, parameters).
void write_snapshot_set(const std::filesystem::path& dir, const SnapshotSet& set);
SnapshotSet read_snapshot_set(const std::filesystem::path& dir);

}  // namespace specid
