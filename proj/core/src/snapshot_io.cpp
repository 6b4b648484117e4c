#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "specid/error.hpp"
#include "specid/snapshots.hpp"

namespace specid {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<Eigen::MatrixXd> SnapshotSet::measured() const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(trajectories.size());
  for (const auto& t : trajectories) out.push_back(measure(t, selector));
  return out;
}

void SnapshotSet::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("snapshot set: dt must be positive");
  if (trajectories.empty()) throw InvalidArgument("snapshot set: no trajectories");
  const auto dim = trajectories.front().rows();
  for (const auto& t : trajectories) {
    if (t.rows() != dim || t.cols() != K + 1) {
      throw InvalidArgument("snapshot set: trajectories must share K and dimension");
    }
  }
  if (selector.empty() || static_cast<Eigen::Index>(selector.size()) > dim) {
    throw InvalidArgument("snapshot set: selector size must be in [1, mn]");
  }
}

namespace {

std::string trajectory_name(int j) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "traj_%03d.csv", j);
  return buf;
}

}  // namespace

void write_snapshot_set(const fs::path& dir, const SnapshotSet& set) {
  set.validate();
  fs::create_directories(dir);
  for (int j = 0; j < set.q(); ++j) {
    const auto& traj = set.trajectories[j];
    std::ofstream out(dir / trajectory_name(j));
    if (!out) throw IoError("cannot write " + (dir / trajectory_name(j)).string());
    out << 't';
    for (Eigen::Index c = 0; c < traj.rows(); ++c) out << ",x_" << c + 1;
    out << '\n';
    for (Eigen::Index k = 0; k < traj.cols(); ++k) {
      out << detail::format_double(static_cast<double>(k) * set.dt);
      for (Eigen::Index c = 0; c < traj.rows(); ++c) {
        out << ',' << detail::format_double(traj(c, k));
      }
      out << '\n';
    }
  }
  json meta = {{"q", set.q()},
               {"K", set.K},
               {"dt", set.dt},
               {"state_dimension", set.state_dimension()},
               {"selector", set.selector},
               {"seed", set.seed},
               {"model", set.model},
               {"parameters", set.parameters},
               {"substeps", set.substeps},
               {"width", set.width}};
  std::ofstream out(dir / "snapshots.json");
  if (!out) throw IoError("cannot write " + (dir / "snapshots.json").string());
  out << meta.dump(2) << '\n';
}

SnapshotSet read_snapshot_set(const fs::path& dir) {
  const fs::path meta_path = dir / "snapshots.json";
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw IoError("missing snapshot sidecar: expected " + meta_path.string());
  json meta;
  try {
    meta = json::parse(meta_in);
  } catch (const json::exception& e) {
    throw IoError("malformed " + meta_path.string() + ": " + e.what());
  }
  SnapshotSet set;
  set.dt = meta.at("dt").get<double>();
  set.K = meta.at("K").get<int>();
  set.selector = meta.at("selector").get<std::vector<int>>();
  set.seed = meta.value("seed", std::uint64_t{0});
  set.model = meta.value("model", std::string{});
  set.parameters = meta.value("parameters", std::map<std::string, double>{});
  set.substeps = meta.value("substeps", 0);
  set.width = meta.value("width", 0.0);
  const int q = meta.at("q").get<int>();
  const int dim = meta.at("state_dimension").get<int>();

  for (int j = 0; j < q; ++j) {
    const fs::path path = dir / trajectory_name(j);
    std::ifstream in(path);
    if (!in) throw IoError("missing trajectory file: expected " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,", 0) != 0) {
      throw IoError(path.string() + ": missing `t,x_1,...` header");
    }
    Trajectory traj(dim, set.K + 1);
    for (int k = 0; k <= set.K; ++k) {
      if (!detail::next_data_line(in, line)) {
        throw IoError(path.string() + ": expected " + std::to_string(set.K + 1) + " rows");
      }
      auto fields = detail::split(line);
      if (static_cast<int>(fields.size()) != dim + 1) {
        throw IoError(path.string() + ": row " + std::to_string(k) + " has wrong width");
      }
      for (int c = 0; c < dim; ++c) traj(c, k) = detail::parse_double(fields[c + 1]);
    }
    set.trajectories.push_back(std::move(traj));
  }
  set.validate();
  return set;
}

}  // namespace specid
