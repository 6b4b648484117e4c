#include "specid/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "specid/error.hpp"

namespace specid {

using nlohmann::json;

std::string to_string(RunMode mode) { return mode == RunMode::data ? "data" : "oracle"; }

RunMode parse_mode(const std::string& s) {
  if (s == "data") return RunMode::data;
  if (s == "oracle") return RunMode::oracle;
  throw InvalidArgument("unknown mode '" + s + "' (data|oracle)");
}

std::string to_string(IdentifyMethod method) {
  switch (method) {
    case IdentifyMethod::algorithm1: return "algorithm1";
    case IdentifyMethod::hull_extend: return "hull_extend";
    case IdentifyMethod::real_axis: return "real_axis";
    case IdentifyMethod::hull_moments: return "hull_moments";
  }
  return "algorithm1";
}

IdentifyMethod parse_method(const std::string& s) {
  if (s == "algorithm1") return IdentifyMethod::algorithm1;
  if (s == "hull_extend") return IdentifyMethod::hull_extend;
  if (s == "real_axis") return IdentifyMethod::real_axis;
  if (s == "hull_moments") return IdentifyMethod::hull_moments;
  throw InvalidArgument("unknown identify method '" + s +
                        "' (algorithm1|hull_extend|real_axis|hull_moments)");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

int model_dimension(const ModelSpec& model) {
  if (model.preset == "linear" || model.preset == "brusselator") return 2;
  if (model.preset == "matrices") return model.A ? static_cast<int>(model.A->rows()) : 0;
  if (model.preset == "random_linear") {
    auto it = model.parameters.find("m");
    return it == model.parameters.end() ? 2 : static_cast<int>(it->second);
  }
  return 0;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw InvalidArgument("config: " + what + " must be a nonempty array of rows");
  }
  const auto rows = j.size();
  const auto cols = j.front().size();
  Eigen::MatrixXd M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) throw InvalidArgument("config: " + what + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) M(r, c) = j[r][c].get<double>();
  }
  return M;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json out = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    out.push_back(row);
  }
  return out;
}

void warn_unknown(const json& obj, const std::set<std::string>& known, const std::string& where,
                  std::vector<std::string>* warnings) {
  if (!warnings || !obj.is_object()) return;
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) {
      warnings->push_back("config: unknown key '" + where + key + "' ignored");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidArgument("config: " + msg); };
  if (schema_version != kConfigSchemaVersion) {
    fail("unsupported schema_version " + std::to_string(schema_version));
  }
  if (graph.generator != "erdos_renyi" && graph.generator != "dense_uniform") {
    fail("graph.generator must be erdos_renyi or dense_uniform");
  }
  if (graph.n < 1) fail("graph.n must be >= 1");
  if (!(graph.p_edge >= 0.0 && graph.p_edge <= 1.0)) fail("graph.p_edge must lie in [0, 1]");

  const std::set<std::string> presets{"linear", "brusselator", "matrices", "random_linear"};
  if (!presets.count(model.preset)) fail("unknown model.preset '" + model.preset + "'");
  if (model.preset == "matrices") {
    if (!model.A || !model.B || !model.C) fail("model preset 'matrices' needs A, B and C");
    const auto m = model.A->rows();
    if (model.A->cols() != m || model.B->rows() != m || model.C->rows() != m ||
        model.C->cols() != model.B->cols()) {
      fail("model matrices must be A m x m, B m x r, C m x r");
    }
  }
  if (model.preset == "random_linear") {
    const int m = model_dimension(model);
    if (m < 1 || m > 6) fail("random_linear: m must lie in [1, 6]");
    auto get = [&](const char* k, double d) {
      auto it = model.parameters.find(k);
      return it == model.parameters.end() ? d : it->second;
    };
    if (!(get("high", 20.0) > get("low", 0.0))) fail("random_linear: need high > low");
  }
  if (model.preset == "brusselator") {
    auto it = model.parameters.find("a");
    if (it != model.parameters.end() && !(it->second > 0.0)) fail("brusselator: a must be > 0");
  }

  if (simulation.q < 1) fail("simulation.q must be >= 1");
  if (simulation.K < 1) fail("simulation.K must be >= 1");
  if (!(simulation.dt > 0.0)) fail("simulation.dt must be > 0");
  if (!(simulation.width >= 0.0)) fail("simulation.width must be >= 0");
  if (simulation.substeps < 1) fail("simulation.substeps must be >= 1");

  if (dmd.delays < 1) fail("dmd.delays must be >= 1");
  if (simulation.K < dmd.delays) {
    fail("simulation.K (" + std::to_string(simulation.K) + ") must be >= dmd.delays (" +
         std::to_string(dmd.delays) + ") so that each series holds one delay window pair");
  }
  if (!(dmd.svd_tol >= 0.0 && dmd.svd_tol < 1.0)) fail("dmd.svd_tol must lie in [0, 1)");
  if (dmd.selector.empty()) fail("dmd.selector must not be empty");
  const int state_dim = model_dimension(model) * graph.n;
  for (int idx : dmd.selector) {
    if (idx < 0 || idx >= state_dim) {
      fail("dmd.selector index " + std::to_string(idx) + " outside [0, " +
           std::to_string(state_dim) + ")");
    }
  }

  if (!(identify.epsilon > 0.0)) fail("identify.epsilon must be > 0");
  if (identify.k_max < 0) fail("identify.k_max must be >= 0");
  if (!(identify.pencil_tol > 0.0)) fail("identify.pencil_tol must be > 0");
  if (!(identify.oracle_match_tol >= 0.0)) fail("identify.oracle_match_tol must be >= 0");
}

ExperimentConfig parse_config(const std::string& json_text, std::vector<std::string>* warnings) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw InvalidArgument("config: top level must be an object");

  ExperimentConfig cfg;
  try {
    warn_unknown(root,
                 {"schema_version", "name", "seed", "mode", "graph", "model", "simulation", "dmd",
                  "identify", "output"},
                 "", warnings);
    read(root, "schema_version", cfg.schema_version);
    read(root, "name", cfg.name);
    read(root, "seed", cfg.seed);
    if (root.contains("mode")) cfg.mode = parse_mode(root.at("mode").get<std::string>());

    if (root.contains("graph")) {
      const auto& g = root.at("graph");
      warn_unknown(g, {"generator", "n", "p_edge", "symmetrize"}, "graph.", warnings);
      read(g, "generator", cfg.graph.generator);
      read(g, "n", cfg.graph.n);
      read(g, "p_edge", cfg.graph.p_edge);
      read(g, "symmetrize", cfg.graph.symmetrize);
    }
    if (root.contains("model")) {
      const auto& mdl = root.at("model");
      warn_unknown(mdl, {"preset", "parameters", "A", "B", "C"}, "model.", warnings);
      read(mdl, "preset", cfg.model.preset);
      read(mdl, "parameters", cfg.model.parameters);
      if (mdl.contains("A")) cfg.model.A = matrix_from_json(mdl.at("A"), "model.A");
      if (mdl.contains("B")) cfg.model.B = matrix_from_json(mdl.at("B"), "model.B");
      if (mdl.contains("C")) cfg.model.C = matrix_from_json(mdl.at("C"), "model.C");
    }
    if (root.contains("simulation")) {
      const auto& s = root.at("simulation");
      warn_unknown(s, {"q", "K", "dt", "width", "substeps"}, "simulation.", warnings);
      read(s, "q", cfg.simulation.q);
      read(s, "K", cfg.simulation.K);
      read(s, "dt", cfg.simulation.dt);
      read(s, "width", cfg.simulation.width);
      read(s, "substeps", cfg.simulation.substeps);
    }
    if (root.contains("dmd")) {
      const auto& d = root.at("dmd");
      warn_unknown(d, {"delays", "svd_tol", "selector", "layout", "centering"}, "dmd.", warnings);
      read(d, "delays", cfg.dmd.delays);
      read(d, "svd_tol", cfg.dmd.svd_tol);
      read(d, "selector", cfg.dmd.selector);
      if (d.contains("layout")) cfg.dmd.layout = parse_layout(d.at("layout").get<std::string>());
      if (d.contains("centering")) {
        cfg.dmd.centering = parse_centering(d.at("centering").get<std::string>());
      }
    }
    if (root.contains("identify")) {
      const auto& i = root.at("identify");
      warn_unknown(i,
                   {"epsilon", "method", "k_max", "pencil_tol", "oracle_match_tol",
                    "refine_lambda2", "delta"},
                   "identify.", warnings);
      read(i, "epsilon", cfg.identify.epsilon);
      if (i.contains("method")) cfg.identify.method = parse_method(i.at("method").get<std::string>());
      read(i, "k_max", cfg.identify.k_max);
      read(i, "pencil_tol", cfg.identify.pencil_tol);
      read(i, "oracle_match_tol", cfg.identify.oracle_match_tol);
      read(i, "refine_lambda2", cfg.identify.refine_lambda2);
      if (i.contains("delta")) {
        cfg.identify.delta = i.at("delta").get<double>();
        if (warnings) {
          warnings->push_back("config: identify.delta is recorded but not used by any stage");
        }
      }
    }
    if (root.contains("output")) {
      const auto& o = root.at("output");
      warn_unknown(o, {"dir"}, "output.", warnings);
      read(o, "dir", cfg.output_dir);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: wrong value type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), warnings);
}

std::string config_to_json(const ExperimentConfig& c) {
  json model = {{"preset", c.model.preset}, {"parameters", c.model.parameters}};
  if (c.model.A) model["A"] = matrix_to_json(*c.model.A);
  if (c.model.B) model["B"] = matrix_to_json(*c.model.B);
  if (c.model.C) model["C"] = matrix_to_json(*c.model.C);
  json identify = {{"epsilon", c.identify.epsilon},
                   {"method", to_string(c.identify.method)},
                   {"k_max", c.identify.k_max},
                   {"pencil_tol", c.identify.pencil_tol},
                   {"oracle_match_tol", c.identify.oracle_match_tol},
                   {"refine_lambda2", c.identify.refine_lambda2}};
  if (c.identify.delta) identify["delta"] = *c.identify.delta;
  json root = {
      {"schema_version", c.schema_version},
      {"name", c.name},
      {"seed", c.seed},
      {"mode", to_string(c.mode)},
      {"graph",
       {{"generator", c.graph.generator},
        {"n", c.graph.n},
        {"p_edge", c.graph.p_edge},
        {"symmetrize", c.graph.symmetrize}}},
      {"model", model},
      {"simulation",
       {{"q", c.simulation.q},
        {"K", c.simulation.K},
        {"dt", c.simulation.dt},
        {"width", c.simulation.width},
        {"substeps", c.simulation.substeps}}},
      {"dmd",
       {{"delays", c.dmd.delays},
        {"svd_tol", c.dmd.svd_tol},
        {"selector", c.dmd.selector},
        {"layout", to_string(c.dmd.layout)},
        {"centering", to_string(c.dmd.centering)}}},
      {"identify", identify},
      {"output", {{"dir", c.output_dir}}},
  };
  return root.dump(2);
}

}  // namespace specid
