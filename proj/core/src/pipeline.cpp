#include "specid/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "specid/error.hpp"

namespace specid {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double param(const ModelSpec& spec, const char* key, double fallback) {
  auto it = spec.parameters.find(key);
  return it == spec.parameters.end() ? fallback : it->second;
}

template <typename F>
auto in_stage(const char* stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw StageFailure(stage, e.what());
  }
}

bool all_near_real(const ComplexList& values, double tol) {
  return std::all_of(values.begin(), values.end(),
                     [tol](const cdouble& z) { return std::abs(z.imag()) <= tol; });
}

ComplexList real_parts(const ComplexList& values) {
  ComplexList out;
  out.reserve(values.size());
  for (const auto& z : values) out.emplace_back(z.real(), 0.0);
  return out;
}

}  // namespace

WeightedGraph generate_graph(const ExperimentConfig& config) {
  const auto seed = derive_seed(config.seed, kGraphStream);
  if (config.graph.generator == "dense_uniform") {
    return dense_uniform_graph(config.graph.n, seed, config.graph.symmetrize);
  }
  return erdos_renyi_weighted(config.graph.n, config.graph.p_edge, seed);
}

UnitModel make_model(const ExperimentConfig& config) {
  const auto& spec = config.model;
  if (spec.preset == "linear") return linear_preset();
  if (spec.preset == "brusselator") {
    return brusselator_preset(param(spec, "a", 15.0), param(spec, "b", 9.0),
                              param(spec, "coupling_2", 4.5));
  }
  if (spec.preset == "matrices") {
    if (!spec.A || !spec.B || !spec.C) {
      throw InvalidArgument("model preset 'matrices' needs A, B and C");
    }
    return linear_unit(*spec.A, *spec.B, *spec.C);
  }
  if (spec.preset == "random_linear") {
    const int m = static_cast<int>(param(spec, "m", 2.0));
    const double lo = param(spec, "low", 0.0);
    const double hi = param(spec, "high", 20.0);
    Rng rng(derive_seed(config.seed, kModelStream));
    Eigen::MatrixXd A(m, m), B(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) A(i, j) = rng.uniform(lo, hi);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) B(i, j) = rng.uniform(lo, hi);
    if (param(spec, "trace_zero", 0.0) != 0.0) {
      // tr(B C^T) = 0 with C = I: diagonal (1, -1, 0, ...).
      for (int i = 0; i < m; ++i) B(i, i) = 0.0;
      B(0, 0) = 1.0;
      if (m > 1) B(1, 1) = -1.0;
    }
    UnitModel model = linear_unit(A, B, Eigen::MatrixXd::Identity(m, m));
    model.name = "random_linear";
    model.parameters = spec.parameters;
    return model;
  }
  throw InvalidArgument("unknown model preset '" + spec.preset + "'");
}

SnapshotSet simulate_snapshots(const ExperimentConfig& config, const UnitModel& model,
                               const WeightedGraph& graph) {
  const auto& sim = config.simulation;
  const NetworkVectorField field(model, graph);
  const auto x0s = sample_initial_conditions(model.x_star, graph.size(), sim.q, sim.width,
                                             derive_seed(config.seed, kInitialStateStream));
  SnapshotSet set;
  set.dt = sim.dt;
  set.K = sim.K;
  set.selector = config.dmd.selector;
  set.seed = config.seed;
  set.model = model.name;
  set.parameters = model.parameters;
  set.substeps = sim.substeps;
  set.width = sim.width;
  set.trajectories.reserve(x0s.size());
  for (const auto& x0 : x0s) {
    set.trajectories.push_back(simulate(std::cref(field), x0, sim.dt, sim.K, sim.substeps));
  }
  return set;
}

RitzSpectrum run_dmd(const ExperimentConfig& config, const UnitModel& model,
                     const SnapshotSet& snapshots) {
  snapshots.validate();
  const auto& sel = snapshots.selector;
  Eigen::VectorXd reference(static_cast<Eigen::Index>(sel.size()));
  for (std::size_t i = 0; i < sel.size(); ++i) {
    reference(static_cast<Eigen::Index>(i)) = model.x_star(sel[i] % model.m);
  }
  const auto series = center_series(snapshots.measured(), config.dmd.centering, reference);
  const auto emb = hankel_embed(series, config.dmd.delays, config.dmd.layout);
  return estimate_spectrum(emb, snapshots.dt, config.dmd.svd_tol);
}

RitzSpectrum oracle_spectrum(const LinearizedSystem& sys, const WeightedGraph& graph) {
  RitzSpectrum out;
  out.continuous = jacobian_spectrum(build_jacobian(sys, laplacian(graph)));
  out.svd_rank = static_cast<int>(out.continuous.size());
  return out;
}

IdentifyResult identify_from_candidates(const ExperimentConfig& config,
                                        CandidateSet candidates) {
  const double eps = config.identify.epsilon;
  IdentifyResult result;
  result.candidates = std::move(candidates);
  for (const auto& s : result.candidates.skipped) result.warnings.push_back(s);
  result.identification = algorithm1_filter(result.candidates, eps);
  const ComplexList& identified = result.identification.identified;
  const auto method = config.identify.method;

  if (method == IdentifyMethod::algorithm1) {
    result.spectrum = identified;
    return result;
  }
  if (identified.empty()) {
    result.warnings.push_back("no eigenvalue identified; " + to_string(method) +
                              " has nothing to extend");
    return result;
  }

  const bool real_input = all_near_real(identified, eps);
  if (method == IdentifyMethod::real_axis) {
    if (!real_input) {
      throw InvalidArgument("real_axis method needs identified values within epsilon of the "
                            "real axis");
    }
    result.extended = real_axis_fallback(real_parts(identified), result.candidates, eps);
  } else if (real_input) {
    result.extended = real_axis_fallback(real_parts(identified), result.candidates, eps);
    result.warnings.push_back("identified values are real; extended with the real-axis box");
  } else {
    result.extended = hull_extend_filter(identified, result.candidates, eps);
  }
  for (const auto& w : result.extended->warnings) result.warnings.push_back(w);
  result.spectrum = result.extended->values;
  sort_complex(result.spectrum);

  if (method == IdentifyMethod::hull_moments) {
    ComplexList support = identified;
    support.insert(support.end(), result.extended->values.begin(),
                   result.extended->values.end());
    const HullRegion hull = convex_hull(support, /*mirror=*/true);
    result.extended->hull = hull;
    result.moments = hull_moments(hull);
    if (result.moments->degenerate) {
      result.warnings.push_back("hull is degenerate; moments use the uniform segment");
    }
  }
  if (config.identify.refine_lambda2) {
    result.lambda2_refined = refined_lambda2(result.extended->hull, identified, eps);
  }
  return result;
}

IdentifyResult identify_stage(const ExperimentConfig& config, const LinearizedSystem& sys,
                              const ComplexList& mus) {
  return identify_from_candidates(
      config, build_candidate_set(sys.A, sys.coupling(), mus, config.identify.pencil_tol));
}

SpectrumReport build_report(const ExperimentConfig& config, const WeightedGraph& graph,
                            const RitzSpectrum& estimated, IdentifyResult result) {
  SpectrumReport rep;
  rep.config = config;
  const LinearizedSystem sys = linearize(make_model(config));
  const Laplacian L = laplacian(graph);
  rep.n = graph.size();
  rep.m = sys.m();
  rep.m_bar = sys.m_bar;
  rep.trace_bc = sys.coupling().trace();
  rep.system = sys;
  rep.exact_laplacian = exact_spectrum(L);
  rep.exact_jacobian = jacobian_spectrum(build_jacobian(sys, L));
  rep.estimated = estimated;
  rep.feasibility = feasibility_check(sys, config.k_max());
  if (rep.m <= 6) {
    try {
      rep.cross_terms = cross_term_diagnostic(char_poly(sys.A, sys.coupling()));
    } catch (const NumericalFailure& e) {
      rep.warnings.push_back(std::string("cross-term diagnostic skipped: ") + e.what());
    }
  }
  if (config.mode == RunMode::oracle) {
    if (rep.feasibility.feasible()) {
      rep.recursion_moments =
          moments_via_recursion(estimated.continuous, sys, rep.n, config.k_max());
    } else {
      rep.warnings.push_back("moment recursion skipped: M_" +
                             std::to_string(*rep.feasibility.first_vanishing_k) +
                             "(BC^T) vanishes");
    }
  }
  rep.exact_m1 = spectral_moment(L.matrix, 1);
  rep.exact_m2 = spectral_moment(L.matrix, 2);
  rep.oracle = compare_to_oracle(result.spectrum, rep.exact_laplacian, config.match_tol());
  for (const auto& w : estimated.warnings) rep.warnings.push_back(w);
  for (const auto& w : result.warnings) rep.warnings.push_back(w);
  rep.result = std::move(result);
  return rep;
}

SpectrumReport run_pipeline(const ExperimentConfig& config, const fs::path& out) {
  in_stage("config", [&] { config.validate(); });
  const bool write = !out.empty();
  if (write) {
    in_stage("config", [&] {
      fs::create_directories(out);
      artifacts::write_text(out / artifacts::kConfig, config_to_json(config) + "\n");
    });
  }
  const WeightedGraph graph = in_stage("generate", [&] { return generate_graph(config); });
  if (write) in_stage("generate", [&] { artifacts::write_graph(out, graph); });

  const UnitModel model = in_stage("model", [&] { return make_model(config); });
  const LinearizedSystem sys = in_stage("model", [&] { return linearize(model); });

  RitzSpectrum estimated;
  if (config.mode == RunMode::oracle) {
    estimated = in_stage("dmd", [&] { return oracle_spectrum(sys, graph); });
  } else {
    const SnapshotSet snapshots =
        in_stage("simulate", [&] { return simulate_snapshots(config, model, graph); });
    if (write) {
      in_stage("simulate", [&] { write_snapshot_set(out / artifacts::kSnapshots, snapshots); });
    }
    estimated = in_stage("dmd", [&] { return run_dmd(config, model, snapshots); });
  }
  if (write) in_stage("dmd", [&] { artifacts::write_estimate(out, config, estimated); });

  IdentifyResult result =
      in_stage("identify", [&] { return identify_stage(config, sys, estimated.continuous); });
  if (write) in_stage("identify", [&] { artifacts::write_identify(out, config, result); });

  SpectrumReport report = in_stage(
      "report", [&] { return build_report(config, graph, estimated, std::move(result)); });
  if (write) in_stage("report", [&] { artifacts::write_report(out, report); });
  return report;
}

namespace artifacts {

namespace {

json complex_json(const cdouble& z) { return json::array({z.real(), z.imag()}); }

json complex_list_json(const ComplexList& values) {
  json out = json::array();
  for (const auto& z : values) out.push_back(complex_json(z));
  return out;
}

json matrix_json(const Eigen::MatrixXd& M) {
  json out = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    out.push_back(row);
  }
  return out;
}

json hull_json(const HullRegion& hull) {
  return {{"vertices", complex_list_json(hull.vertices)},
          {"area", hull.area},
          {"centroid", complex_json(hull.centroid)},
          {"second_moment", complex_json(hull.second_moment)},
          {"degenerate", hull.degenerate}};
}

json identify_json(const ExperimentConfig& config, const IdentifyResult& r) {
  json clusters = json::array();
  for (const auto& c : r.identification.report.clusters) {
    clusters.push_back({{"center", complex_json(c.center)},
                        {"size", c.size()},
                        {"accepted", c.accepted},
                        {"copies", c.copies}});
  }
  int flagged = 0;
  for (const auto& e : r.candidates.entries) flagged += e.flagged ? 1 : 0;
  json out = {{"method", to_string(config.identify.method)},
              {"epsilon", config.identify.epsilon},
              {"m", r.candidates.m},
              {"m_bar", r.candidates.m_bar},
              {"candidates", {{"count", r.candidates.size()},
                              {"flagged", flagged},
                              {"skipped", r.candidates.skipped}}},
              {"cluster_rule",
               "single-linkage at distance < epsilon; a cluster of q*m members yields q "
               "copies of its mean"},
              {"clusters", clusters},
              {"identified", complex_list_json(r.identification.identified)},
              {"spectrum", complex_list_json(r.spectrum)},
              {"warnings", r.warnings}};
  if (r.extended) {
    out["extension"] = {{"hull", hull_json(r.extended->hull)},
                        {"bounding_box_fallback", r.extended->bounding_box_fallback},
                        {"members", r.extended->members}};
  }
  if (r.moments) {
    out["moments"] = {{"M1_hat", r.moments->m1_hat},
                      {"M2_hat", r.moments->m2_hat},
                      {"lambda2_hat", r.moments->lambda2_hat},
                      {"lambdan_hat", r.moments->lambdan_hat},
                      {"degenerate", r.moments->degenerate}};
  }
  if (r.lambda2_refined) out["lambda2_refined"] = *r.lambda2_refined;
  return out;
}

void write_complex_file(const fs::path& path, const ComplexList& values) {
  std::ostringstream os;
  write_complex_csv(os, values);
  write_text(path, os.str());
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing input artifact: expected " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_graph(const fs::path& dir, const WeightedGraph& g) {
  std::ostringstream os;
  write_edge_list(os, g);
  write_text(dir / kGraph, os.str());
}

WeightedGraph read_graph(const fs::path& dir) {
  std::istringstream in(read_text(dir / kGraph));
  return read_edge_list(in);
}

void write_estimate(const fs::path& dir, const ExperimentConfig& config,
                    const RitzSpectrum& estimated) {
  write_complex_file(dir / kMu, estimated.continuous);
  json meta = {{"mode", to_string(config.mode)},
               {"dt", config.simulation.dt},
               {"delays", config.dmd.delays},
               {"svd_tol", config.dmd.svd_tol},
               {"layout", to_string(config.dmd.layout)},
               {"centering", to_string(config.dmd.centering)},
               {"svd_rank", estimated.svd_rank},
               {"discrete", complex_list_json(estimated.discrete)},
               {"warnings", estimated.warnings}};
  write_text(dir / kDmd, meta.dump(2) + "\n");
}

RitzSpectrum read_estimate(const fs::path& dir) {
  RitzSpectrum out;
  {
    std::istringstream in(read_text(dir / kMu));
    out.continuous = read_complex_csv(in);
  }
  const auto meta_path = dir / kDmd;
  json meta;
  try {
    meta = json::parse(read_text(meta_path));
  } catch (const json::exception& e) {
    throw IoError("malformed " + meta_path.string() + ": " + e.what());
  }
  out.svd_rank = meta.value("svd_rank", 0);
  out.warnings = meta.value("warnings", std::vector<std::string>{});
  for (const auto& z : meta.value("discrete", json::array())) {
    out.discrete.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  }
  return out;
}

void write_identify(const fs::path& dir, const ExperimentConfig& config,
                    const IdentifyResult& result) {
  {
    std::ostringstream os;
    write_candidates_csv(os, result.candidates);
    write_text(dir / kCandidates, os.str());
  }
  write_complex_file(dir / kIdentified, result.spectrum);
  write_text(dir / kIdentify, identify_json(config, result).dump(2) + "\n");
}

CandidateSet read_candidates(const fs::path& file, int m, int m_bar) {
  std::istringstream in(read_text(file));
  return read_candidates_csv(in, m, m_bar);
}

std::string report_to_json(const SpectrumReport& r) {
  const auto& exact = r.exact_laplacian.values;
  json exact_json = {{"laplacian", complex_list_json(exact)},
                     {"jacobian", complex_list_json(r.exact_jacobian)},
                     {"M1", r.exact_m1},
                     {"M2", r.exact_m2}};
  if (exact.size() >= 2) {
    exact_json["lambda2"] = exact[1].real();
    exact_json["lambdan"] = exact.back().real();
  }

  json feas = {{"trace_nonzero", r.feasibility.trace_nonzero},
               {"m_bar_equals_m", r.feasibility.m_bar_equals_m},
               {"feasible", r.feasibility.feasible()},
               {"moments_bc", r.feasibility.moments_bc}};
  if (r.feasibility.first_vanishing_k) {
    feas["first_vanishing_k"] = *r.feasibility.first_vanishing_k;
  }

  std::vector<double> errors = r.oracle.errors;
  json oracle = {{"match_tol", r.config.match_tol()},
                 {"max_error", r.oracle.max_error},
                 {"missed", r.oracle.missed},
                 {"spurious", r.oracle.spurious},
                 {"m1_error", r.oracle.m1_error},
                 {"m2_error", r.oracle.m2_error},
                 {"errors", errors},
                 {"coverage", coverage(r.result.spectrum, r.exact_laplacian,
                                       r.config.match_tol())}};

  json root = {
      {"schema_version", kConfigSchemaVersion},
      {"name", r.config.name},
      {"conventions",
       {{"coupling", "u_k = sum_j W_kj (y_j - y_k); J = I (x) A - L (x) B C^T"},
        {"C_convention", "gradient: C is m x r and the coupling block is B C^T"},
        {"centering", to_string(r.config.dmd.centering)},
        {"layout", to_string(r.config.dmd.layout)},
        {"cluster_rule",
         "single-linkage at distance < epsilon; a cluster of q*m members yields q copies "
         "of its mean"},
        {"eigenvalue_order", "lexicographic (real, imag)"}}},
      {"config", json::parse(config_to_json(r.config))},
      {"system",
       {{"n", r.n},
        {"m", r.m},
        {"m_bar", r.m_bar},
        {"trace_bc", r.trace_bc},
        {"A", matrix_json(r.system.A)},
        {"B", matrix_json(r.system.B)},
        {"C", matrix_json(r.system.C)},
        {"x_star", std::vector<double>(r.system.x_star.data(),
                                       r.system.x_star.data() + r.system.x_star.size())}}},
      {"feasibility", feas},
      {"dmd",
       {{"svd_rank", r.estimated.svd_rank},
        {"estimated", complex_list_json(r.estimated.continuous)}}},
      {"identify", identify_json(r.config, r.result)},
      {"exact", exact_json},
      {"oracle", oracle},
      {"warnings", r.warnings},
  };
  if (r.cross_terms) {
    root["cross_terms"] = {{"has_cross_terms", r.cross_terms->has_cross_terms},
                           {"trace_coeff", complex_json(r.cross_terms->trace_coeff)}};
  }
  if (r.recursion_moments) {
    root["recursion_moments"] = complex_list_json(*r.recursion_moments);
  }
  if (r.result.moments) {
    const auto& mom = *r.result.moments;
    root["moments"] = {{"M1_hat", mom.m1_hat},
                       {"M2_hat", mom.m2_hat},
                       {"lambda2_hat", mom.lambda2_hat},
                       {"lambdan_hat", mom.lambdan_hat},
                       {"degenerate", mom.degenerate}};
    if (r.result.lambda2_refined) root["moments"]["lambda2_refined"] = *r.result.lambda2_refined;
  }
  return root.dump(2) + "\n";
}

void write_report(const fs::path& dir, const SpectrumReport& r) {
  write_text(dir / kReport, report_to_json(r));
  const fs::path plots = dir / kPlots;
  write_complex_file(plots / "exact_laplacian.csv", r.exact_laplacian.values);
  write_complex_file(plots / "exact_jacobian.csv", r.exact_jacobian);
  write_complex_file(plots / "estimated_jacobian.csv", r.estimated.continuous);
  write_complex_file(plots / "candidates.csv", r.result.candidates.lambdas());
  write_complex_file(plots / "identified.csv", r.result.identification.identified);
  if (r.result.extended) {
    write_complex_file(plots / "extended.csv", r.result.extended->values);
    ComplexList ring = r.result.extended->hull.vertices;
    if (!ring.empty()) ring.push_back(ring.front());
    write_complex_file(plots / "hull.csv", ring);
  }
}

}  // namespace artifacts

}  // namespace specid
