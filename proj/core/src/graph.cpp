#include "specid/graph.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "csv.hpp"
#include "specid/error.hpp"

namespace specid {

WeightedGraph::WeightedGraph(Eigen::MatrixXd weights, bool directed)
    : weights_(std::move(weights)), directed_(directed) {
  if (weights_.rows() != weights_.cols()) {
    throw InvalidArgument("adjacency matrix must be square");
  }
  const auto n = weights_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0) {
      throw InvalidArgument("adjacency matrix must have a zero diagonal");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw InvalidArgument("coupling weights must be finite and nonnegative");
      }
      if (!directed_ && w != weights_(j, i)) {
        throw InvalidArgument("undirected graph requires a symmetric adjacency matrix");
      }
    }
  }
}

WeightedGraph erdos_renyi_weighted(int n, double p_edge, std::uint64_t seed) {
  if (n <= 0) throw InvalidArgument("erdos_renyi_weighted: n must be positive");
  if (!(p_edge >= 0.0 && p_edge <= 1.0)) {
    throw InvalidArgument("erdos_renyi_weighted: p_edge must lie in [0, 1]");
  }
  Rng rng(seed);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // Both draws are always consumed so the stream layout does not depend on p_edge.
      const double coin = rng.uniform();
      const double weight = rng.uniform();
      if (coin < p_edge) {
        W(i, j) = weight;
        W(j, i) = weight;
      }
    }
  }
  return WeightedGraph(std::move(W));
}

WeightedGraph dense_uniform_graph(int n, std::uint64_t seed, bool symmetrize) {
  if (n <= 0) throw InvalidArgument("dense_uniform_graph: n must be positive");
  Rng rng(seed);
  Eigen::MatrixXd raw(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) raw(i, j) = rng.uniform();
  }
  raw.diagonal().setZero();
  if (!symmetrize) return WeightedGraph(std::move(raw), /*directed=*/true);
  Eigen::MatrixXd W = 0.5 * (raw + raw.transpose());
  return WeightedGraph(std::move(W));
}

Laplacian laplacian(const WeightedGraph& g) {
  const Eigen::MatrixXd& W = g.weights();
  Laplacian L{-W};
  for (int i = 0; i < g.size(); ++i) {
    // Row sum of the off-diagonal part, so the row sums to zero up to rounding
    // of this single accumulation.
    double d = 0.0;
    for (int k = 0; k < g.size(); ++k) d += W(i, k);
    L.matrix(i, i) = d;
  }
  return L;
}

Spectrum exact_spectrum(const Laplacian& L) {
  const Eigen::MatrixXd& M = L.matrix;
  if (M.rows() != M.cols()) throw InvalidArgument("exact_spectrum: matrix must be square");
  if (!M.allFinite()) throw InvalidArgument("exact_spectrum: matrix has non-finite entries");
  Spectrum out;
  if (M.size() == 0) return out;
  if (M == M.transpose()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalFailure("exact_spectrum: symmetric eigensolver did not converge (n=" +
                             std::to_string(M.rows()) + ", |L|_F=" +
                             std::to_string(M.norm()) + ")");
    }
    for (Eigen::Index i = 0; i < M.rows(); ++i) out.values.emplace_back(solver.eigenvalues()(i), 0.0);
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M, false);
    if (solver.info() != Eigen::Success) {
      throw NumericalFailure("exact_spectrum: eigensolver did not converge (n=" +
                             std::to_string(M.rows()) + ", |L|_F=" +
                             std::to_string(M.norm()) + ")");
    }
    for (Eigen::Index i = 0; i < M.rows(); ++i) out.values.push_back(solver.eigenvalues()(i));
  }
  sort_complex(out.values);
  return out;
}

namespace {

template <typename Matrix>
typename Matrix::Scalar moment_impl(const Matrix& M, int k) {
  using Scalar = typename Matrix::Scalar;
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw InvalidArgument("spectral_moment: matrix must be square and nonempty");
  }
  if (k < 0) throw InvalidArgument("spectral_moment: k must be nonnegative");
  if (k == 0) return Scalar(1);
  Matrix P = M;
  for (int i = 1; i < k; ++i) P = (P * M).eval();
  return P.trace() / static_cast<double>(M.rows());
}

}  // namespace

double spectral_moment(const Eigen::MatrixXd& M, int k) { return moment_impl(M, k); }
cdouble spectral_moment(const Eigen::MatrixXcd& M, int k) { return moment_impl(M, k); }

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  const auto& W = g.weights();
  out << "# nodes=" << g.size() << '\n';
  if (g.directed()) out << "# directed\n";
  out << "i,j,weight\n";
  for (int i = 0; i < g.size(); ++i) {
    for (int j = g.directed() ? 0 : i + 1; j < g.size(); ++j) {
      if (W(i, j) != 0.0) {
        out << i << ',' << j << ',' << detail::format_double(W(i, j)) << '\n';
      }
    }
  }
}

WeightedGraph read_edge_list(std::istream& in) {
  struct Edge {
    long i, j;
    double w;
  };
  std::vector<Edge> edges;
  long nodes = -1;
  bool directed = false;
  std::string line;
  long max_index = -1;
  while (std::getline(in, line)) {
    auto t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (t.find("nodes=") != std::string_view::npos) {
        nodes = detail::parse_int(t.substr(t.find("nodes=") + 6));
      } else if (t.find("directed") != std::string_view::npos) {
        directed = true;
      }
      continue;
    }
    if (t.rfind("i,j", 0) == 0) continue;  // header
    auto fields = detail::split(t);
    if (fields.size() != 3) throw IoError("edge list: expected `i,j,weight`, got '" + line + "'");
    Edge e{detail::parse_int(fields[0]), detail::parse_int(fields[1]),
           detail::parse_double(fields[2])};
    if (e.i < 0 || e.j < 0) throw IoError("edge list: negative node index");
    max_index = std::max({max_index, e.i, e.j});
    edges.push_back(e);
  }
  const long n = nodes >= 0 ? nodes : max_index + 1;
  if (n <= 0) throw IoError("edge list: no nodes");
  if (max_index >= n) throw IoError("edge list: node index exceeds declared node count");
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    if (e.i == e.j) throw IoError("edge list: self loops are not allowed");
    W(e.i, e.j) = e.w;
    if (!directed) W(e.j, e.i) = e.w;
  }
  return WeightedGraph(std::move(W), directed);
}

}  // namespace specid
