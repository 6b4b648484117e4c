#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>

#include <Eigen/Dense>

#include "specid/types.hpp"

namespace specid {

/// Network with nonnegative coupling weights and an empty diagonal.
///
/// Graphs are undirected (symmetric weights) unless constructed with
/// `directed = true`.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(Eigen::MatrixXd weights, bool directed = false);

  int size() const noexcept { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  bool directed() const noexcept { return directed_; }
  Eigen::VectorXd degrees() const { return weights_.rowwise().sum(); }

 private:
  Eigen::MatrixXd weights_;
  bool directed_ = false;
};

/// L = D - W. Row sums are zero by construction.
struct Laplacian {
  Eigen::MatrixXd matrix;
  int size() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// All n eigenvalues, sorted by (real, imag).
struct Spectrum {
  ComplexList values;
  std::size_t size() const noexcept { return values.size(); }
};

// Portable RNG: mt19937_64 is fully specified by the standard; the
// conversion to [0, 1) is done here so draws do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Erdos-Renyi graph: every unordered pair is an edge with probability
/// `p_edge`, weight ~ U[0, 1].
WeightedGraph erdos_renyi_weighted(int n, double p_edge, std::uint64_t seed);

/// Complete graph with U[0, 1] weights. With `symmetrize` the raw matrix is
/// replaced by (W + W^T) / 2; otherwise the result is a directed graph.
WeightedGraph dense_uniform_graph(int n, std::uint64_t seed, bool symmetrize = true);

Laplacian laplacian(const WeightedGraph& g);

/// Dense eigendecomposition of L (symmetric solver when L is symmetric).
Spectrum exact_spectrum(const Laplacian& L);

/// tr(M^k) / dim(M) by repeated multiplication; k = 0 gives 1.
double spectral_moment(const Eigen::MatrixXd& M, int k);
cdouble spectral_moment(const Eigen::MatrixXcd& M, int k);

// Edge-list CSV: an optional "# nodes=N" line, then `i,j,weight` rows with
// 0-based indices, one undirected edge per row (i < j).
void write_edge_list(std::ostream& out, const WeightedGraph& g);
WeightedGraph read_edge_list(std::istream& in);

}  // namespace specid
