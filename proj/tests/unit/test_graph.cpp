#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "specid/error.hpp"
#include "specid/graph.hpp"
#include "test_util.hpp"

using namespace specid;

TEST(Graph, ErdosRenyiShapeAndDeterminism) {
  const auto g = erdos_renyi_weighted(10, 0.65, 7);
  EXPECT_EQ(g.size(), 10);
  EXPECT_TRUE(g.weights().isApprox(g.weights().transpose(), 0.0));
  EXPECT_EQ(g.weights().diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GE(g.weights().minCoeff(), 0.0);
  EXPECT_LE(g.weights().maxCoeff(), 1.0);
  EXPECT_EQ(g.weights(), erdos_renyi_weighted(10, 0.65, 7).weights());
  EXPECT_NE(g.weights(), erdos_renyi_weighted(10, 0.65, 8).weights());
}

TEST(Graph, ErdosRenyiNoEdges) {
  EXPECT_EQ(erdos_renyi_weighted(5, 0.0, 1).weights(), Eigen::MatrixXd::Zero(5, 5));
}

TEST(Graph, ErdosRenyiEdgeFraction) {
  const int n = 200;
  const double p = 0.3;
  const auto g = erdos_renyi_weighted(n, p, 3);
  int edges = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges += g.weights()(i, j) > 0.0 ? 1 : 0;
  const double pairs = n * (n - 1) / 2.0;
  const double sd = std::sqrt(pairs * p * (1 - p));
  EXPECT_LT(std::abs(edges - pairs * p), 3 * sd);
}

TEST(Graph, InvalidArguments) {
  EXPECT_THROW(erdos_renyi_weighted(0, 0.5, 1), InvalidArgument);
  EXPECT_THROW(erdos_renyi_weighted(4, 1.5, 1), InvalidArgument);
  EXPECT_THROW(dense_uniform_graph(0, 1), InvalidArgument);
  Eigen::MatrixXd w(2, 2);
  w << 0, -1, -1, 0;
  EXPECT_THROW(WeightedGraph{w}, InvalidArgument);
  w << 1, 1, 1, 0;
  EXPECT_THROW(WeightedGraph{w}, InvalidArgument);
  w << 0, 1, 0.5, 0;
  EXPECT_THROW(WeightedGraph{w}, InvalidArgument);
  EXPECT_NO_THROW(WeightedGraph(w, /*directed=*/true));
}

TEST(Graph, DenseUniform) {
  const auto g = dense_uniform_graph(50, 11);
  const auto& W = g.weights();
  EXPECT_TRUE(W.isApprox(W.transpose(), 0.0));
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      if (i == j) {
        EXPECT_EQ(W(i, j), 0.0);
      } else {
        EXPECT_GT(W(i, j), 0.0);
        EXPECT_LT(W(i, j), 1.0);
      }
    }
  EXPECT_EQ(dense_uniform_graph(1, 3).weights(), Eigen::MatrixXd::Zero(1, 1));
  const auto directed = dense_uniform_graph(6, 2, /*symmetrize=*/false);
  EXPECT_TRUE(directed.directed());
  EXPECT_FALSE(directed.weights().isApprox(directed.weights().transpose()));
}

TEST(Graph, LaplacianExamples) {
  Eigen::MatrixXd w(2, 2);
  w << 0, 1, 1, 0;
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  EXPECT_EQ(laplacian(WeightedGraph(w)).matrix, expected);
  EXPECT_EQ(laplacian(WeightedGraph(Eigen::MatrixXd::Zero(4, 4))).matrix,
            Eigen::MatrixXd::Zero(4, 4));
}

TEST(Graph, LaplacianRowSumsVanish) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const auto& g : {erdos_renyi_weighted(6, 0.5, seed), dense_uniform_graph(3, seed),
                          dense_uniform_graph(9, seed, false)}) {
      const auto L = laplacian(g).matrix;
      EXPECT_LT(L.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Graph, ExactSpectrumExamples) {
  Eigen::MatrixXd L(2, 2);
  L << 1, -1, -1, 1;
  auto s = exact_spectrum({L});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.values[0].real(), 0.0, 1e-14);
  EXPECT_NEAR(s.values[1].real(), 2.0, 1e-14);

  s = exact_spectrum({Eigen::MatrixXd::Zero(3, 3)});
  for (const auto& v : s.values) EXPECT_EQ(v, cdouble(0.0));

  Eigen::MatrixXd k3 = Eigen::MatrixXd::Ones(3, 3);
  k3.diagonal().setZero();
  s = exact_spectrum(laplacian(WeightedGraph(k3)));
  EXPECT_NEAR(s.values[0].real(), 0.0, 1e-12);
  EXPECT_NEAR(s.values[1].real(), 3.0, 1e-12);
  EXPECT_NEAR(s.values[2].real(), 3.0, 1e-12);
}

TEST(Graph, SymmetricSpectrumIsRealWithZero) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = exact_spectrum(laplacian(erdos_renyi_weighted(15, 0.4, seed)));
    EXPECT_NEAR(s.values.front().real(), 0.0, 1e-10);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_LT(std::abs(s.values[i].imag()), 1e-10);
      if (i > 0) EXPECT_FALSE(complex_less(s.values[i], s.values[i - 1]));
    }
  }
}

TEST(Graph, SpectralMoments) {
  Eigen::MatrixXd L(2, 2);
  L << 1, -1, -1, 1;
  EXPECT_DOUBLE_EQ(spectral_moment(L, 0), 1.0);
  EXPECT_DOUBLE_EQ(spectral_moment(L, 1), 1.0);
  EXPECT_DOUBLE_EQ(spectral_moment(L, 2), 2.0);
  EXPECT_THROW(spectral_moment(Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 3)), 1), InvalidArgument);

  Rng rng(5);
  const Eigen::MatrixXd M = testutil::random_matrix(rng, 5, 5);
  const Eigen::VectorXcd eig = M.eigenvalues();
  cdouble expected = 0.0;
  for (int i = 0; i < 5; ++i) expected += std::pow(eig(i), 3);
  EXPECT_NEAR(spectral_moment(M, 3), (expected / 5.0).real(), 1e-10);
}

TEST(Graph, MomentsMatchSpectrum) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto L = laplacian(erdos_renyi_weighted(20, 0.5, seed));
    const auto s = exact_spectrum(L);
    for (int k = 1; k <= 6; ++k) {
      double acc = 0.0;
      for (const auto& v : s.values) acc += std::pow(v.real(), k);
      const double direct = spectral_moment(L.matrix, k);
      EXPECT_NEAR(direct, acc / 20.0, 1e-8 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST(Graph, EdgeListRoundTrip) {
  const auto g = erdos_renyi_weighted(12, 0.5, 9);
  std::stringstream ss;
  write_edge_list(ss, g);
  EXPECT_NE(ss.str().find("i,j,weight"), std::string::npos);
  const auto back = read_edge_list(ss);
  EXPECT_EQ(back.weights(), g.weights());

  const auto d = dense_uniform_graph(4, 1, false);
  std::stringstream ds;
  write_edge_list(ds, d);
  const auto dback = read_edge_list(ds);
  EXPECT_TRUE(dback.directed());
  EXPECT_EQ(dback.weights(), d.weights());
}

TEST(Graph, EdgeListRejectsBadRows) {
  std::stringstream ss("# nodes=3\ni,j,weight\n0,5,1.0\n");
  EXPECT_THROW(read_edge_list(ss), Error);
  std::stringstream bad("i,j,weight\n0,1,abc\n");
  EXPECT_THROW(read_edge_list(bad), Error);
}
