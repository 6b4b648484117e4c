#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "specid/dmd.hpp"
#include "specid/dynamics.hpp"
#include "specid/error.hpp"
#include "specid/matching.hpp"
#include "test_util.hpp"

using namespace specid;

namespace {

Eigen::MatrixXd row(std::initializer_list<double> v) {
  Eigen::MatrixXd r(1, static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) r(0, i++) = x;
  return r;
}

double nearest(const ComplexList& values, cdouble z) {
  double best = INFINITY;
  for (const auto& v : values) best = std::min(best, std::abs(v - z));
  return best;
}

}  // namespace

TEST(Dmd, EmbeddingShapes) {
  const auto e1 = hankel_embed({row({1, 2, 3, 4})}, 1);
  EXPECT_EQ(e1.X, row({1, 2, 3}));
  EXPECT_EQ(e1.Y, row({2, 3, 4}));

  const auto e2 = hankel_embed({row({1, 2, 3, 4})}, 2);
  ASSERT_EQ(e2.X.rows(), 2);
  ASSERT_EQ(e2.X.cols(), 2);
  Eigen::MatrixXd X(2, 2), Y(2, 2);
  X << 1, 2, 2, 3;
  Y << 2, 3, 3, 4;
  EXPECT_EQ(e2.X, X);
  EXPECT_EQ(e2.Y, Y);

  std::vector<Eigen::MatrixXd> series(10, Eigen::MatrixXd::Random(1, 26));
  const auto pooled = hankel_embed(series, 2, EmbeddingLayout::pooled);
  EXPECT_EQ(pooled.X.rows(), 2);
  EXPECT_EQ(pooled.X.cols(), 240);
  const auto stacked = hankel_embed(series, 2, EmbeddingLayout::stacked);
  EXPECT_EQ(stacked.X.rows(), 20);
  EXPECT_EQ(stacked.X.cols(), 24);
  for (int j = 0; j < 10; ++j)
    for (int k = 0; k < 24; ++k) {
      EXPECT_EQ(stacked.X(2 * j, k), series[j](0, k));
      EXPECT_EQ(stacked.X(2 * j + 1, k), series[j](0, k + 1));
    }
}

TEST(Dmd, StackedShiftStructure) {
  std::vector<Eigen::MatrixXd> series;
  for (int j = 0; j < 3; ++j) {
    Eigen::MatrixXd s(2, 8);
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k < 8; ++k) s(r, k) = 100 * j + 10 * r + k;
    series.push_back(s);
  }
  for (auto layout : {EmbeddingLayout::pooled, EmbeddingLayout::stacked}) {
    const auto emb = hankel_embed(series, 3, layout);
    ASSERT_EQ(emb.X.rows(), emb.Y.rows());
    ASSERT_EQ(emb.X.cols(), emb.Y.cols());
    // Every entry of Y is the matching entry of X advanced by one sample.
    EXPECT_EQ(emb.Y - emb.X, Eigen::MatrixXd::Ones(emb.X.rows(), emb.X.cols()));
  }
}

TEST(Dmd, EmbeddingErrors) {
  EXPECT_THROW(hankel_embed({row({1, 2})}, 2), InvalidArgument);
  EXPECT_THROW(hankel_embed({row({1, 2, 3})}, 0), InvalidArgument);
  EXPECT_THROW(hankel_embed({}, 1), InvalidArgument);
  EXPECT_THROW(hankel_embed({row({1, 2, 3}), row({1, 2})}, 1, EmbeddingLayout::stacked),
               InvalidArgument);
  EXPECT_EQ(hankel_embed({row({1, 2, 3}), row({1, 2})}, 1, EmbeddingLayout::pooled).X.cols(), 3);
}

TEST(Dmd, Centering) {
  const std::vector<Eigen::MatrixXd> s{row({3, 2, 1})};
  EXPECT_EQ(center_series(s, Centering::none)[0], s[0]);
  EXPECT_EQ(center_series(s, Centering::final_snapshot)[0], row({2, 1, 0}));
  EXPECT_EQ(center_series(s, Centering::equilibrium, Eigen::VectorXd::Constant(1, 1.5))[0],
            row({1.5, 0.5, -0.5}));
  EXPECT_THROW(center_series(s, Centering::equilibrium, Eigen::VectorXd::Zero(2)),
               InvalidArgument);
}

TEST(Dmd, ScalarGeometricSeries) {
  Eigen::MatrixXd s(1, 10);
  for (int k = 0; k < 10; ++k) s(0, k) = std::pow(0.5, k);
  const auto r = dmd_eigs(hankel_embed({s}, 1));
  ASSERT_EQ(r.discrete.size(), 1u);
  EXPECT_NEAR(std::abs(r.discrete[0] - 0.5), 0.0, 1e-14);
  EXPECT_EQ(r.svd_rank, 1);
}

TEST(Dmd, TwoModeSignal) {
  const double r1 = 0.9, r2 = -0.4;
  Eigen::MatrixXd s(1, 20);
  for (int k = 0; k < 20; ++k) s(0, k) = 2.0 * std::pow(r1, k) - 0.7 * std::pow(r2, k);
  const auto r = dmd_eigs(hankel_embed({s}, 2));
  ASSERT_EQ(r.discrete.size(), 2u);
  EXPECT_NEAR(nearest(r.discrete, r1), 0.0, 1e-8);
  EXPECT_NEAR(nearest(r.discrete, r2), 0.0, 1e-8);
}

TEST(Dmd, ZeroDataIsDegenerate) {
  EXPECT_THROW(dmd_eigs(hankel_embed({Eigen::MatrixXd::Zero(1, 5)}, 1)), DegenerateData);
}

TEST(Dmd, ContinuousMap) {
  const auto c = to_continuous({1.0, std::exp(-0.4), std::exp(cdouble(-1, 2) * 0.4)}, 0.4);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(std::abs(c[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c[1] - cdouble(-1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[2] - cdouble(-1, 2)), 0.0, 1e-14);

  std::vector<std::string> warnings;
  const auto dropped = to_continuous({0.0, 0.5}, 0.4, &warnings);
  EXPECT_EQ(dropped.size(), 1u);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_THROW(to_continuous({0.5}, 0.0), InvalidArgument);
}

TEST(Dmd, AliasingWarning) {
  // One oscillation every 2.05 samples: |Im mu| dt = 0.976 pi.
  Eigen::MatrixXd s(1, 40);
  const double w = std::numbers::pi / 1.025;
  for (int k = 0; k < 40; ++k) s(0, k) = std::cos(w * k);
  const auto r = estimate_spectrum(hankel_embed({s}, 2), 1.0, 1e-10);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("alias"), std::string::npos);

  Eigen::MatrixXd slow(1, 40);
  for (int k = 0; k < 40; ++k) slow(0, k) = std::cos(0.3 * k);
  EXPECT_TRUE(estimate_spectrum(hankel_embed({slow}, 2), 1.0, 1e-10).warnings.empty());
}

TEST(Dmd, ConjugateSymmetry) {
  Rng rng(3);
  Eigen::MatrixXd A = testutil::random_matrix(rng, 4, 4);
  const Eigen::MatrixXd T = (A * 0.3).exp();
  Eigen::MatrixXd traj(4, 12);
  traj.col(0) = testutil::random_matrix(rng, 4, 1);
  for (int k = 1; k < 12; ++k) traj.col(k) = T * traj.col(k - 1);
  const auto r = dmd_eigs(hankel_embed({traj}, 1));
  ComplexList conj;
  for (const auto& z : r.discrete) conj.push_back(std::conj(z));
  EXPECT_LT(multiset_distance(r.discrete, conj), 1e-10);
}

// Noise-free full-state data from a stable linear system recover sigma(J).
TEST(Dmd, ExactOnLinearSystem) {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd J = testutil::random_matrix(rng, 6, 6);
    J -= (J.eigenvalues().real().maxCoeff() + 0.5) * Eigen::MatrixXd::Identity(6, 6);
    const double dt = 0.2;
    const Eigen::MatrixXd T = (J * dt).exp();
    std::vector<Eigen::MatrixXd> series;
    for (int j = 0; j < 3; ++j) {
      Eigen::MatrixXd traj(6, 15);
      traj.col(0) = testutil::random_matrix(rng, 6, 1);
      for (int k = 1; k < 15; ++k) traj.col(k) = T * traj.col(k - 1);
      series.push_back(traj);
    }
    const auto r = estimate_spectrum(hankel_embed(series, 1), dt, 1e-10);
    const Eigen::VectorXcd ev = J.eigenvalues();
    ComplexList truth(ev.data(), ev.data() + ev.size());
    EXPECT_LT(multiset_distance(r.continuous, truth), 1e-6) << "trial " << trial;
  }
}

TEST(Dmd, ComplexCsvRoundTrip) {
  const ComplexList v{{1.0, -2.5}, {0.1, 0.0}, {-1e-300, 3e17}};
  std::stringstream ss;
  write_complex_csv(ss, v);
  EXPECT_EQ(ss.str().rfind("re,im\n", 0), 0u);
  EXPECT_EQ(read_complex_csv(ss), v);
}
