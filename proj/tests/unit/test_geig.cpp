#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "specid/dynamics.hpp"
#include "specid/error.hpp"
#include "specid/geig.hpp"
#include "specid/matching.hpp"
#include "test_util.hpp"

using namespace specid;

namespace {

Eigen::MatrixXd linear_A() {
  Eigen::Matrix2d A;
  A << -1, -2, 1, -1;
  return A;
}

cdouble det_chi(const Eigen::MatrixXd& A, const Eigen::MatrixXd& BCt, cdouble lambda,
                cdouble mu) {
  const Eigen::MatrixXcd M = A.cast<cdouble>() - lambda * BCt.cast<cdouble>() -
                             mu * Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  return M.determinant();
}

}  // namespace

TEST(Pencil, IdentityCouplingIsStandardProblem) {
  Rng rng(1);
  const Eigen::MatrixXd A = testutil::random_matrix(rng, 3, 3);
  const cdouble mu(0.3, -0.2);
  const auto sol = solve_pencil(A, Eigen::MatrixXd::Identity(3, 3), mu);
  EXPECT_EQ(sol.n_infinite, 0);
  EXPECT_FALSE(sol.singular);
  const Eigen::VectorXcd ev = A.eigenvalues();
  ComplexList expected;
  for (int i = 0; i < 3; ++i) expected.push_back(ev(i) - mu);
  EXPECT_LT(multiset_distance(sol.lambdas(), expected), 1e-12);
}

TEST(Pencil, ZeroCouplingHasNoFiniteRoots) {
  const auto sol = solve_pencil(linear_A(), Eigen::MatrixXd::Zero(2, 2), cdouble(0.5, 0.1));
  EXPECT_TRUE(sol.roots.empty());
  EXPECT_EQ(sol.n_infinite, 2);
  EXPECT_FALSE(sol.singular);
}

TEST(Pencil, SingularPencilIsReported) {
  // mu is an eigenvalue of A and the coupling vanishes: det is identically zero.
  Eigen::Matrix2d A = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  const auto sol = solve_pencil(A, Eigen::MatrixXd::Zero(2, 2), 1.0);
  EXPECT_TRUE(sol.singular);
  EXPECT_TRUE(sol.roots.empty());
}

TEST(Pencil, RankDeficientCoupling) {
  Eigen::MatrixXd BCt = Eigen::MatrixXd::Zero(2, 2);
  BCt(0, 0) = 1.0;
  const auto sol = solve_pencil(linear_A(), BCt, cdouble(0.2, 0.4));
  EXPECT_EQ(sol.roots.size(), 1u);
  EXPECT_EQ(sol.n_infinite, 1);
}

TEST(Pencil, RoundTripLinearPreset) {
  const Eigen::MatrixXd BCt = Eigen::Vector2d(1, 2).asDiagonal();
  const Eigen::MatrixXd block = linear_A() - 0.7 * BCt;
  const Eigen::VectorXcd mus = block.eigenvalues();
  for (int i = 0; i < 2; ++i) {
    const auto sol = solve_pencil(linear_A(), BCt, mus(i));
    double best = INFINITY;
    for (const auto& l : sol.lambdas()) best = std::min(best, std::abs(l - 0.7));
    EXPECT_LT(best, 1e-9);
  }
}

TEST(Pencil, RoundTripRandom) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 4;
    const auto sys = testutil::random_system(rng, m);
    if (sys.m_bar != m) continue;
    const cdouble lambda0(rng.uniform(-3, 3), trial % 2 ? rng.uniform(-1, 1) : 0.0);
    const Eigen::MatrixXcd block =
        sys.A.cast<cdouble>() - lambda0 * sys.coupling().cast<cdouble>();
    const Eigen::VectorXcd mus = block.eigenvalues();
    for (int i = 0; i < m; ++i) {
      const auto sol = solve_pencil(sys.A, sys.coupling(), mus(i));
      double best = INFINITY;
      for (const auto& l : sol.lambdas()) best = std::min(best, std::abs(l - lambda0));
      EXPECT_LT(best, 1e-8) << "trial " << trial;
    }
  }
}

TEST(Pencil, ResidualsAreSmall) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sys = testutil::random_system(rng, 3, -2, 2);
    const cdouble mu(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const auto sol = solve_pencil(sys.A, sys.coupling(), mu);
    for (const auto& root : sol.roots) {
      EXPECT_FALSE(root.flagged);
      const Eigen::MatrixXcd M = sys.A.cast<cdouble>() -
                                 root.value * sys.coupling().cast<cdouble>() -
                                 mu * Eigen::MatrixXcd::Identity(3, 3);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
      EXPECT_LE(svd.singularValues().minCoeff(), 1e-7 * sys.A.norm());
    }
  }
}

TEST(Pencil, DimensionChecks) {
  EXPECT_THROW(solve_pencil(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 2), 0.0),
               InvalidArgument);
  EXPECT_THROW(solve_pencil(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3), 0.0),
               InvalidArgument);
}

TEST(Candidates, DecoupledSpectrumContainsZero) {
  const auto sys = linearize(linear_preset());
  const Eigen::VectorXcd ev = sys.A.eigenvalues();
  ComplexList mus;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 2; ++i) mus.push_back(ev(i));
  const auto set = build_candidate_set(sys.A, sys.coupling(), mus);
  EXPECT_EQ(set.size(), 12u);
  for (std::size_t i = 0; i < mus.size(); ++i) {
    double best = INFINITY;
    for (const auto& e : set.entries) {
      if (e.source_index == static_cast<int>(i)) best = std::min(best, std::abs(e.lambda));
    }
    EXPECT_LT(best, 1e-12);
  }
}

TEST(Candidates, EachLaplacianEigenvalueAppearsMTimes) {
  Rng rng(3);
  const auto sys = testutil::random_system(rng, 2);
  const auto g = erdos_renyi_weighted(5, 0.8, 4);
  const auto L = laplacian(g);
  const auto mus = jacobian_spectrum(build_jacobian(sys, L));
  const auto set = build_candidate_set(sys.A, sys.coupling(), mus);
  EXPECT_EQ(set.size(), 20u);
  for (const auto& lam : exact_spectrum(L).values) {
    int count = 0;
    for (const auto& e : set.entries) count += std::abs(e.lambda - lam) < 1e-8 ? 1 : 0;
    EXPECT_GE(count, 2);
  }
  for (const auto& e : set.entries) {
    EXPECT_EQ(e.source_mu, mus[e.source_index]);
  }
}

TEST(Candidates, CsvRoundTrip) {
  const auto sys = linearize(linear_preset());
  const auto set = build_candidate_set(sys.A, sys.coupling(),
                                       {cdouble(-1, 0.5), cdouble(-1, -0.5), cdouble(-3, 0)});
  std::stringstream ss;
  write_candidates_csv(ss, set);
  EXPECT_EQ(ss.str().rfind("lambda_re,lambda_im,mu_re,mu_im\n", 0), 0u);
  const auto back = read_candidates_csv(ss, 2, 2);
  ASSERT_EQ(back.size(), set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_EQ(back.entries[i].lambda, set.entries[i].lambda);
    EXPECT_EQ(back.entries[i].source_mu, set.entries[i].source_mu);
    EXPECT_EQ(back.entries[i].source_index, set.entries[i].source_index);
  }
  std::stringstream bad("lambda_re,lambda_im,mu_re,mu_im\n1,2,3\n");
  EXPECT_THROW(read_candidates_csv(bad, 2, 2), IoError);
}

TEST(CharPoly, ScalarHandExpansion) {
  const double a = 1.7, g = -0.4;
  const auto p = char_poly(Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Constant(1, 1, g));
  EXPECT_NEAR(std::abs(p.alpha(1) - (-g)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p.beta(0) - (-a)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p.beta(1) - 1.0), 0.0, 1e-12);
  EXPECT_FALSE(cross_term_diagnostic(p).has_cross_terms);
}

TEST(CharPoly, EvaluationMatchesDeterminant) {
  Rng rng(21);
  for (int m = 1; m <= 4; ++m) {
    const auto sys = testutil::random_system(rng, m, -2, 2);
    const auto p = char_poly(sys.A, sys.coupling());
    EXPECT_NEAR(std::abs(p.coeff(0, m) - std::pow(-1.0, m)), 0.0, 1e-9);
    for (int k = 0; k < 20; ++k) {
      const cdouble l(rng.uniform(-2, 2), rng.uniform(-2, 2));
      const cdouble mu(rng.uniform(-2, 2), rng.uniform(-2, 2));
      const cdouble d = det_chi(sys.A, sys.coupling(), l, mu);
      EXPECT_LE(std::abs(p.evaluate(l, mu) - d), 1e-8 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST(CharPoly, LambdaMuCoefficientIsSignedTrace) {
  Rng rng(33);
  for (int m = 1; m <= 3; ++m) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto sys = testutil::random_system(rng, m, 0, 20);
      const auto report = cross_term_diagnostic(char_poly(sys.A, sys.coupling()));
      const double expected = std::pow(-1.0, m) * sys.coupling().trace();
      EXPECT_LE(std::abs(report.trace_coeff - expected), 1e-9 * std::abs(expected));
    }
  }
}

TEST(CharPoly, TraceFreeCommutingCaseHasNoLambdaMuTerm) {
  Eigen::Matrix2d A = Eigen::Vector2d(0.5, -1.2).asDiagonal();
  Eigen::Matrix2d BCt = Eigen::Vector2d(0.8, -0.8).asDiagonal();
  const auto p = char_poly(A, BCt);
  EXPECT_EQ(p.coeff(1, 1), cdouble(0.0));
}

TEST(CharPoly, IdentityCouplingHasCrossTerms) {
  Rng rng(4);
  for (int m = 2; m <= 4; ++m) {
    const auto A = testutil::random_matrix(rng, m, m);
    EXPECT_TRUE(cross_term_diagnostic(char_poly(A, Eigen::MatrixXd::Identity(m, m)))
                    .has_cross_terms);
  }
  const auto sys = testutil::random_system(rng, 2, 0, 20);
  EXPECT_TRUE(cross_term_diagnostic(char_poly(sys.A, sys.coupling())).has_cross_terms);
}

TEST(CharPoly, RejectsLargeBlocks) {
  EXPECT_THROW(char_poly(Eigen::MatrixXd::Identity(7, 7), Eigen::MatrixXd::Identity(7, 7)),
               InvalidArgument);
}

// With cross terms present, the spurious solutions generated by the m
// Jacobian eigenvalues of one Laplacian eigenvalue do not coincide.
TEST(CharPoly, SpuriousSolutionsSeparate) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sys = testutil::random_system(rng, 2, 0, 20);
    const double lam = rng.uniform(0.5, 10);
    const Eigen::MatrixXd block = sys.A - lam * sys.coupling();
    const Eigen::VectorXcd mus = block.eigenvalues();
    ComplexList spurious;
    for (int j = 0; j < 2; ++j) {
      for (const auto& l : solve_pencil(sys.A, sys.coupling(), mus(j)).lambdas()) {
        if (std::abs(l - lam) > 1e-6) spurious.push_back(l);
      }
    }
    ASSERT_EQ(spurious.size(), 2u);
    EXPECT_GT(std::abs(spurious[0] - spurious[1]), 1e-6);
  }
}
