#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specid/types.hpp"

namespace specid {

struct PencilRoot {
  cdouble value;
  // Smallest singular value of (A - value * BC^T - mu I) relative to the
  // scale |A| + |value| |BC^T| + |mu|.
  double residual = 0.0;
  bool flagged = false;  // residual above tolerance
};

/// Finite solutions lambda of (A - mu I) w = lambda BC^T w.
struct PencilSolution {
  cdouble mu;
  std::vector<PencilRoot> roots;
  int n_infinite = 0;
  bool singular = false;  // alpha and beta both vanish: det is identically 0 in lambda

  ComplexList lambdas() const;
};

/// Generalized Schur (QZ) solve of the pencil (A - mu I, BC^T).
/// Eigenvalues with |beta| <= 1e-12 * scale are counted as infinite.
PencilSolution solve_pencil(const Eigen::MatrixXd& A, const Eigen::MatrixXd& BCt,
                            cdouble mu, double residual_tol = 1e-7);

struct Candidate {
  cdouble lambda;
  cdouble source_mu;
  int source_index = -1;  // position of source_mu in the input list
  bool flagged = false;
};

struct CandidateSet {
  std::vector<Candidate> entries;
  int m = 0;
  int m_bar = 0;
  std::vector<std::string> skipped;  // per-mu failures, solve continued

  std::size_t size() const noexcept { return entries.size(); }
  ComplexList lambdas() const;
};

CandidateSet build_candidate_set(const Eigen::MatrixXd& A, const Eigen::MatrixXd& BCt,
                                 const ComplexList& mus, double residual_tol = 1e-7);

// `lambda_re,lambda_im,mu_re,mu_im`
void write_candidates_csv(std::ostream& out, const CandidateSet& set);
CandidateSet read_candidates_csv(std::istream& in, int m, int m_bar);

/// chi(lambda, mu) = det(A - lambda BC^T - mu I), stored as raw coefficients
/// c(s, t) of lambda^s mu^t. In the split form
///   chi = sum_p alpha_p lambda^p - sum_q beta_q mu^q + sum gamma_st lambda^s mu^t
/// alpha_p = c(p, 0) for p >= 1, beta_q = -c(0, q), gamma_st = c(s, t) for s, t >= 1.
struct BivariatePoly {
  int m = 0;
  int m_bar = 0;
  Eigen::MatrixXcd coeffs;  // (m+1) x (m+1), row = power of lambda

  cdouble coeff(int s, int t) const;
  cdouble alpha(int p) const { return coeff(p, 0); }
  cdouble beta(int q) const { return -coeff(0, q); }
  cdouble gamma(int s, int t) const { return coeff(s, t); }
  cdouble evaluate(cdouble lambda, cdouble mu) const;
};

/// Coefficients by interpolating the determinant on a scaled roots-of-unity
/// grid. Supports m <= 6.
BivariatePoly char_poly(const Eigen::MatrixXd& A, const Eigen::MatrixXd& BCt);

struct CrossTermReport {
  bool has_cross_terms = false;
  cdouble trace_coeff;  // coefficient of lambda mu^{m-1}; (-1)^m tr(BC^T)
};

CrossTermReport cross_term_diagnostic(const BivariatePoly& poly);

}  // namespace specid
