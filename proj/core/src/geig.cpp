#include "specid/geig.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <complex>
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "csv.hpp"
#include "specid/dynamics.hpp"
#include "specid/error.hpp"

namespace specid {

ComplexList PencilSolution::lambdas() const {
  ComplexList out;
  out.reserve(roots.size());
  for (const auto& r : roots) out.push_back(r.value);
  return out;
}

namespace {

double pencil_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& BCt, cdouble lambda,
                       cdouble mu) {
  const Eigen::Index m = A.rows();
  Eigen::MatrixXcd M = A.cast<cdouble>() - lambda * BCt.cast<cdouble>();
  M.diagonal().array() -= mu;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const double smin = svd.singularValues()(m - 1);
  const double scale = A.norm() + std::abs(lambda) * BCt.norm() + std::abs(mu);
  return scale > 0.0 ? smin / scale : smin;
}

}  // namespace

PencilSolution solve_pencil(const Eigen::MatrixXd& A, const Eigen::MatrixXd& BCt, cdouble mu,
                            double residual_tol) {
  const Eigen::Index m = A.rows();
  if (m == 0 || A.cols() != m || BCt.rows() != m || BCt.cols() != m) {
    throw InvalidArgument("solve_pencil: A and BC^T must be m x m");
  }
  if (!A.allFinite() || !BCt.allFinite() || !std::isfinite(mu.real()) ||
      !std::isfinite(mu.imag())) {
    throw InvalidArgument("solve_pencil: non-finite input");
  }
  Eigen::MatrixXcd Ma = A.cast<cdouble>();
  Ma.diagonal().array() -= mu;
  Eigen::MatrixXcd Mb = BCt.cast<cdouble>();
  const double scale = std::max({Ma.norm(), Mb.norm(), std::numeric_limits<double>::min()});

  Eigen::VectorXcd alpha(m), beta(m);
  const lapack_int n = static_cast<lapack_int>(m);
  const lapack_int info =
      LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, Ma.data(), n, Mb.data(), n, alpha.data(),
                    beta.data(), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw NumericalFailure("solve_pencil: QZ iteration failed (info=" + std::to_string(info) +
                           ") for mu=" + detail::format_double(mu.real()) + "+" +
                           detail::format_double(mu.imag()) + "i");
  }

  PencilSolution sol;
  sol.mu = mu;
  const double zero = 1e-12 * scale;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(beta(i)) <= zero) {
      if (std::abs(alpha(i)) <= zero) sol.singular = true;
      ++sol.n_infinite;
      continue;
    }
    PencilRoot root;
    root.value = alpha(i) / beta(i);
    root.residual = pencil_residual(A, BCt, root.value, mu);
    root.flagged = !(root.residual <= residual_tol);
    sol.roots.push_back(root);
  }
  std::sort(sol.roots.begin(), sol.roots.end(),
            [](const PencilRoot& a, const PencilRoot& b) { return complex_less(a.value, b.value); });
  return sol;
}

ComplexList CandidateSet::lambdas() const {
  ComplexList out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.lambda);
  return out;
}

CandidateSet build_candidate_set(const Eigen::MatrixXd& A, const Eigen::MatrixXd& BCt,
                                 const ComplexList& mus, double residual_tol) {
  if (mus.empty()) throw InvalidArgument("build_candidate_set: no Jacobian eigenvalues");
  CandidateSet set;
  set.m = static_cast<int>(A.rows());
  set.m_bar = numerical_rank(BCt);
  for (std::size_t i = 0; i < mus.size(); ++i) {
    try {
      const PencilSolution sol = solve_pencil(A, BCt, mus[i], residual_tol);
      if (sol.singular) {
        set.skipped.push_back("mu[" + std::to_string(i) + "]: singular pencil");
      }
      for (const auto& root : sol.roots) {
        set.entries.push_back({root.value, mus[i], static_cast<int>(i), root.flagged});
      }
    } catch (const NumericalFailure& e) {
      set.skipped.push_back("mu[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return set;
}

void write_candidates_csv(std::ostream& out, const CandidateSet& set) {
  out << "lambda_re,lambda_im,mu_re,mu_im\n";
  for (const auto& e : set.entries) {
    out << detail::format_double(e.lambda.real()) << ',' << detail::format_double(e.lambda.imag())
        << ',' << detail::format_double(e.source_mu.real()) << ','
        << detail::format_double(e.source_mu.imag()) << '\n';
  }
}

CandidateSet read_candidates_csv(std::istream& in, int m, int m_bar) {
  CandidateSet set;
  set.m = m;
  set.m_bar = m_bar;
  std::string line;
  std::map<std::pair<double, double>, int> mu_index;
  while (detail::next_data_line(in, line)) {
    if (detail::trim(line).rfind("lambda_re", 0) == 0) continue;
    auto f = detail::split(line);
    if (f.size() != 4) {
      throw IoError("candidate csv: expected `lambda_re,lambda_im,mu_re,mu_im`, got '" + line +
                    "'");
    }
    Candidate c;
    c.lambda = {detail::parse_double(f[0]), detail::parse_double(f[1])};
    c.source_mu = {detail::parse_double(f[2]), detail::parse_double(f[3])};
    auto key = std::make_pair(c.source_mu.real(), c.source_mu.imag());
    auto [it, inserted] = mu_index.try_emplace(key, static_cast<int>(mu_index.size()));
    c.source_index = it->second;
    set.entries.push_back(c);
  }
  return set;
}

cdouble BivariatePoly::coeff(int s, int t) const {
  if (s < 0 || t < 0 || s > m || t > m) return 0.0;
  return coeffs(s, t);
}

cdouble BivariatePoly::evaluate(cdouble lambda, cdouble mu) const {
  cdouble acc = 0.0;
  cdouble ls = 1.0;
  for (int s = 0; s <= m; ++s) {
    cdouble mt = 1.0;
    for (int t = 0; t <= m; ++t) {
      acc += coeffs(s, t) * ls * mt;
      mt *= mu;
    }
    ls *= lambda;
  }
  return acc;
}

BivariatePoly char_poly(const Eigen::MatrixXd& A, const Eigen::MatrixXd& BCt) {
  const int m = static_cast<int>(A.rows());
  if (m == 0 || A.cols() != m || BCt.rows() != m || BCt.cols() != m) {
    throw InvalidArgument("char_poly: A and BC^T must be m x m");
  }
  if (m > 6) throw InvalidArgument("char_poly: diagnostics support m <= 6");

  BivariatePoly poly;
  poly.m = m;
  poly.m_bar = numerical_rank(BCt);
  const int nl = poly.m_bar + 1;  // lambda-degree <= rank(BC^T)
  const int nm = m + 1;

  // Nodes on circles of radius r_mu and r_lambda = r_mu / |BC^T| keep
  // lambda BC^T and mu I at the scale of A; the unit-circle DFT is then
  // perfectly conditioned.
  const double r_mu = std::max(1.0, A.norm());
  const double r_lambda = BCt.norm() > 0.0 ? r_mu / BCt.norm() : 1.0;
  const double spread = std::pow(std::max(r_mu, 1.0 / r_mu), m) *
                        std::pow(std::max(r_lambda, 1.0 / r_lambda), poly.m_bar);
  if (!(spread < 1e12)) {
    throw NumericalFailure("char_poly: interpolation scaling ill-conditioned (estimate " +
                           detail::format_double(spread) + ")");
  }

  auto node = [](int k, int count) {
    return std::polar(1.0, 2.0 * std::numbers::pi * k / count);
  };
  Eigen::MatrixXcd D(nl, nm);
  for (int a = 0; a < nl; ++a) {
    for (int b = 0; b < nm; ++b) {
      const cdouble lambda = r_lambda * node(a, nl);
      const cdouble mu = r_mu * node(b, nm);
      Eigen::MatrixXcd M = A.cast<cdouble>() - lambda * BCt.cast<cdouble>();
      M.diagonal().array() -= mu;
      D(a, b) = M.partialPivLu().determinant();
    }
  }
  // D = V_l C V_m^T with V(a, s) = w^{a s}; the inverse DFT recovers C.
  Eigen::MatrixXcd scaled = Eigen::MatrixXcd::Zero(nl, nm);
  for (int s = 0; s < nl; ++s) {
    for (int t = 0; t < nm; ++t) {
      cdouble acc = 0.0;
      for (int a = 0; a < nl; ++a) {
        for (int b = 0; b < nm; ++b) {
          acc += D(a, b) * std::conj(node(a * s % nl, nl)) * std::conj(node(b * t % nm, nm));
        }
      }
      scaled(s, t) = acc / static_cast<double>(nl * nm);
    }
  }
  const double cutoff = 1e-9 * scaled.cwiseAbs().maxCoeff();
  poly.coeffs = Eigen::MatrixXcd::Zero(m + 1, m + 1);
  for (int s = 0; s < nl; ++s) {
    for (int t = 0; t < nm; ++t) {
      if (s + t > m || std::abs(scaled(s, t)) < cutoff) continue;
      poly.coeffs(s, t) = scaled(s, t) / (std::pow(r_lambda, s) * std::pow(r_mu, t));
    }
  }
  return poly;
}

CrossTermReport cross_term_diagnostic(const BivariatePoly& poly) {
  CrossTermReport report;
  for (int s = 1; s <= poly.m; ++s) {
    for (int t = 1; s + t <= poly.m; ++t) {
      if (poly.coeff(s, t) != 0.0) report.has_cross_terms = true;
    }
  }
  report.trace_coeff = poly.coeff(1, poly.m - 1);
  return report;
}

}  // namespace specid
