#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specid/dynamics.hpp"
#include "specid/geig.hpp"
#include "specid/graph.hpp"
#include "specid/hull.hpp"
#include "specid/types.hpp"

namespace specid {

struct FeasibilityReport {
  bool trace_nonzero = false;
  std::vector<double> moments_bc;  // M_k(BC^T), k = 1..k_max
  std::optional<int> first_vanishing_k;
  bool m_bar_equals_m = false;

  bool feasible() const { return !first_vanishing_k.has_value(); }
};

/// Checks M_k(BC^T) != 0 for k = 1..k_max. A moment counts as vanishing when
/// |M_k| <= threshold * max(1, rho^k), rho the spectral radius of BC^T.
FeasibilityReport feasibility_check(const LinearizedSystem& sys, int k_max,
                                    double threshold = 1e-10);

struct Cluster {
  cdouble center;
  std::vector<int> members;  // indices into the candidate set
  int size() const { return static_cast<int>(members.size()); }
  bool accepted = false;
  int copies = 0;  // size / m when accepted
};

struct ClusterReport {
  std::vector<Cluster> clusters;
  double epsilon = 0.0;
  int m = 0;
};

struct Identification {
  ClusterReport report;
  ComplexList identified;  // sorted by (real, imag)
};

/// Single-linkage clustering of the candidates at distance < epsilon. A
/// cluster of size q*m is read as q coincident eigenvalues and emits q copies
/// of its mean.
Identification algorithm1_filter(const CandidateSet& lambda, double epsilon);

struct ExtendedSpectrum {
  ComplexList values;
  std::vector<int> members;  // indices into the candidate set
  HullRegion hull;
  bool bounding_box_fallback = false;
  std::vector<std::string> warnings;
};

/// Keeps every candidate within epsilon of the (mirrored) convex hull of the
/// identified values.
ExtendedSpectrum hull_extend_filter(const ComplexList& identified,
                                    const CandidateSet& lambda, double epsilon);

/// Keeps candidates with Re in [0, rho + epsilon] and |Im| <= epsilon, where
/// rho is the largest identified value.
ExtendedSpectrum real_axis_fallback(const ComplexList& identified,
                                    const CandidateSet& lambda, double epsilon);

struct HullMoments {
  double m1_hat = 0.0;
  double m2_hat = 0.0;
  double lambda2_hat = 0.0;
  double lambdan_hat = 0.0;
  bool degenerate = false;
};

/// Moments of the uniform distribution on the hull; lambda2/lambdan are the
/// minimum/maximum real part of the hull.
HullMoments hull_moments(const HullRegion& hull);

/// Smallest identified real part above epsilon, for hulls that touch the
/// origin. Falls back to the hull minimum.
double refined_lambda2(const HullRegion& hull, const ComplexList& identified,
                       double epsilon);

/// T(k, j) = coefficient of t^j in tr((A + t BC^T)^k) for 0 <= j <= k <= k_max.
/// Reduces to binomial(k, j) tr(A^{k-j} (BC^T)^j) when A and BC^T commute.
std::vector<std::vector<double>> trace_word_sums(const Eigen::MatrixXd& A,
                                                 const Eigen::MatrixXd& BCt, int k_max);

/// Laplacian moments M_1..M_{k_max} from the full Jacobian spectrum.
ComplexList moments_via_recursion(const ComplexList& mus, const LinearizedSystem& sys,
                                  int n, int k_max, double threshold = 1e-10);

struct OracleComparison {
  std::vector<std::pair<int, int>> pairs;  // (identified index, exact index)
  std::vector<double> errors;              // per matched pair
  double max_error = 0.0;
  int missed = 0;
  int spurious = 0;
  double m1_error = 0.0;  // identified mean vs exact mean
  double m2_error = 0.0;
};

/// Optimal one-to-one matching; pairs further apart than `match_tol` count as
/// a miss plus a spurious value.
OracleComparison compare_to_oracle(const ComplexList& identified, const Spectrum& exact,
                                   double match_tol);

/// Fraction of exact eigenvalues with some value within tol.
double coverage(const ComplexList& values, const Spectrum& exact, double tol);

}  // namespace specid
