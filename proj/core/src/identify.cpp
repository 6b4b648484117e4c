#include "specid/identify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "specid/error.hpp"
#include "specid/matching.hpp"

namespace specid {

namespace {

double spectral_radius(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> eig(M, false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_real(cdouble z) { return std::abs(z.imag()) <= 1e-10; }

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

FeasibilityReport feasibility_check(const LinearizedSystem& sys, int k_max, double threshold) {
  if (k_max < 1) throw InvalidArgument("feasibility_check: k_max must be >= 1");
  const Eigen::MatrixXd BCt = sys.coupling();
  const int m = sys.m();
  FeasibilityReport report;
  report.m_bar_equals_m = sys.m_bar == m;

  Eigen::EigenSolver<Eigen::MatrixXd> eig(BCt, false);
  const Eigen::VectorXcd nu = eig.eigenvalues();
  const double rho = nu.cwiseAbs().maxCoeff();

  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m, m);
  for (int k = 1; k <= k_max; ++k) {
    double moment = 0.0;
    if (k <= 30) {
      power = (power * BCt).eval();
      moment = power.trace() / m;
    } else {
      cdouble acc = 0.0;
      for (Eigen::Index i = 0; i < nu.size(); ++i) acc += std::pow(nu(i), k);
      moment = acc.real() / m;
    }
    report.moments_bc.push_back(moment);
    const double scale = std::max(1.0, std::pow(rho, k));
    if (!report.first_vanishing_k && std::abs(moment) <= threshold * scale) {
      report.first_vanishing_k = k;
    }
  }
  report.trace_nonzero = std::abs(report.moments_bc.front() * m) > threshold * std::max(1.0, rho);
  return report;
}

Identification algorithm1_filter(const CandidateSet& lambda, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("algorithm1_filter: epsilon must be positive");
  if (lambda.m < 1) throw InvalidArgument("algorithm1_filter: candidate set has no block size");
  Identification out;
  out.report.epsilon = epsilon;
  out.report.m = lambda.m;
  const auto& entries = lambda.entries;
  const std::size_t N = entries.size();
  if (N == 0) return out;

  // Visit candidates by real part so only a band of width epsilon is compared.
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  auto by_value = [&](std::size_t a, std::size_t b) {
    if (entries[a].lambda != entries[b].lambda) {
      return complex_less(entries[a].lambda, entries[b].lambda);
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), by_value);

  DisjointSets sets(N);
  for (std::size_t a = 0; a < N; ++a) {
    const cdouble za = entries[order[a]].lambda;
    for (std::size_t b = a + 1; b < N; ++b) {
      const cdouble zb = entries[order[b]].lambda;
      if (zb.real() - za.real() >= epsilon) break;
      if (std::abs(za - zb) < epsilon) sets.unite(order[a], order[b]);
    }
  }

  std::vector<std::vector<int>> groups(N);
  for (std::size_t idx : order) groups[sets.find(idx)].push_back(static_cast<int>(idx));
  for (auto& members : groups) {
    if (members.empty()) continue;
    Cluster c;
    cdouble sum = 0.0;
    for (int idx : members) sum += entries[idx].lambda;
    c.center = sum / static_cast<double>(members.size());
    c.members = std::move(members);
    if (c.size() % lambda.m == 0) {
      c.accepted = true;
      c.copies = c.size() / lambda.m;
      for (int i = 0; i < c.copies; ++i) out.identified.push_back(c.center);
    }
    out.report.clusters.push_back(std::move(c));
  }
  std::sort(out.report.clusters.begin(), out.report.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return complex_less(a.center, b.center); });
  sort_complex(out.identified);
  return out;
}

ExtendedSpectrum hull_extend_filter(const ComplexList& identified, const CandidateSet& lambda,
                                    double epsilon) {
  if (identified.empty()) throw InvalidArgument("hull_extend_filter: nothing identified");
  if (!(epsilon >= 0.0)) throw InvalidArgument("hull_extend_filter: epsilon must be >= 0");
  ExtendedSpectrum out;
  out.hull = convex_hull(identified, /*mirror=*/true);
  const bool all_real = std::all_of(identified.begin(), identified.end(), is_real);

  if (out.hull.degenerate && !all_real) {
    out.bounding_box_fallback = true;
    out.warnings.push_back(
        "identified values do not span a 2-D hull; using an epsilon-dilated bounding box");
    double lo = identified.front().real(), hi = lo, top = 0.0;
    for (const auto& z : identified) {
      lo = std::min(lo, z.real());
      hi = std::max(hi, z.real());
      top = std::max(top, std::abs(z.imag()));
    }
    for (std::size_t i = 0; i < lambda.entries.size(); ++i) {
      const cdouble z = lambda.entries[i].lambda;
      if (z.real() >= lo - epsilon && z.real() <= hi + epsilon &&
          std::abs(z.imag()) <= top + epsilon) {
        out.members.push_back(static_cast<int>(i));
        out.values.push_back(z);
      }
    }
    return out;
  }

  for (std::size_t i = 0; i < lambda.entries.size(); ++i) {
    const cdouble z = lambda.entries[i].lambda;
    if (out.hull.contains(z, epsilon)) {
      out.members.push_back(static_cast<int>(i));
      out.values.push_back(z);
    }
  }
  return out;
}

ExtendedSpectrum real_axis_fallback(const ComplexList& identified, const CandidateSet& lambda,
                                    double epsilon) {
  if (identified.empty()) throw InvalidArgument("real_axis_fallback: nothing identified");
  if (!std::all_of(identified.begin(), identified.end(), is_real)) {
    throw InvalidArgument("real_axis_fallback: identified values must be real");
  }
  double rho = identified.front().real();
  for (const auto& z : identified) rho = std::max(rho, z.real());

  ExtendedSpectrum out;
  out.hull = convex_hull(identified, /*mirror=*/true);
  for (std::size_t i = 0; i < lambda.entries.size(); ++i) {
    const cdouble z = lambda.entries[i].lambda;
    if (z.real() >= 0.0 && z.real() <= rho + epsilon && z.imag() >= -epsilon &&
        z.imag() <= epsilon) {
      out.members.push_back(static_cast<int>(i));
      out.values.push_back(z);
    }
  }
  return out;
}

HullMoments hull_moments(const HullRegion& hull) {
  if (hull.vertices.empty()) throw InvalidArgument("hull_moments: empty hull");
  HullMoments out;
  out.m1_hat = hull.centroid.real();
  out.m2_hat = hull.second_moment.real();
  out.lambda2_hat = hull.vertices.front().real();
  out.lambdan_hat = out.lambda2_hat;
  for (const auto& v : hull.vertices) {
    out.lambda2_hat = std::min(out.lambda2_hat, v.real());
    out.lambdan_hat = std::max(out.lambdan_hat, v.real());
  }
  out.degenerate = hull.degenerate;
  return out;
}

double refined_lambda2(const HullRegion& hull, const ComplexList& identified, double epsilon) {
  const double hull_min = hull_moments(hull).lambda2_hat;
  if (std::abs(hull_min) > epsilon) return hull_min;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : identified) {
    if (z.real() > epsilon) best = std::min(best, z.real());
  }
  return std::isfinite(best) ? best : hull_min;
}

std::vector<std::vector<double>> trace_word_sums(const Eigen::MatrixXd& A,
                                                 const Eigen::MatrixXd& BCt, int k_max) {
  const Eigen::Index m = A.rows();
  if (A.cols() != m || BCt.rows() != m || BCt.cols() != m) {
    throw InvalidArgument("trace_word_sums: A and BC^T must be m x m");
  }
  if (k_max < 0) throw InvalidArgument("trace_word_sums: k_max must be >= 0");
  // (A + t BC^T)^k = sum_j P[j] t^j; P[j] collects every word with j factors of BC^T.
  std::vector<Eigen::MatrixXd> P{Eigen::MatrixXd::Identity(m, m)};
  std::vector<std::vector<double>> T{{static_cast<double>(m)}};
  for (int k = 1; k <= k_max; ++k) {
    std::vector<Eigen::MatrixXd> next(k + 1, Eigen::MatrixXd::Zero(m, m));
    for (int j = 0; j < k; ++j) {
      next[j] += P[j] * A;
      next[j + 1] += P[j] * BCt;
    }
    std::vector<double> row(k + 1);
    for (int j = 0; j <= k; ++j) row[j] = next[j].trace();
    T.push_back(std::move(row));
    P = std::move(next);
  }
  return T;
}

ComplexList moments_via_recursion(const ComplexList& mus, const LinearizedSystem& sys, int n,
                                  int k_max, double threshold) {
  const int m = sys.m();
  if (n < 1 || k_max < 1) throw InvalidArgument("moments_via_recursion: need n, k_max >= 1");
  if (static_cast<int>(mus.size()) != m * n) {
    throw InvalidArgument("moments_via_recursion: expected the full Jacobian spectrum (" +
                          std::to_string(m * n) + " values), got " +
                          std::to_string(mus.size()));
  }
  const Eigen::MatrixXd BCt = sys.coupling();
  const auto T = trace_word_sums(sys.A, BCt, k_max);
  const double rho = spectral_radius(BCt);

  ComplexList moments_l{1.0};  // M_0(L)
  for (int k = 1; k <= k_max; ++k) {
    const double moment_bc = T[k][k] / m;
    if (std::abs(moment_bc) <= threshold * std::max(1.0, std::pow(rho, k))) {
      throw InfeasibleMoment("moments_via_recursion: M_" + std::to_string(k) +
                                 "(BC^T) vanishes; the recursion is singular at k=" +
                                 std::to_string(k),
                             k);
    }
    cdouble moment_j = 0.0;
    for (const auto& mu : mus) moment_j += std::pow(mu, k);
    moment_j /= static_cast<double>(m * n);

    cdouble acc = moment_j;
    for (int j = 0; j < k; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      acc -= sign * T[k][j] * moments_l[j] / static_cast<double>(m);
    }
    const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
    moments_l.push_back(sign_k * acc / moment_bc);
  }
  return ComplexList(moments_l.begin() + 1, moments_l.end());
}

OracleComparison compare_to_oracle(const ComplexList& identified, const Spectrum& exact,
                                   double match_tol) {
  OracleComparison out;
  const auto assignment = match_complex(identified, exact.values);
  for (std::size_t i = 0; i < identified.size(); ++i) {
    const int j = assignment[i];
    if (j < 0) continue;
    const double err = std::abs(identified[i] - exact.values[j]);
    if (err <= match_tol) {
      out.pairs.emplace_back(static_cast<int>(i), j);
      out.errors.push_back(err);
      out.max_error = std::max(out.max_error, err);
    }
  }
  out.missed = static_cast<int>(exact.size() - out.pairs.size());
  out.spurious = static_cast<int>(identified.size() - out.pairs.size());

  auto mean_pow = [](const ComplexList& v, int k) {
    cdouble acc = 0.0;
    for (const auto& z : v) acc += std::pow(z, k);
    return v.empty() ? acc : acc / static_cast<double>(v.size());
  };
  if (!identified.empty() && exact.size() > 0) {
    out.m1_error = std::abs(mean_pow(identified, 1) - mean_pow(exact.values, 1));
    out.m2_error = std::abs(mean_pow(identified, 2) - mean_pow(exact.values, 2));
  }
  return out;
}

double coverage(const ComplexList& values, const Spectrum& exact, double tol) {
  if (exact.size() == 0) return 1.0;
  int hit = 0;
  for (const auto& e : exact.values) {
    for (const auto& v : values) {
      if (std::abs(v - e) <= tol) {
        ++hit;
        break;
      }
    }
  }
  return static_cast<double>(hit) / static_cast<double>(exact.size());
}

}  // namespace specid
