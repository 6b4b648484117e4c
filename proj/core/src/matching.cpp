#include "specid/matching.hpp"

#include <limits>

namespace specid {

namespace {

// Hungarian algorithm with potentials, rows <= cols. Returns row -> col.
std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

}  // namespace

std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() == 0) return {};
  if (cost.cols() == 0) return std::vector<int>(cost.rows(), -1);
  if (cost.rows() <= cost.cols()) return hungarian(cost);
  const std::vector<int> by_col = hungarian(cost.transpose());
  std::vector<int> out(cost.rows(), -1);
  for (std::size_t c = 0; c < by_col.size(); ++c) {
    if (by_col[c] >= 0) out[by_col[c]] = static_cast<int>(c);
  }
  return out;
}

std::vector<int> match_complex(const ComplexList& a, const ComplexList& b) {
  Eigen::MatrixXd cost(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) cost(i, j) = std::abs(a[i] - b[j]);
  }
  return optimal_assignment(cost);
}

double multiset_distance(const ComplexList& a, const ComplexList& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const auto assignment = match_complex(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[assignment[i]]));
  }
  return worst;
}

}  // namespace specid
