#pragma once

#include <vector>

#include <Eigen/Dense>

#include "specid/types.hpp"

namespace specid {

/// Minimum-cost assignment for a rectangular cost matrix (rows <= cols or
/// rows > cols). Returns, for every row, the assigned column or -1.
std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost);

/// Pairs a with b minimising the summed distance; result[i] is the index in b
/// matched to a[i] (or -1 when |a| > |b|).
std::vector<int> match_complex(const ComplexList& a, const ComplexList& b);

/// Largest matched distance after optimal one-to-one matching of equal-size
/// multisets. Returns +inf on size mismatch.
double multiset_distance(const ComplexList& a, const ComplexList& b);

}  // namespace specid
