#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace specid {

using cdouble = std::complex<double>;
using ComplexList = std::vector<cdouble>;

// Lexicographic (real, imag) ordering used for every reported eigenvalue list.
inline bool complex_less(const cdouble& a, const cdouble& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void sort_complex(ComplexList& values);

}  // namespace specid
