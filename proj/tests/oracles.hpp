#pragma once

// Test-only reference computations, independent of the library's
// LU determinants, projections and eigensolvers.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nframe/linalg.hpp"

namespace oracle {

using nframe::Index;
using nframe::Matrix;
using nframe::Vector;

// Leibniz expansion over all permutations.
inline double leibniz_det(const Matrix& m) {
  const auto n = static_cast<int>(m.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    double term = (inversions % 2) ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) term *= m(i, perm[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Bordered Gram determinant written out entry by entry.
inline double n_inner(const Vector& x, const Vector& y, const std::vector<Vector>& anchors) {
  const auto n = static_cast<Index>(anchors.size()) + 1;
  Matrix b(n, n);
  auto v = [&](Index i, bool left) -> const Vector& {
    if (i == 0) return left ? x : y;
    return anchors[static_cast<std::size_t>(i - 1)];
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) b(i, j) = v(i, true).dot(v(j, false));
  return leibniz_det(b);
}

// Eigenvalues of [[a, b], [b, c]], ascending.
inline std::pair<double, double> sym2_eigenvalues(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return {mean - radius, mean + radius};
}

}  // namespace oracle
