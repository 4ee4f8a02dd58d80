#pragma once

// Dense linear-algebra vocabulary shared by every module: matrix aliases,
// symmetric spectra, spectral functions and singular values.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "nframe/errors.hpp"

namespace nframe {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw InputError(what + ": non-finite entry");
}

// Eigenpairs of a symmetric matrix, eigenvalues ascending. Eigen's tridiagonal
// QR solver is deterministic for a given input, and its selection sort keeps
// the original order among exactly equal eigenvalues.
struct Spectrum {
  Vector values;
  Matrix vectors;  // columns are eigenvectors

  double min() const { return values.size() ? values(0) : 0.0; }
  double max() const { return values.size() ? values(values.size() - 1) : 0.0; }
};

inline Spectrum symmetric_spectrum(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("symmetric_spectrum: matrix is not square");
  if (m.rows() == 0) return {Vector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m));
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// V diag(fn(lambda)) V^T, symmetrized to remove round-off asymmetry.
template <class Fn>
Matrix spectral_apply(const Spectrum& s, Fn fn) {
  Vector mapped = s.values.unaryExpr(fn);
  return symmetrized(s.vectors * mapped.asDiagonal() * s.vectors.transpose());
}

// Singular values, descending.
inline Vector singular_values(const Matrix& m) {
  if (m.size() == 0) return Vector(0);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

inline double spectral_norm(const Matrix& m) {
  Vector s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

// Smallest singular value counting min(rows, cols) values; zero for an empty matrix.
inline double min_singular_value(const Matrix& m) {
  Vector s = singular_values(m);
  return s.size() ? s(s.size() - 1) : 0.0;
}

inline double symmetry_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace nframe
