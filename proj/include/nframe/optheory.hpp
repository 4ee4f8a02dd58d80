#pragma once

// Operators on X_F and the frame constructions built from them.
//
// A LinearMap acts on W-coordinates. Because <.,.>_F is gamma times the
// coordinate dot product, adjoints are plain transposes. Rectangular maps
// between coefficient space and X_F (synthesis, analysis, pseudo-inverses)
// are expressed in an F-orthonormal basis of X_F, i.e. the rows of Q scaled
// by 1/sqrt(gamma), so their matrix norms are the operator norms.

#include <algorithm>
#include <cmath>
#include <utility>

#include "nframe/frames.hpp"
#include "nframe/linalg.hpp"

namespace nframe {

using LinearMap = Matrix;  // k x k
using RectMap = Matrix;

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kInvertibilityTolerance = 1e-9;
inline constexpr double kPseudoInverseTolerance = 1e-10;

// The unique positive semidefinite square root.
inline LinearMap sqrt_psd(const LinearMap& m, double tol = kPsdTolerance) {
  if (m.rows() != m.cols()) throw InputError("sqrt_psd: matrix is not square");
  require_finite(m, "sqrt_psd");
  const double scale = std::max(1.0, max_abs(m));
  if (symmetry_defect(m) > kSymmetryTolerance * scale) throw DomainError("sqrt_psd: matrix is not symmetric");
  const Spectrum s = symmetric_spectrum(m);
  if (s.min() < -tol * scale) throw DomainError("sqrt_psd: matrix is not positive semidefinite");
  return spectral_apply(s, [](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; });
}

// Moore-Penrose inverse by SVD; singular values at or below tol * sigma_max count as zero.
inline RectMap pseudo_inverse(const RectMap& t, double tol = kPseudoInverseTolerance) {
  require_finite(t, "pseudo_inverse");
  if (t.size() == 0) return RectMap::Zero(t.cols(), t.rows());
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = tol * (sigma.size() ? sigma(0) : 0.0);
  Vector inv = Vector::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff && sigma(i) > 0.0) inv(i) = 1.0 / sigma(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

inline Index numerical_rank(const Matrix& m, double tol = kInvertibilityTolerance) {
  const Vector s = singular_values(m);
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  return static_cast<Index>((s.array() > tol * std::max(1.0, s(0))).count());
}

// sigma_min > tol * max(1, sigma_max).
inline bool is_invertible(const LinearMap& u, double tol = kInvertibilityTolerance) {
  if (u.rows() != u.cols()) throw InputError("is_invertible: matrix is not square");
  const Vector s = singular_values(u);
  return s.size() > 0 && s(s.size() - 1) > tol * std::max(1.0, s(0));
}

// T_F : l^2 -> X_F, k x m.
inline RectMap synthesis_operator(const FrameSystem& fs) {
  return std::sqrt(fs.gamma()) * fs.coordinates().transpose();
}

// T_F^* : X_F -> l^2, m x k.
inline RectMap analysis_operator(const FrameSystem& fs) { return synthesis_operator(fs).transpose(); }

namespace detail {

inline void require_square_map(const LinearMap& u, const FrameSystem& fs, const char* what) {
  if (u.rows() != fs.rank() || u.cols() != fs.rank())
    throw InputError(std::string(what) + ": operator must be " + std::to_string(fs.rank()) + "x" +
                     std::to_string(fs.rank()));
  require_finite(u, what);
}

inline void require_compatible(const FrameSystem& a, const FrameSystem& b, const char* what) {
  if (!same_space(a, b)) throw InputError(std::string(what) + ": frames use different anchor sets");
  if (a.size() != b.size()) throw InputError(std::string(what) + ": frames have different lengths");
}

}  // namespace detail

// {U f_i}.
inline FrameSystem image_frame(const LinearMap& u, const FrameSystem& fs) {
  detail::require_square_map(u, fs, "image_frame");
  return FrameSystem::from_coordinates(fs.shared_space(), fs.coordinates() * u.transpose());
}

// U S U^*.
inline FrameOperator image_frame_operator(const LinearMap& u, const FrameSystem& fs) {
  detail::require_square_map(u, fs, "image_frame_operator");
  return make_frame_operator(u * frame_operator(fs).matrix * u.transpose());
}

// {f_i + U f_i}.
inline FrameSystem perturb_identity(const LinearMap& u, const FrameSystem& fs) {
  detail::require_square_map(u, fs, "perturb_identity");
  return image_frame(LinearMap::Identity(fs.rank(), fs.rank()) + u, fs);
}

// (I + U) S (I + U)^*.
inline FrameOperator perturbed_frame_operator(const LinearMap& u, const FrameSystem& fs) {
  detail::require_square_map(u, fs, "perturbed_frame_operator");
  return image_frame_operator(LinearMap::Identity(fs.rank(), fs.rank()) + u, fs);
}

// {L1 f_i + L2 g_i}.
inline FrameSystem combine(const LinearMap& l1, const FrameSystem& fs, const LinearMap& l2,
                           const FrameSystem& gs) {
  detail::require_compatible(fs, gs, "combine");
  detail::require_square_map(l1, fs, "combine");
  detail::require_square_map(l2, gs, "combine");
  return FrameSystem::from_coordinates(fs.shared_space(),
                                       fs.coordinates() * l1.transpose() + gs.coordinates() * l2.transpose());
}

// T_F^* L1^* + T_F'^* L2^* : X_F -> l^2, the analysis operator of {L1 f_i + L2 g_i}.
inline RectMap combined_analysis_operator(const LinearMap& l1, const FrameSystem& fs, const LinearMap& l2,
                                          const FrameSystem& gs) {
  detail::require_compatible(fs, gs, "combined_analysis_operator");
  detail::require_square_map(l1, fs, "combined_analysis_operator");
  detail::require_square_map(l2, gs, "combined_analysis_operator");
  return analysis_operator(fs) * l1.transpose() + analysis_operator(gs) * l2.transpose();
}

// The combined family is a frame exactly when its analysis operator is
// bounded below: sigma_min > tol * sigma_max (full column rank).
inline bool combination_is_frame(const LinearMap& l1, const FrameSystem& fs, const LinearMap& l2,
                                 const FrameSystem& gs, double tol = kInvertibilityTolerance) {
  const RectMap t = combined_analysis_operator(l1, fs, l2, gs);
  if (t.rows() < t.cols()) return false;
  const Vector s = singular_values(t);
  return s(0) > 0.0 && s(s.size() - 1) > tol * s(0);
}

struct SurjectivityResult {
  bool surjective = false;
  double lower_bound = 0.0;  // 1 / ||T^dagger||^2 when surjective
};

// A family is a frame iff its synthesis operator maps onto X_F; the
// pseudo-inverse norm then yields the optimal lower bound.
inline SurjectivityResult surjectivity_frame_test(const FrameSystem& fs, double tol = kInvertibilityTolerance) {
  const RectMap t = synthesis_operator(fs);
  if (numerical_rank(t, tol) != fs.rank()) return {false, 0.0};
  const double pinv_norm = spectral_norm(pseudo_inverse(t));
  return {true, 1.0 / (pinv_norm * pinv_norm)};
}

// T_F (T_F')^* = I_F, i.e. gamma * phi^T psi = I_k.
inline bool dual_pair_check(const FrameSystem& fs, const FrameSystem& gs, double tol = kFrameTolerance) {
  detail::require_compatible(fs, gs, "dual_pair_check");
  const Matrix product = fs.gamma() * (fs.coordinates().transpose() * gs.coordinates());
  return max_abs(product - Matrix::Identity(fs.rank(), fs.rank())) <= tol;
}

}  // namespace nframe
