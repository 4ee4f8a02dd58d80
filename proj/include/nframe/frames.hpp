#pragma once

// Finite frames relative to an anchor tuple: analysis, synthesis and frame
// operators, optimal bounds, canonical dual and canonical tight frames.
//
// A FrameSystem keeps the ambient vectors f_i together with phi, the m x k
// matrix whose rows are their W-coordinates. Everything is computed on phi:
//
//   analysis   f  -> gamma * phi * Qf          (entries <f, f_i | F>)
//   synthesis  c  -> phi^T c                   (W-coordinates of sum c_i f_i)
//   frame op   S  =  gamma * phi^T phi         (so <S f, f>_F = sum |<f, f_i|F>|^2)
//
// The optimal frame bounds are the extreme eigenvalues of S.

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "nframe/linalg.hpp"
#include "nframe/nspace.hpp"

namespace nframe {

inline constexpr double kFrameTolerance = 1e-9;
inline constexpr double kBesselTolerance = 1e-10;
inline constexpr double kTightTolerance = 1e-9;

using CoefficientSeq = Vector;

class FrameSystem {
 public:
  FrameSystem(InducedSpace space, std::vector<AmbientVector> vectors)
      : FrameSystem(std::make_shared<const InducedSpace>(std::move(space)), std::move(vectors)) {}

  FrameSystem(std::shared_ptr<const InducedSpace> space, std::vector<AmbientVector> vectors)
      : space_(std::move(space)), vectors_(std::move(vectors)) {
    if (!space_) throw InputError("FrameSystem: null induced space");
    if (vectors_.empty()) throw InputError("FrameSystem: at least one vector is required");
    coords_.resize(static_cast<Index>(vectors_.size()), space_->rank());
    for (std::size_t i = 0; i < vectors_.size(); ++i)
      coords_.row(static_cast<Index>(i)) = space_->project(vectors_[i]).transpose();
  }

  // Family whose i-th vector is the canonical representative with W-coordinates coords.row(i).
  static FrameSystem from_coordinates(std::shared_ptr<const InducedSpace> space, const Matrix& coords) {
    if (!space) throw InputError("FrameSystem: null induced space");
    if (coords.cols() != space->rank())
      throw InputError("FrameSystem::from_coordinates: coordinate width does not match rank");
    require_finite(coords, "FrameSystem::from_coordinates");
    std::vector<AmbientVector> vectors;
    vectors.reserve(static_cast<std::size_t>(coords.rows()));
    for (Index i = 0; i < coords.rows(); ++i) vectors.push_back(space->lift(coords.row(i).transpose()));
    return FrameSystem(std::move(space), std::move(vectors));
  }

  const InducedSpace& space() const { return *space_; }
  const std::shared_ptr<const InducedSpace>& shared_space() const { return space_; }
  const std::vector<AmbientVector>& vectors() const { return vectors_; }
  const Matrix& coordinates() const { return coords_; }
  Index size() const { return coords_.rows(); }
  Index rank() const { return space_->rank(); }
  double gamma() const { return space_->gamma(); }

 private:
  std::shared_ptr<const InducedSpace> space_;
  std::vector<AmbientVector> vectors_;
  Matrix coords_;
};

inline bool same_space(const FrameSystem& a, const FrameSystem& b) {
  return a.shared_space() == b.shared_space() || a.space() == b.space();
}

struct FrameOperator {
  Matrix matrix;  // k x k, symmetric positive semidefinite
  Spectrum spectrum;

  double lambda_min() const { return spectrum.min(); }
  double lambda_max() const { return spectrum.max(); }
  bool invertible(double tol = kFrameTolerance) const {
    return lambda_min() > tol * std::max(1.0, lambda_max());
  }

  Matrix inverse(double tol = kFrameTolerance) const {
    require_invertible(tol);
    return spectral_apply(spectrum, [](double l) { return 1.0 / l; });
  }

  // The positive square root of S^{-1}.
  Matrix inverse_sqrt(double tol = kFrameTolerance) const {
    require_invertible(tol);
    return spectral_apply(spectrum, [](double l) { return 1.0 / std::sqrt(l); });
  }

 private:
  void require_invertible(double tol) const {
    if (!invertible(tol))
      throw SingularFrameOperatorError("frame operator is singular: the family is not a frame");
  }
};

inline FrameOperator make_frame_operator(const Matrix& s) {
  Matrix sym = symmetrized(s);
  Spectrum spec = symmetric_spectrum(sym);
  return {std::move(sym), std::move(spec)};
}

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool optimal = false;
};

struct TightCheck {
  bool tight = false;
  double bound = 0.0;  // the lower optimal bound A; the common bound when tight
};

// T_F^*: {<f, f_i | a_2, ..., a_n>}_i.
inline CoefficientSeq analysis(const AmbientVector& f, const FrameSystem& fs) {
  return fs.gamma() * (fs.coordinates() * fs.space().project(f));
}

// T_F: W-coordinates of sum_i c_i f_i.
inline InducedVector synthesis(const CoefficientSeq& c, const FrameSystem& fs) {
  detail::require_length(c, fs.size(), "synthesis");
  return fs.coordinates().transpose() * c;
}

inline FrameOperator frame_operator(const FrameSystem& fs) {
  return make_frame_operator(fs.gamma() * (fs.coordinates().transpose() * fs.coordinates()));
}

// <S_F f, f>_F; equals sum_i |<f, f_i | F>|^2.
inline double frame_quadratic_form(const AmbientVector& f, const FrameSystem& fs) {
  const InducedVector u = fs.space().project(f);
  return fs.space().inner(frame_operator(fs).matrix * u, u);
}

inline FrameBounds optimal_bounds(const FrameOperator& s) {
  return {std::max(0.0, s.lambda_min()), std::max(0.0, s.lambda_max()), true};
}

inline FrameBounds optimal_bounds(const FrameSystem& fs) { return optimal_bounds(frame_operator(fs)); }

// Frame iff A > tol * max(1, B).
inline bool is_frame(const FrameSystem& fs, double tol = kFrameTolerance) {
  if (!(tol > 0.0)) throw PreconditionError("is_frame: tolerance must be positive");
  const FrameBounds b = optimal_bounds(fs);
  return b.lower > tol * std::max(1.0, b.upper);
}

inline bool is_bessel(const FrameSystem& fs, double bound, double tol = kBesselTolerance) {
  if (!(bound > 0.0)) throw PreconditionError("is_bessel: bound must be positive");
  return frame_operator(fs).lambda_max() <= bound + tol * std::max(1.0, bound);
}

inline TightCheck is_tight(const FrameSystem& fs, double tol = kTightTolerance) {
  if (!(tol > 0.0)) throw PreconditionError("is_tight: tolerance must be positive");
  const FrameBounds b = optimal_bounds(fs);
  return {b.upper - b.lower <= tol * std::max(1.0, b.upper), b.lower};
}

// {S^{-1} f_i} as canonical representatives.
inline FrameSystem canonical_dual(const FrameSystem& fs, double tol = kFrameTolerance) {
  const Matrix s_inv = frame_operator(fs).inverse(tol);
  return FrameSystem::from_coordinates(fs.shared_space(), fs.coordinates() * s_inv);
}

// {S^{-1/2} f_i}, a normalized tight frame.
inline FrameSystem canonical_tight(const FrameSystem& fs, double tol = kFrameTolerance) {
  const Matrix s_inv_half = frame_operator(fs).inverse_sqrt(tol);
  return FrameSystem::from_coordinates(fs.shared_space(), fs.coordinates() * s_inv_half);
}

// sum_i <f, S^{-1} f_i | F> f_i, in W-coordinates.
inline InducedVector reconstruct(const AmbientVector& f, const FrameSystem& fs, double tol = kFrameTolerance) {
  const FrameSystem dual = canonical_dual(fs, tol);
  return synthesis(analysis(f, dual), fs);
}

// sum_i <f, f_i | F> S^{-1} f_i, in W-coordinates.
inline InducedVector reconstruct_from_dual(const AmbientVector& f, const FrameSystem& fs,
                                           double tol = kFrameTolerance) {
  const FrameSystem dual = canonical_dual(fs, tol);
  return synthesis(analysis(f, fs), dual);
}

// (1/A) sum_i <f, f_i | F> f_i for a tight frame with bound A.
inline InducedVector tight_reconstruct(const AmbientVector& f, const FrameSystem& fs, double bound) {
  if (!(bound > 0.0)) throw PreconditionError("tight_reconstruct: bound must be positive");
  return synthesis(analysis(f, fs), fs) / bound;
}

// Every vector multiplied by alpha.
inline FrameSystem scaled(const FrameSystem& fs, double alpha) {
  return FrameSystem::from_coordinates(fs.shared_space(), alpha * fs.coordinates());
}

}  // namespace nframe
