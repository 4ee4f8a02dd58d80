#pragma once

// n-inner products realized by Gram-bordered determinants on R^d, and the
// Hilbert space X_F they induce relative to a fixed anchor tuple.
//
// For anchors F = (a_2, ..., a_n) the n-inner product is
//
//            | <x,y>    <x,a_2>   ...  <x,a_n>   |
//   <x,y|F> = | <a_2,y>  <a_2,a_2> ...  <a_2,a_n> |
//            | ...                               |
//            | <a_n,y>  <a_n,a_2> ...  <a_n,a_n> |
//
// which equals gamma * <Px, Py>, where P projects onto W = span(F)^perp and
// gamma is the Gram determinant of the anchors. InducedSpace realizes X_F as
// W with an orthonormal basis Q (rows), so a coset x + L_F is represented by
// its coordinates Qx and <x,y>_F = gamma * (Qx . Qy).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nframe/linalg.hpp"

namespace nframe {

using AmbientVector = Vector;  // a point of X = R^d
using InducedVector = Vector;  // W-coordinates (length k) of a coset representative

inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kNormClamp = 1e-12;

class AmbientSpace {
 public:
  AmbientSpace(Index dimension, Index order) : dimension_(dimension), order_(order) {
    if (order < 2) throw PreconditionError("AmbientSpace: order n must be at least 2");
    if (order - 1 >= dimension) throw PreconditionError("AmbientSpace: requires n - 1 < d");
  }

  Index dimension() const { return dimension_; }
  Index order() const { return order_; }
  Index induced_rank() const { return dimension_ - (order_ - 1); }

 private:
  Index dimension_;
  Index order_;
};

namespace detail {

inline void require_same_length(std::span<const AmbientVector> vectors, const char* what) {
  for (const auto& v : vectors) {
    if (v.size() != vectors.front().size())
      throw InputError(std::string(what) + ": dimension mismatch");
    require_finite(v, what);
  }
}

inline void require_length(const Vector& v, Index n, const char* what) {
  if (v.size() != n)
    throw InputError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                     std::to_string(v.size()));
  require_finite(v, what);
}

}  // namespace detail

inline Matrix gram_matrix(std::span<const AmbientVector> vectors) {
  const auto count = static_cast<Index>(vectors.size());
  Matrix g(count, count);
  for (Index p = 0; p < count; ++p)
    for (Index q = p; q < count; ++q) g(p, q) = g(q, p) = vectors[p].dot(vectors[q]);
  return g;
}

// det[<v_p, v_q>]; 1 for the empty family.
inline double gram_det(std::span<const AmbientVector> vectors) {
  if (vectors.empty()) return 1.0;
  detail::require_same_length(vectors, "gram_det");
  return gram_matrix(vectors).determinant();
}

// The anchor tuple (a_2, ..., a_n) with its Gram matrix and determinant gamma.
// Dependent anchors are representable (every n-inner product then vanishes);
// build_induced_space rejects them.
class AnchorSet {
 public:
  explicit AnchorSet(std::vector<AmbientVector> anchors) : anchors_(std::move(anchors)) {
    if (anchors_.empty()) throw InputError("AnchorSet: at least one anchor is required");
    detail::require_same_length(anchors_, "AnchorSet");
    if (static_cast<Index>(anchors_.size()) >= anchors_.front().size())
      throw PreconditionError("AnchorSet: requires n - 1 < d");
    gram_ = gram_matrix(anchors_);
    gamma_ = gram_.determinant();
  }

  const std::vector<AmbientVector>& anchors() const { return anchors_; }
  const AmbientVector& operator[](std::size_t i) const { return anchors_[i]; }
  std::size_t size() const { return anchors_.size(); }
  Index order() const { return static_cast<Index>(anchors_.size()) + 1; }
  Index dimension() const { return anchors_.front().size(); }
  const Matrix& gram() const { return gram_; }
  double gamma() const { return gamma_; }

  // A Gram determinant counts as zero when at most tol * max(1, prod of diagonal entries).
  double rank_threshold(double tol = kRankTolerance) const {
    return tol * std::max(1.0, gram_.diagonal().prod());
  }
  bool independent(double tol = kRankTolerance) const { return gamma_ > rank_threshold(tol); }

 private:
  std::vector<AmbientVector> anchors_;
  Matrix gram_;
  double gamma_ = 0.0;
};

inline double n_inner(const AmbientVector& x, const AmbientVector& y, const AnchorSet& anchors) {
  const Index d = anchors.dimension();
  detail::require_length(x, d, "n_inner");
  detail::require_length(y, d, "n_inner");
  const Index n = anchors.order();
  Matrix bordered(n, n);
  bordered(0, 0) = x.dot(y);
  for (Index j = 1; j < n; ++j) {
    bordered(0, j) = x.dot(anchors[j - 1]);
    bordered(j, 0) = anchors[j - 1].dot(y);
  }
  bordered.bottomRightCorner(n - 1, n - 1) = anchors.gram();
  return bordered.determinant();
}

// sqrt of an n-norm radicand; tiny negatives from round-off clamp to zero.
inline double norm_from_radicand(double radicand, double clamp = kNormClamp) {
  if (std::isnan(radicand) || radicand < -clamp)
    throw NumericalError("n_norm: negative radicand " + std::to_string(radicand));
  return radicand <= 0.0 ? 0.0 : std::sqrt(radicand);
}

inline double n_norm(const AmbientVector& x, const AnchorSet& anchors, double clamp = kNormClamp) {
  return norm_from_radicand(n_inner(x, x, anchors), clamp);
}

// X_F realized as W = span(anchors)^perp. basis() is k x d with orthonormal
// rows, each orthogonal to every anchor.
class InducedSpace {
 public:
  const AnchorSet& anchor_set() const { return anchors_; }
  double gamma() const { return anchors_.gamma(); }
  const Matrix& basis() const { return basis_; }
  Index rank() const { return basis_.rows(); }
  Index dimension() const { return basis_.cols(); }

  InducedVector project(const AmbientVector& x) const {
    detail::require_length(x, dimension(), "project");
    return basis_ * x;
  }

  // Canonical coset representative: the element of W with coordinates u.
  AmbientVector lift(const InducedVector& u) const {
    detail::require_length(u, rank(), "lift");
    return basis_.transpose() * u;
  }

  double inner(const InducedVector& u, const InducedVector& v) const {
    detail::require_length(u, rank(), "induced_inner");
    detail::require_length(v, rank(), "induced_inner");
    return gamma() * u.dot(v);
  }

  double norm(const InducedVector& u) const { return std::sqrt(inner(u, u)); }

  bool operator==(const InducedSpace& other) const {
    if (basis_.rows() != other.basis_.rows() || basis_.cols() != other.basis_.cols()) return false;
    if (anchors_.size() != other.anchors_.size()) return false;
    for (std::size_t i = 0; i < anchors_.size(); ++i)
      if (anchors_[i] != other.anchors_[i]) return false;
    return basis_ == other.basis_;
  }

 private:
  InducedSpace(AnchorSet anchors, Matrix basis) : anchors_(std::move(anchors)), basis_(std::move(basis)) {}

  friend InducedSpace build_induced_space(const AnchorSet& anchors, double tol);

  AnchorSet anchors_;
  Matrix basis_;
};

namespace detail {

// Two passes of classical Gram-Schmidt against an orthonormal list.
inline Vector orthogonal_residual(Vector v, const std::vector<Vector>& orthonormal) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : orthonormal) v -= q.dot(v) * q;
  return v;
}

}  // namespace detail

// Orthonormalizes the anchors, then repeatedly picks the standard basis
// vector with the largest residual against everything chosen so far
// (lowest index wins ties) until W is spanned.
inline InducedSpace build_induced_space(const AnchorSet& anchors, double tol = kRankTolerance) {
  if (!anchors.independent(tol))
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", anchors.gamma());
    throw DegenerateAnchorError(std::string("build_induced_space: anchors are linearly dependent (gamma = ") + buf +
                                ")");
  }
  const Index d = anchors.dimension();
  const Index k = d - static_cast<Index>(anchors.size());

  std::vector<Vector> chosen;
  chosen.reserve(static_cast<std::size_t>(d));
  for (const auto& a : anchors.anchors()) {
    Vector r = detail::orthogonal_residual(a, chosen);
    const double len = r.norm();
    if (!(len > 0.0)) throw DegenerateAnchorError("build_induced_space: anchor residual vanished");
    chosen.push_back(r / len);
  }

  Matrix basis(k, d);
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  for (Index row = 0; row < k; ++row) {
    Index best = -1;
    double best_len = -1.0;
    Vector best_residual;
    for (Index j = 0; j < d; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      Vector r = detail::orthogonal_residual(Vector::Unit(d, j), chosen);
      const double len = r.norm();
      if (len > best_len) {
        best = j;
        best_len = len;
        best_residual = std::move(r);
      }
    }
    if (best < 0 || !(best_len > 0.0))
      throw NumericalError("build_induced_space: complement basis collapsed");
    used[static_cast<std::size_t>(best)] = true;
    Vector q = best_residual / best_len;
    basis.row(row) = q.transpose();
    chosen.push_back(std::move(q));
  }
  return InducedSpace(anchors, std::move(basis));
}

inline InducedSpace build_induced_space(const AnchorSet& anchors, const AmbientSpace& space,
                                        double tol = kRankTolerance) {
  if (anchors.dimension() != space.dimension() || anchors.order() != space.order())
    throw InputError("build_induced_space: anchor set does not match the ambient space");
  return build_induced_space(anchors, tol);
}

inline InducedVector project(const AmbientVector& x, const InducedSpace& space) {
  return space.project(x);
}

inline double induced_inner(const InducedVector& u, const InducedVector& v, const InducedSpace& space) {
  return space.inner(u, v);
}

// Representative of Px / ||Px||_F, the maximizer of |<x, y | F>| over
// ||y, F|| = 1. Undefined for x in L_F.
inline AmbientVector sup_witness(const AmbientVector& x, const InducedSpace& space) {
  const InducedVector u = space.project(x);
  const double len = space.norm(u);
  if (!(len > 0.0)) throw DomainError("sup_witness: x lies in the span of the anchors");
  return space.lift(u / len);
}

}  // namespace nframe
