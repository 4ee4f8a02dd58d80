#pragma once

// Seeded generators for anchor sets, frames, vectors and operators, plus the
// sampling oracle for frame bounds.
//
// Every object is drawn from its own std::mt19937_64 stream whose seed is
// derive_seed(master, stream, index): splitmix64 applied to the mixed triple.
// Uniform reals on [-1, 1] use the top 53 bits of a draw, so results are
// bit-identical across platforms and independent of evaluation order.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "nframe/frames.hpp"
#include "nframe/nspace.hpp"
#include "nframe/optheory.hpp"

namespace nframe::testkit {

struct GenConfig {
  std::uint64_t seed = 0;
  Index d_min = 2;
  Index d_max = 8;
  Index n_min = 2;
  Index n_max = 4;
  Index m_max = 20;
  double cond_cap = 1e3;        // operator condition numbers
  double frame_cond_cap = 1e2;  // B / A of generated frames
  double min_gamma = 1e-6;
  double min_lower_bound = 1e-6;
  int max_retries = 1000;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

// Stream tags keep the generators for different object kinds independent.
enum class Stream : std::uint64_t {
  kAnchors = 1,
  kFrame = 2,
  kVector = 3,
  kOperator = 4,
  kOracle = 5,
  kTrial = 6,
  kPsd = 7,
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, Stream stream, std::uint64_t index)
      : engine_(derive_seed(master, static_cast<std::uint64_t>(stream), index)) {}

  // Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on [-1, 1).
  double symmetric() { return 2.0 * unit() - 1.0; }
  // Uniform integer in [lo, hi].
  Index between(Index lo, Index hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<Index>(engine_() % span);
  }

  Vector vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = symmetric();
    return v;
  }

  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = symmetric();
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

inline AnchorSet gen_anchor_set(const GenConfig& cfg, Index d, Index n, std::uint64_t index = 0) {
  if (n < 2 || n - 1 >= d) throw PreconditionError("gen_anchor_set: requires 2 <= n and n - 1 < d");
  Rng rng(cfg.seed, Stream::kAnchors, index);
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    std::vector<AmbientVector> anchors;
    for (Index i = 0; i < n - 1; ++i) anchors.push_back(rng.vector(d));
    AnchorSet set(std::move(anchors));
    if (set.gamma() > cfg.min_gamma && set.independent()) return set;
  }
  throw GenerationError("gen_anchor_set: retry budget exhausted");
}

// Random ambient vectors (with components along the anchors) until the
// family is a frame with A > min_lower_bound and B / A <= frame_cond_cap.
inline FrameSystem gen_frame(const GenConfig& cfg, const std::shared_ptr<const InducedSpace>& space, Index m,
                             std::uint64_t index = 0) {
  if (m < space->rank()) throw PreconditionError("gen_frame: requires m >= k");
  Rng rng(cfg.seed, Stream::kFrame, index);
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    std::vector<AmbientVector> vectors;
    for (Index i = 0; i < m; ++i) vectors.push_back(rng.vector(space->dimension()));
    FrameSystem fs(space, std::move(vectors));
    const FrameBounds b = optimal_bounds(fs);
    if (b.lower > cfg.min_lower_bound && b.upper <= cfg.frame_cond_cap * b.lower) return fs;
  }
  throw GenerationError("gen_frame: retry budget exhausted");
}

inline FrameSystem gen_frame(const GenConfig& cfg, const InducedSpace& space, Index m, std::uint64_t index = 0) {
  return gen_frame(cfg, std::make_shared<const InducedSpace>(space), m, index);
}

inline AmbientVector gen_vector(const GenConfig& cfg, Index d, std::uint64_t index = 0) {
  Rng rng(cfg.seed, Stream::kVector, index);
  return rng.vector(d);
}

namespace detail {

inline Matrix random_orthogonal(Rng& rng, Index k) {
  Eigen::HouseholderQR<Matrix> qr(rng.matrix(k, k));
  Matrix q = qr.householderQ() * Matrix::Identity(k, k);
  // Fix column signs so q depends only on the drawn matrix's R diagonal signs.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < k; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace detail

// O1 diag(s) O2 with s log-uniform in [1, cond_cap] and at least one
// singular value at each end, so sigma_min = 1 and cond = cond_cap^t for a
// random t in [0, 1].
inline LinearMap gen_invertible_operator(const GenConfig& cfg, Index k, std::uint64_t index = 0) {
  Rng rng(cfg.seed, Stream::kOperator, index);
  const Matrix left = detail::random_orthogonal(rng, k);
  const Matrix right = detail::random_orthogonal(rng, k);
  const double log_cond = rng.unit() * std::log(cfg.cond_cap);
  Vector s(k);
  for (Index i = 0; i < k; ++i) s(i) = std::exp(rng.unit() * log_cond);
  s(0) = 1.0;
  if (k > 1) s(k - 1) = std::exp(log_cond);
  return left * s.asDiagonal() * right.transpose();
}

// As gen_invertible_operator with one singular value set to zero.
inline LinearMap gen_singular_operator(const GenConfig& cfg, Index k, std::uint64_t index = 0) {
  Rng rng(cfg.seed, Stream::kOperator, index);
  const Matrix left = detail::random_orthogonal(rng, k);
  const Matrix right = detail::random_orthogonal(rng, k);
  Vector s(k);
  for (Index i = 0; i < k; ++i) s(i) = std::exp(rng.unit() * std::log(cfg.cond_cap));
  s(rng.between(0, k - 1)) = 0.0;
  return left * s.asDiagonal() * right.transpose();
}

// Arbitrary operator with uniform [-1, 1] entries (possibly singular).
inline LinearMap gen_operator(const GenConfig& cfg, Index k, std::uint64_t index = 0) {
  Rng rng(cfg.seed, Stream::kOperator, index);
  return rng.matrix(k, k);
}

// B B^T for a random k x r matrix B, r <= k (rank-deficient when r < k).
inline LinearMap gen_psd(const GenConfig& cfg, Index k, Index r, std::uint64_t index = 0) {
  Rng rng(cfg.seed, Stream::kPsd, index);
  const Matrix b = rng.matrix(k, r);
  return symmetrized(b * b.transpose());
}

struct OracleBounds {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

// Extremes over random f of sum_i |<f, f_i | F>|^2 / ||f, F||^2, evaluated
// with n-inner products only (no projection, no spectra).
//
// Samples nearly inside span(F) are rejected: there ||f, F||^2 = gamma |Pf|^2
// is a determinant cancelling down from gamma |f|^2, and the ratio carries a
// relative error of about eps |f|^2 / |Pf|^2. Rejection keeps |Pf| / |f| above
// 0.1 and does not restrict the direction of Pf, so the extremes still
// approach the optimal bounds.
inline OracleBounds oracle_bounds(const FrameSystem& fs, int samples, std::uint64_t seed) {
  constexpr double kMinSineSquared = 1e-2;
  if (samples < 1) throw PreconditionError("oracle_bounds: samples must be at least 1");
  const AnchorSet& anchors = fs.space().anchor_set();
  Rng rng(seed, Stream::kOracle, 0);
  OracleBounds out;
  int taken = 0;
  for (int guard = 0; taken < samples && guard < 100 * samples; ++guard) {
    const AmbientVector f = rng.vector(anchors.dimension());
    const double norm_sq = n_inner(f, f, anchors);
    if (!(norm_sq > kMinSineSquared * anchors.gamma() * f.squaredNorm())) continue;
    double total = 0.0;
    for (const auto& fi : fs.vectors()) {
      const double c = n_inner(f, fi, anchors);
      total += c * c;
    }
    const double ratio = total / norm_sq;
    out.min = std::min(out.min, ratio);
    out.max = std::max(out.max, ratio);
    ++taken;
  }
  return out;
}

}  // namespace nframe::testkit
