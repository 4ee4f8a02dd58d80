#pragma once

// Randomized certification of the structural identities of n-inner product
// spaces and of frames relative to an anchor tuple.
//
// Each trial draws an instance (anchors, two frames, operators, vectors)
// from seed-derived streams, round-trips it through the instance format, and
// evaluates every suite on it. A suite reports a residual and a tolerance; a
// trial passes the suite when residual <= tolerance. Trials are independent,
// so they may run on several threads; the reduction is in trial order and
// the report does not depend on the thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nframe/frames.hpp"
#include "nframe/instance.hpp"
#include "nframe/nspace.hpp"
#include "nframe/optheory.hpp"
#include "nframe/testkit.hpp"

namespace nframe::certify {

using InnerFn = std::function<double(const AmbientVector&, const AmbientVector&, const AnchorSet&)>;

struct Options {
  std::uint64_t seed = 42;
  int trials = 200;
  Index max_dim = 6;
  Index max_order = 4;
  Index max_frame_size = 20;
  int sup_samples = 1000;
  int oracle_samples = 500;
  unsigned threads = 1;
  // The n-inner product under test; overridable to check that the harness detects faults.
  InnerFn inner = [](const AmbientVector& x, const AmbientVector& y, const AnchorSet& f) {
    return n_inner(x, y, f);
  };
};

struct Trial {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;  // per-trial seed for auxiliary draws
  ResolvedInstance instance;

  const InducedSpace& space() const { return *instance.space; }
  const AnchorSet& anchors() const { return instance.space->anchor_set(); }
  const FrameSystem& frame() const { return instance.frame; }
  const FrameSystem& second() const { return *instance.second_frame; }
  const AmbientVector& vec(const std::string& name) const { return instance.require_vector(name); }
  const Matrix& op(const std::string& name) const { return instance.require_operator(name); }
  Index rank() const { return instance.space->rank(); }
};

// Builds trial `index`: d in [2, max_dim], n in [2, min(max_order, d)],
// m in [k, min(max_frame_size, 3k)], all from streams derived from the seed.
inline Trial make_trial(const Options& opts, std::uint64_t index) {
  testkit::Rng shape(opts.seed, testkit::Stream::kTrial, index);
  const Index d = shape.between(2, std::max<Index>(2, opts.max_dim));
  const Index n = shape.between(2, std::min(opts.max_order, d));
  const Index k = d - n + 1;
  const Index m = shape.between(k, std::max(k, std::min(opts.max_frame_size, 3 * k)));
  const Index m2 = m;

  testkit::GenConfig cfg;
  cfg.seed = testkit::derive_seed(opts.seed, static_cast<std::uint64_t>(testkit::Stream::kTrial), index);
  const AnchorSet anchors = testkit::gen_anchor_set(cfg, d, n);
  auto space = std::make_shared<const InducedSpace>(build_induced_space(anchors));
  const FrameSystem first = testkit::gen_frame(cfg, space, m, 0);
  const FrameSystem second = testkit::gen_frame(cfg, space, m2, 1);

  InstanceFile file;
  file.dimension = d;
  file.anchors = anchors.anchors();
  file.frame = first.vectors();
  file.second_frame = second.vectors();
  file.operators["U"] = testkit::gen_invertible_operator(cfg, k, 0);
  file.operators["V"] = testkit::gen_singular_operator(cfg, k, 1);
  file.operators["W"] = testkit::gen_operator(cfg, k, 2);
  file.operators["L1"] = testkit::gen_operator(cfg, k, 3);
  file.operators["L2"] = testkit::gen_operator(cfg, k, 4);
  file.operators["P"] = testkit::gen_psd(cfg, k, shape.between(1, k), 5);
  for (const char* name : {"x", "y", "f"})
    file.vectors[name] = testkit::gen_vector(cfg, d, static_cast<std::uint64_t>(name[0]));
  testkit::Rng coeff(cfg.seed, testkit::Stream::kVector, 1000);
  AmbientVector in_span = AmbientVector::Zero(d);
  for (const auto& a : anchors.anchors()) in_span += coeff.symmetric() * a;
  file.vectors["l"] = in_span;

  // Trials go through the file format so every suite sees what a dump would reproduce.
  return {index, cfg.seed, resolve_instance(parse_instance(serialize_instance(file)))};
}

struct Check {
  double residual = 0.0;
  bool skipped = false;  // precondition of the property not met by this trial
};

struct Suite {
  std::string name;
  std::string statement;
  double tolerance;
  std::function<Check(const Trial&, const Options&)> run;
};

namespace detail {

inline double rel(double err, double scale) { return std::abs(err) / (1.0 + std::abs(scale)); }

inline double norm_with(const Options& o, const AmbientVector& x, const AnchorSet& f) {
  return norm_from_radicand(o.inner(x, x, f));
}

inline double frame_sum(const AmbientVector& f, const FrameSystem& fs) {
  double total = 0.0;
  for (const auto& fi : fs.vectors()) {
    const double c = n_inner(f, fi, fs.space().anchor_set());
    total += c * c;
  }
  return total;
}

// An alternate dual: phi S^{-1} + (I - gamma phi S^{-1} phi^T) R for arbitrary R.
// Frame decisions compare A' = sigma_min^2 of the analysis operator against
// tol * max(1, sigma_max^2); invertibility compares sigma_min against
// tol * max(1, sigma_max). The two verdicts are only compared when the
// analysis operator is clearly bounded below or clearly rank deficient.
enum class Verdict { kFrame, kNotFrame, kUnclear };

inline Verdict clear_verdict(const RectMap& analysis) {
  const Vector s = singular_values(analysis);
  if (analysis.rows() < analysis.cols() || !(s(0) > 0.0)) return Verdict::kNotFrame;
  const double lo = s(s.size() - 1), hi = s(0);
  if (lo * lo > 1e3 * kFrameTolerance * std::max(1.0, hi * hi) && lo > 1e3 * kInvertibilityTolerance * hi)
    return Verdict::kFrame;
  if (lo < 1e-13 * hi) return Verdict::kNotFrame;
  return Verdict::kUnclear;
}

inline FrameSystem alternate_dual(const FrameSystem& fs, const Matrix& r) {
  const Matrix s_inv = frame_operator(fs).inverse();
  const Matrix& phi = fs.coordinates();
  const Matrix proj = Matrix::Identity(fs.size(), fs.size()) - fs.gamma() * phi * s_inv * phi.transpose();
  return FrameSystem::from_coordinates(fs.shared_space(), phi * s_inv + proj * r);
}

}  // namespace detail

inline std::vector<Suite> suites() {
  using detail::rel;
  std::vector<Suite> out;

  out.push_back({"gram_projection_agreement", "<x,y|F> = gamma * (Qx . Qy)", 1e-9,
                 [](const Trial& t, const Options& o) {
                   const double det = o.inner(t.vec("x"), t.vec("y"), t.anchors());
                   const double proj = t.space().inner(t.space().project(t.vec("x")), t.space().project(t.vec("y")));
                   return Check{rel(det - proj, det)};
                 }});

  out.push_back({"cauchy_schwarz", "|<x,y|F>| <= ||x,F|| ||y,F||", 1e-9, [](const Trial& t, const Options& o) {
                   const double lhs = std::abs(o.inner(t.vec("x"), t.vec("y"), t.anchors()));
                   const double rhs = detail::norm_with(o, t.vec("x"), t.anchors()) *
                                      detail::norm_with(o, t.vec("y"), t.anchors());
                   return Check{std::max(0.0, lhs - rhs) / (1.0 + rhs)};
                 }});

  out.push_back({"polarization", "<x,y|F> = (||x+y,F||^2 - ||x-y,F||^2) / 4", 1e-9,
                 [](const Trial& t, const Options& o) {
                   const auto& x = t.vec("x");
                   const auto& y = t.vec("y");
                   const double plus = detail::norm_with(o, x + y, t.anchors());
                   const double minus = detail::norm_with(o, x - y, t.anchors());
                   const double scale = std::pow(detail::norm_with(o, x, t.anchors()), 2) +
                                        std::pow(detail::norm_with(o, y, t.anchors()), 2);
                   return Check{rel(o.inner(x, y, t.anchors()) - 0.25 * (plus * plus - minus * minus), scale)};
                 }});

  out.push_back({"parallelogram", "||x+y,F||^2 + ||x-y,F||^2 = 2(||x,F||^2 + ||y,F||^2)", 1e-9,
                 [](const Trial& t, const Options& o) {
                   const auto& x = t.vec("x");
                   const auto& y = t.vec("y");
                   const double lhs = std::pow(detail::norm_with(o, x + y, t.anchors()), 2) +
                                      std::pow(detail::norm_with(o, x - y, t.anchors()), 2);
                   const double rhs = 2.0 * (std::pow(detail::norm_with(o, x, t.anchors()), 2) +
                                             std::pow(detail::norm_with(o, y, t.anchors()), 2));
                   return Check{rel(lhs - rhs, rhs)};
                 }});

  out.push_back({"sup_formula", "||x,F|| = sup over ||y,F|| = 1 of |<x,y|F>|, attained at Px/||Px||_F", 1e-9,
                 [](const Trial& t, const Options& o) {
                   const auto& x = t.vec("x");
                   const double nx = detail::norm_with(o, x, t.anchors());
                   if (!(nx > 0.0)) return Check{0.0, true};
                   const AmbientVector witness = sup_witness(x, t.space());
                   double worst = rel(std::abs(o.inner(x, witness, t.anchors())) - nx, nx);
                   testkit::Rng rng(t.seed, testkit::Stream::kOracle, 1);
                   for (int s = 0; s < o.sup_samples; ++s) {
                     const AmbientVector y = rng.vector(x.size());
                     const double ny = detail::norm_with(o, y, t.anchors());
                     // y nearly inside span(F): ||y, F|| is all cancellation, skip
                     if (!(ny * ny > 1e-2 * t.anchors().gamma() * y.squaredNorm())) continue;
                     const double excess = std::abs(o.inner(x, y, t.anchors())) - nx * ny;
                     worst = std::max(worst, std::max(0.0, excess) / (ny * (1.0 + nx)));
                   }
                   return Check{worst};
                 }});

  out.push_back({"anchor_permutation", "<x,y|F> is invariant under permutations of F", 1e-12,
                 [](const Trial& t, const Options& o) {
                   const double base = o.inner(t.vec("x"), t.vec("y"), t.anchors());
                   std::vector<std::size_t> order(t.anchors().size());
                   std::iota(order.begin(), order.end(), 0);
                   double worst = 0.0;
                   while (std::next_permutation(order.begin(), order.end())) {
                     std::vector<AmbientVector> permuted;
                     for (auto i : order) permuted.push_back(t.anchors()[i]);
                     const double v = o.inner(t.vec("x"), t.vec("y"), AnchorSet(std::move(permuted)));
                     worst = std::max(worst, std::abs(v - base) / std::max(1.0, std::abs(base)));
                   }
                   return Check{worst};
                 }});

  out.push_back({"homogeneity", "||alpha x, F|| = |alpha| ||x, F||", 1e-12, [](const Trial& t, const Options& o) {
                   testkit::Rng rng(t.seed, testkit::Stream::kOracle, 2);
                   const double alpha = 3.0 * rng.symmetric();
                   const double nx = detail::norm_with(o, t.vec("x"), t.anchors());
                   const double scaled = detail::norm_with(o, alpha * t.vec("x"), t.anchors());
                   return Check{std::abs(scaled - std::abs(alpha) * nx) / std::max(1.0, std::abs(alpha) * nx)};
                 }});

  out.push_back({"frame_inequality", "A ||f||_F^2 <= sum |<f,f_i|F>|^2 <= B ||f||_F^2", 1e-9,
                 [](const Trial& t, const Options&) {
                   const FrameBounds b = optimal_bounds(t.frame());
                   const auto& f = t.vec("f");
                   const double norm_sq = n_inner(f, f, t.anchors());
                   const double sum = detail::frame_sum(f, t.frame());
                   const double low = std::max(0.0, b.lower * norm_sq - sum);
                   const double high = std::max(0.0, sum - b.upper * norm_sq);
                   return Check{std::max(low, high) / (1.0 + sum)};
                 }});

  out.push_back({"quadratic_form_identity", "<S_F f, f>_F = sum |<f,f_i|F>|^2", 1e-9,
                 [](const Trial& t, const Options&) {
                   const double sum = detail::frame_sum(t.vec("f"), t.frame());
                   return Check{rel(frame_quadratic_form(t.vec("f"), t.frame()) - sum, sum)};
                 }});

  out.push_back({"operator_order_sandwich", "A I_F <= S_F <= B I_F", 1e-9, [](const Trial& t, const Options&) {
                   const FrameOperator s = frame_operator(t.frame());
                   const FrameBounds b = optimal_bounds(s);
                   const Matrix id = Matrix::Identity(t.rank(), t.rank());
                   const double low = symmetric_spectrum(s.matrix - b.lower * id).min();
                   const double high = symmetric_spectrum(b.upper * id - s.matrix).min();
                   return Check{std::max(0.0, -std::min(low, high)) / std::max(1.0, b.upper)};
                 }});

  out.push_back({"inverse_sandwich", "B^-1 I_F <= S_F^-1 <= A^-1 I_F", 1e-9, [](const Trial& t, const Options&) {
                   const FrameOperator s = frame_operator(t.frame());
                   const FrameBounds b = optimal_bounds(s);
                   const Spectrum inv = symmetric_spectrum(s.inverse());
                   const double below = std::max(0.0, 1.0 / b.upper - inv.min());
                   const double above = std::max(0.0, inv.max() - 1.0 / b.lower);
                   return Check{std::max(below, above) / std::max(1.0, 1.0 / b.lower)};
                 }});

  out.push_back({"dual_reciprocity", "canonical dual has optimal bounds (1/B, 1/A)", 1e-8,
                 [](const Trial& t, const Options&) {
                   const FrameBounds b = optimal_bounds(t.frame());
                   const FrameBounds dual = optimal_bounds(canonical_dual(t.frame()));
                   const double lo = std::abs(dual.lower * b.upper - 1.0);
                   const double hi = std::abs(dual.upper * b.lower - 1.0);
                   const double op = max_abs(frame_operator(canonical_dual(t.frame())).matrix -
                                             frame_operator(t.frame()).inverse()) *
                                     b.lower;
                   return Check{std::max({lo, hi, op})};
                 }});

  out.push_back({"reconstruction", "f = sum <f,S^-1 f_i|F> f_i = sum <f,f_i|F> S^-1 f_i in X_F", 1e-8,
                 [](const Trial& t, const Options&) {
                   const auto& f = t.vec("f");
                   const InducedVector target = t.space().project(f);
                   const double e1 = (reconstruct(f, t.frame()) - target).norm();
                   const double e2 = (reconstruct_from_dual(f, t.frame()) - target).norm();
                   return Check{std::max(e1, e2) / (1.0 + target.norm())};
                 }});

  out.push_back({"tight_scaling", "a tight frame with bound A scaled by 1/sqrt(A) has bounds (1, 1)", 1e-10,
                 [](const Trial& t, const Options&) {
                   testkit::Rng rng(t.seed, testkit::Stream::kOracle, 3);
                   const double c = 0.5 + 1.5 * rng.unit();
                   const FrameSystem tight = scaled(canonical_tight(t.frame()), c);
                   const TightCheck check = is_tight(tight);
                   if (!check.tight) return Check{std::numeric_limits<double>::infinity()};
                   const FrameBounds b = optimal_bounds(scaled(tight, 1.0 / std::sqrt(check.bound)));
                   return Check{std::max(std::abs(b.lower - 1.0), std::abs(b.upper - 1.0))};
                 }});

  out.push_back({"canonical_tight", "{S^-1/2 f_i} is a normalized tight frame reconstructing f = (1/A) sum <f,g_i|F> g_i",
                 1e-8, [](const Trial& t, const Options&) {
                   const FrameSystem tight = canonical_tight(t.frame());
                   const Matrix id = Matrix::Identity(t.rank(), t.rank());
                   const double dev = spectral_norm(frame_operator(tight).matrix - id);
                   const InducedVector target = t.space().project(t.vec("f"));
                   const double rec = (tight_reconstruct(t.vec("f"), tight, optimal_bounds(tight).lower) - target).norm() /
                                      (1.0 + target.norm());
                   return Check{std::max(dev, rec)};
                 }});

  out.push_back({"vanishing_on_span", "for f in L_F every coefficient and ||f||_F vanish", 1e-12,
                 [](const Trial& t, const Options&) {
                   const auto& l = t.vec("l");
                   double worst = t.space().norm(t.space().project(l));
                   for (const auto& fi : t.frame().vectors())
                     worst = std::max(worst, std::abs(n_inner(l, fi, t.anchors())));
                   return Check{worst};
                 }});

  out.push_back({"sqrt_uniqueness", "V = M^1/2 is PSD, V^2 = M, V commutes with M and M^2", 1e-9,
                 [](const Trial& t, const Options&) {
                   const Matrix& m = t.op("P");
                   const Matrix v = sqrt_psd(m);
                   const double scale = std::max(1.0, max_abs(m));
                   const double square = max_abs(v * v - m) / scale;
                   const double comm1 = max_abs(v * m - m * v) / (scale * scale);
                   const Matrix m2 = m * m;
                   const double comm2 = max_abs(v * m2 - m2 * v) / (scale * scale * scale);
                   const double neg = std::max(0.0, -symmetric_spectrum(v).min()) / scale;
                   return Check{std::max({square, comm1, comm2, neg, symmetry_defect(v)})};
                 }});

  out.push_back({"pseudo_inverse", "T T^dagger = I_F for surjective synthesis T; Penrose identities", 1e-9,
                 [](const Trial& t, const Options&) {
                   const Matrix tm = synthesis_operator(t.frame());
                   const Matrix tp = pseudo_inverse(tm);
                   const double right = max_abs(tm * tp - Matrix::Identity(t.rank(), t.rank()));
                   const double penrose = max_abs(tp * tm * tp - tp) / std::max(1.0, max_abs(tp));
                   const Matrix sym = tp * tm;
                   return Check{std::max({right, penrose, symmetry_defect(sym)})};
                 }});

  out.push_back({"image_equivalence", "{U f_i} is a frame iff U is invertible; bounds scale by ||U^-1||^-2, ||U||^2",
                 1e-9, [](const Trial& t, const Options&) {
                   const Matrix& u = t.op("U");
                   const FrameSystem image = image_frame(u, t.frame());
                   if (!is_frame(image) || !is_invertible(u)) return Check{std::numeric_limits<double>::infinity()};
                   if (is_frame(image_frame(t.op("V"), t.frame())) || is_invertible(t.op("V")))
                     return Check{std::numeric_limits<double>::infinity()};
                   const FrameBounds b = optimal_bounds(t.frame());
                   const FrameBounds bi = optimal_bounds(image);
                   const double inv_norm = spectral_norm(u.inverse());
                   const double unorm = spectral_norm(u);
                   const double low = std::max(0.0, b.lower / (inv_norm * inv_norm) - bi.lower) / bi.lower;
                   const double high = std::max(0.0, bi.upper - b.upper * unorm * unorm) / bi.upper;
                   return Check{std::max(low, high)};
                 }});

  out.push_back({"image_conjugation", "frame operator of {U f_i} is U S_F U^*", 1e-10,
                 [](const Trial& t, const Options&) {
                   double worst = 0.0;
                   for (const char* name : {"U", "V", "W"}) {
                     const Matrix& u = t.op(name);
                     const Matrix expected = image_frame_operator(u, t.frame()).matrix;
                     const Matrix actual = frame_operator(image_frame(u, t.frame())).matrix;
                     worst = std::max(worst, max_abs(actual - expected) / std::max(1.0, max_abs(expected)));
                   }
                   return Check{worst};
                 }});

  out.push_back({"identity_perturbation", "{f_i + U f_i} is a frame iff I + U is invertible; operator (I+U)S(I+U)^*",
                 1e-10, [](const Trial& t, const Options&) {
                   double worst = 0.0;
                   const Index k = t.rank();
                   const Matrix minus_id = -Matrix::Identity(k, k);
                   for (const Matrix* u : {&t.op("W"), &t.op("U"), &minus_id}) {
                     const FrameSystem p = perturb_identity(*u, t.frame());
                     const Matrix expected = perturbed_frame_operator(*u, t.frame()).matrix;
                     worst = std::max(worst, max_abs(frame_operator(p).matrix - expected) /
                                                 std::max(1.0, max_abs(expected)));
                     const Matrix shifted = Matrix::Identity(k, k) + *u;
                     const detail::Verdict v = detail::clear_verdict(analysis_operator(p));
                     if (v == detail::Verdict::kUnclear || detail::clear_verdict(shifted) == detail::Verdict::kUnclear)
                       continue;
                     const bool expected_frame = v == detail::Verdict::kFrame;
                     if (is_frame(p) != expected_frame || is_invertible(shifted) != expected_frame)
                       return Check{std::numeric_limits<double>::infinity()};
                   }
                   return Check{worst};
                 }});

  out.push_back({"combination_criterion",
                 "{L1 f_i + L2 g_i} is a frame iff T_F^* L1^* + T_F'^* L2^* is bounded below", 0.0,
                 [](const Trial& t, const Options&) {
                   const Index k = t.rank();
                   const Matrix id = Matrix::Identity(k, k);
                   const Matrix zero = Matrix::Zero(k, k);
                   struct Case {
                     const Matrix* l1;
                     const FrameSystem* f;
                     const Matrix* l2;
                     const FrameSystem* g;
                     int expect;  // 1 frame, 0 not a frame, -1 either
                   };
                   const Matrix minus_id = -id;
                   const Case cases[] = {
                       {&t.op("L1"), &t.frame(), &t.op("L2"), &t.second(), -1},
                       {&id, &t.frame(), &zero, &t.second(), 1},
                       {&id, &t.frame(), &minus_id, &t.frame(), 0},
                       {&t.op("V"), &t.frame(), &zero, &t.second(), 0},
                   };
                   double mismatches = 0.0;
                   for (const Case& c : cases) {
                     const bool criterion = combination_is_frame(*c.l1, *c.f, *c.l2, *c.g);
                     const FrameSystem combined = combine(*c.l1, *c.f, *c.l2, *c.g);
                     const bool frame = is_frame(combined);
                     const detail::Verdict v =
                         detail::clear_verdict(combined_analysis_operator(*c.l1, *c.f, *c.l2, *c.g));
                     if (v != detail::Verdict::kUnclear && criterion != frame) mismatches += 1.0;
                     if (c.expect >= 0 && frame != (c.expect == 1)) mismatches += 1.0;
                   }
                   return Check{mismatches};
                 }});

  out.push_back({"lower_bound_identity", "A * ||T^dagger||^2 = 1 and the surjectivity test returns A", 1e-7,
                 [](const Trial& t, const Options&) {
                   const FrameBounds b = optimal_bounds(t.frame());
                   const double pinv = spectral_norm(pseudo_inverse(synthesis_operator(t.frame())));
                   const SurjectivityResult s = surjectivity_frame_test(t.frame());
                   if (!s.surjective) return Check{std::numeric_limits<double>::infinity()};
                   return Check{std::max(std::abs(b.lower * pinv * pinv - 1.0), std::abs(s.lower_bound / b.lower - 1.0))};
                 }});

  out.push_back({"dual_pair_bounds", "T_F T_G^* = I_F implies lower bounds 1/D and 1/C", 1e-8,
                 [](const Trial& t, const Options&) {
                   testkit::Rng rng(t.seed, testkit::Stream::kOracle, 4);
                   const FrameSystem canonical = canonical_dual(t.frame());
                   const FrameSystem alternate =
                       detail::alternate_dual(t.frame(), rng.matrix(t.frame().size(), t.rank()));
                   double worst = 0.0;
                   for (const FrameSystem* g : {&canonical, &alternate}) {
                     if (!dual_pair_check(t.frame(), *g)) return Check{std::numeric_limits<double>::infinity()};
                     const FrameBounds bf = optimal_bounds(t.frame());
                     const FrameBounds bg = optimal_bounds(*g);
                     worst = std::max(worst, std::max(0.0, 1.0 / bg.upper - bf.lower));
                     worst = std::max(worst, std::max(0.0, 1.0 / bf.upper - bg.lower));
                   }
                   return Check{worst};
                 }});

  out.push_back({"oracle_sandwich", "sampled frame ratios lie in [A, B]", 1e-9, [](const Trial& t, const Options& o) {
                   const FrameBounds b = optimal_bounds(t.frame());
                   const testkit::OracleBounds ob = testkit::oracle_bounds(t.frame(), o.oracle_samples, t.seed);
                   return Check{std::max({0.0, b.lower - ob.min, ob.max - b.upper})};
                 }});

  out.push_back({"instance_round_trip", "serialize/parse reproduces every computation", 1e-15,
                 [](const Trial& t, const Options&) {
                   const ResolvedInstance again =
                       resolve_instance(parse_instance(serialize_instance(t.instance.file)));
                   const FrameBounds a = optimal_bounds(t.frame());
                   const FrameBounds b = optimal_bounds(again.frame);
                   double worst = std::max(rel(a.lower - b.lower, a.lower), rel(a.upper - b.upper, a.upper));
                   worst = std::max(worst, max_abs(again.frame.coordinates() - t.frame().coordinates()));
                   worst = std::max(worst, max_abs(canonical_dual(again.frame).coordinates() -
                                                   canonical_dual(t.frame()).coordinates()));
                   return Check{worst};
                 }});

  return out;
}

struct SuiteReport {
  std::string name;
  std::string statement;
  double tolerance = 0.0;
  int trials = 0;
  int passed = 0;
  int skipped = 0;
  double worst_residual = 0.0;
  std::optional<std::uint64_t> failing_trial;
  std::string failure_message;
  std::optional<std::string> counterexample;  // serialized instance of the first failure

  bool ok() const { return passed + skipped == trials; }
};

struct Report {
  Options options;
  std::vector<SuiteReport> suites;
  bool all_pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteReport& s) { return s.ok(); });
  }
};

namespace detail {

struct Outcome {
  double residual = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string message;
};

inline std::vector<Outcome> run_trial(const std::vector<Suite>& all, const Options& opts, std::uint64_t index,
                                      std::optional<std::string>& dump) {
  std::vector<Outcome> out(all.size());
  std::optional<Trial> trial;
  try {
    trial.emplace(make_trial(opts, index));
  } catch (const std::exception& e) {
    for (auto& o : out) o = {std::numeric_limits<double>::infinity(), false, false,
                             std::string("trial generation failed: ") + e.what()};
    return out;
  }
  for (std::size_t s = 0; s < all.size(); ++s) {
    try {
      const Check c = all[s].run(*trial, opts);
      out[s] = {c.residual, c.skipped || c.residual <= all[s].tolerance, c.skipped, {}};
    } catch (const std::exception& e) {
      out[s] = {std::numeric_limits<double>::infinity(), false, false, e.what()};
    }
    if (!out[s].pass && !dump) dump = serialize_instance(trial->instance.file);
  }
  return out;
}

}  // namespace detail

inline Report run(const Options& opts) {
  if (opts.trials < 1) throw PreconditionError("certify: trials must be at least 1");
  if (opts.max_dim < 2) throw PreconditionError("certify: max dimension must be at least 2");
  const std::vector<Suite> all = suites();
  const auto trials = static_cast<std::size_t>(opts.trials);
  std::vector<std::vector<detail::Outcome>> results(trials);
  std::vector<std::optional<std::string>> dumps(trials);

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(trials)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < trials; i += workers)
          results[i] = detail::run_trial(all, opts, static_cast<std::uint64_t>(i), dumps[i]);
      });
  }

  Report report{opts, {}};
  for (std::size_t s = 0; s < all.size(); ++s) {
    SuiteReport sr{all[s].name, all[s].statement, all[s].tolerance};
    for (std::size_t i = 0; i < trials; ++i) {
      const detail::Outcome& o = results[i][s];
      ++sr.trials;
      if (o.skipped) {
        ++sr.skipped;
        continue;
      }
      sr.worst_residual = std::max(sr.worst_residual, o.residual);
      if (o.pass) {
        ++sr.passed;
      } else if (!sr.failing_trial) {
        sr.failing_trial = i;
        sr.failure_message = o.message;
        sr.counterexample = dumps[i];
      }
    }
    report.suites.push_back(std::move(sr));
  }
  return report;
}

}  // namespace nframe::certify
