#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nframe/optheory.hpp"
#include "nframe/testkit.hpp"
#include "oracles.hpp"

using namespace nframe;
using fixtures::vec;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

FrameSystem random_frame(std::uint64_t t) {
  testkit::GenConfig cfg;
  cfg.seed = 99;
  testkit::Rng shape(cfg.seed, testkit::Stream::kTrial, t);
  const Index d = shape.between(2, 7);
  const Index n = shape.between(2, std::min<Index>(4, d));
  const Index k = d - n + 1;
  const Index m = shape.between(k, std::min<Index>(20, 3 * k));
  return testkit::gen_frame(cfg, build_induced_space(testkit::gen_anchor_set(cfg, d, n, t)), m, t);
}

}  // namespace

TEST(SqrtPsd, Examples) {
  EXPECT_LE(max_abs(sqrt_psd(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)), 1e-15);
  EXPECT_LE(max_abs(sqrt_psd(mat2(4, 0, 0, 9)) - mat2(2, 0, 0, 3)), 1e-15);
  const Matrix v = sqrt_psd(mat2(2, 1, 1, 2));
  EXPECT_LE(max_abs(v * v - mat2(2, 1, 1, 2)), 1e-10);
  // Closed form from eigenpairs (1, (1,-1)/sqrt2), (3, (1,1)/sqrt2).
  const double r3 = std::sqrt(3.0);
  EXPECT_LE(max_abs(v - mat2((1 + r3) / 2, (r3 - 1) / 2, (r3 - 1) / 2, (1 + r3) / 2)), 1e-14);
}

TEST(SqrtPsd, Errors) {
  EXPECT_THROW(sqrt_psd(mat2(1, 2, 0, 1)), DomainError);
  EXPECT_THROW(sqrt_psd(mat2(1, 0, 0, -1)), DomainError);
  EXPECT_THROW(sqrt_psd(Matrix::Identity(2, 3)), InputError);
  // Round-off negatives are admitted.
  EXPECT_NO_THROW(sqrt_psd(mat2(1, 0, 0, -1e-12)));
}

TEST(SqrtPsd, RandomUniquenessProperties) {
  testkit::GenConfig cfg;
  cfg.seed = 5;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const Index k = 1 + static_cast<Index>(t % 6);
    const Matrix m = testkit::gen_psd(cfg, k, 1 + static_cast<Index>(t % static_cast<std::uint64_t>(k)), t);
    const Matrix v = sqrt_psd(m);
    const double scale = std::max(1.0, max_abs(m));
    EXPECT_LE(max_abs(v * v - m), 1e-9 * scale);
    EXPECT_LE(max_abs(v * m - m * v), 1e-9 * scale * scale);
    const Matrix poly = m * m - 2.0 * m + Matrix::Identity(k, k);
    EXPECT_LE(max_abs(v * poly - poly * v), 1e-9 * scale * scale * scale);
    EXPECT_GE(symmetric_spectrum(v).min(), -1e-12);
    // Denman-Beavers iteration on M + I as an independent route to (M + I)^{1/2}.
    Matrix y = m + Matrix::Identity(k, k), z = Matrix::Identity(k, k);
    for (int it = 0; it < 40; ++it) {
      const Matrix yn = 0.5 * (y + z.inverse());
      z = 0.5 * (z + y.inverse());
      y = yn;
    }
    EXPECT_LE(max_abs(sqrt_psd(m + Matrix::Identity(k, k)) - y), 1e-9 * scale);
  }
}

TEST(PseudoInverse, Examples) {
  EXPECT_LE(max_abs(pseudo_inverse(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)), 1e-15);
  Matrix two(1, 1);
  two << 2;
  EXPECT_DOUBLE_EQ(pseudo_inverse(two)(0, 0), 0.5);
  // sigma_min of the synthesis map of the basic fixture is 1.
  const Matrix tp = pseudo_inverse(synthesis_operator(fixtures::basic()));
  EXPECT_NEAR(std::pow(spectral_norm(tp), 2), 1.0, 1e-12);
  EXPECT_EQ(pseudo_inverse(Matrix::Zero(2, 3)), Matrix::Zero(3, 2));
}

TEST(PseudoInverse, PenroseConditionsOnRankDeficient) {
  testkit::Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = rng.matrix(5, 2) * rng.matrix(2, 4);  // rank 2
    const Matrix ap = pseudo_inverse(a);
    EXPECT_LE(max_abs(a * ap * a - a), 1e-12);
    EXPECT_LE(max_abs(ap * a * ap - ap), 1e-10 * std::max(1.0, max_abs(ap)));
    EXPECT_LE(symmetry_defect(a * ap), 1e-12);
    EXPECT_LE(symmetry_defect(ap * a), 1e-12);
    // Minimal norm: range of A^dagger is orthogonal to null(A).
    const Eigen::FullPivLU<Matrix> lu(a);
    const Matrix null = lu.kernel();
    EXPECT_LE(max_abs(null.transpose() * ap), 1e-10 * std::max(1.0, max_abs(ap)));
  }
}

TEST(PseudoInverse, SurjectiveSynthesisIsRightInverse) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const FrameSystem fs = random_frame(t);
    const Matrix tm = synthesis_operator(fs);
    EXPECT_LE(max_abs(tm * pseudo_inverse(tm) - Matrix::Identity(fs.rank(), fs.rank())), 1e-9);
  }
}

TEST(ImageFrame, Examples) {
  const FrameSystem base = fixtures::basic();
  const FrameSystem same = image_frame(Matrix::Identity(2, 2), base);
  EXPECT_EQ(same.coordinates(), base.coordinates());
  const FrameBounds doubled = optimal_bounds(image_frame(2.0 * Matrix::Identity(2, 2), base));
  EXPECT_NEAR(doubled.lower, 4.0, 1e-12);
  EXPECT_NEAR(doubled.upper, 12.0, 1e-12);
  const FrameSystem flat = image_frame(mat2(1, 0, 0, 0), base);
  EXPECT_NEAR(optimal_bounds(flat).lower, 0.0, 1e-15);
  EXPECT_FALSE(is_frame(flat));
  EXPECT_THROW(image_frame(Matrix::Identity(3, 3), base), InputError);
}

TEST(ImageFrameOperator, Examples) {
  const FrameSystem base = fixtures::basic();
  EXPECT_LE(max_abs(image_frame_operator(Matrix::Identity(2, 2), base).matrix - mat2(2, 1, 1, 2)), 1e-15);
  EXPECT_LE(max_abs(image_frame_operator(2.0 * Matrix::Identity(2, 2), base).matrix - mat2(8, 4, 4, 8)), 1e-14);
  EXPECT_LE(max_abs(image_frame_operator(mat2(0, 1, 1, 0), base).matrix - mat2(2, 1, 1, 2)), 1e-15);
}

TEST(PerturbIdentity, Examples) {
  const FrameSystem base = fixtures::basic();
  EXPECT_EQ(perturb_identity(Matrix::Zero(2, 2), base).coordinates(), base.coordinates());
  const FrameBounds b = optimal_bounds(perturb_identity(Matrix::Identity(2, 2), base));
  EXPECT_NEAR(b.lower, 4.0, 1e-12);
  EXPECT_NEAR(b.upper, 12.0, 1e-12);
  const FrameSystem zero = perturb_identity(-Matrix::Identity(2, 2), base);
  EXPECT_EQ(zero.coordinates(), Matrix::Zero(3, 2));
  EXPECT_FALSE(is_frame(zero));
  const Matrix u = mat2(0.3, -0.2, 0.5, 0.1);
  EXPECT_LE(max_abs(frame_operator(perturb_identity(u, base)).matrix - perturbed_frame_operator(u, base).matrix), 1e-14);
}

TEST(Combine, Examples) {
  const FrameSystem base = fixtures::basic();
  const FrameSystem other = FrameSystem(base.shared_space(), fixtures::vecs({{3, 1, 0}, {0, 2, 5}, {1, -1, 1}}));
  const Matrix id = Matrix::Identity(2, 2), zero = Matrix::Zero(2, 2);
  EXPECT_EQ(combine(id, base, zero, other).coordinates(), base.coordinates());
  EXPECT_EQ(combine(0.5 * id, base, 0.5 * id, base).coordinates(), base.coordinates());
  const FrameSystem cancelled = combine(id, base, -id, base);
  EXPECT_EQ(cancelled.coordinates(), Matrix::Zero(3, 2));
  EXPECT_FALSE(is_frame(cancelled));
  EXPECT_FALSE(combination_is_frame(id, base, -id, base));
  EXPECT_TRUE(combination_is_frame(id, base, zero, other));
}

TEST(Combine, Errors) {
  const FrameSystem base = fixtures::basic();
  const Matrix id = Matrix::Identity(2, 2);
  EXPECT_THROW(combine(id, base, id, fixtures::orthonormal()), InputError);  // lengths differ
  const FrameSystem other_anchor(fixtures::space({{0, 0, 2}}), fixtures::vecs({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}));
  EXPECT_THROW(combine(id, base, id, other_anchor), InputError);
  EXPECT_THROW(combine(Matrix::Identity(3, 3), base, id, base), InputError);
}

TEST(Combine, CriterionMatchesBoundsOnRandomOperators) {
  testkit::GenConfig cfg;
  cfg.seed = 12;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const FrameSystem fs = random_frame(t);
    const FrameSystem gs = testkit::gen_frame(cfg, fs.shared_space(), fs.size(), t);
    const Index k = fs.rank();
    const Matrix l1 = (t % 3 == 0) ? testkit::gen_singular_operator(cfg, k, t) : testkit::gen_operator(cfg, k, t);
    const Matrix l2 = (t % 3 == 0) ? Matrix::Zero(k, k) : testkit::gen_operator(cfg, k, t + 1000);
    const bool criterion = combination_is_frame(l1, fs, l2, gs);
    // The analysis operator of the combined family equals the stated operator sum.
    const FrameSystem combined = combine(l1, fs, l2, gs);
    EXPECT_LE(max_abs(analysis_operator(combined) - combined_analysis_operator(l1, fs, l2, gs)), 1e-12);
    EXPECT_EQ(criterion, is_frame(combined)) << "trial " << t;
    if (t % 3 == 0) EXPECT_FALSE(criterion);
  }
}

TEST(SurjectivityFrameTest, Examples) {
  const SurjectivityResult base = surjectivity_frame_test(fixtures::basic());
  EXPECT_TRUE(base.surjective);
  EXPECT_NEAR(base.lower_bound, 1.0, 1e-12);
  const SurjectivityResult single = surjectivity_frame_test(fixtures::single());
  EXPECT_FALSE(single.surjective);
  EXPECT_EQ(single.lower_bound, 0.0);
  const SurjectivityResult on = surjectivity_frame_test(fixtures::orthonormal());
  EXPECT_TRUE(on.surjective);
  EXPECT_NEAR(on.lower_bound, 1.0, 1e-12);
  // gamma enters through the F-orthonormal coordinates.
  EXPECT_NEAR(surjectivity_frame_test(fixtures::scaled_anchor()).lower_bound, 4.0, 1e-12);
}

TEST(SurjectivityFrameTest, LowerBoundIdentityOnRandomFrames) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const FrameSystem fs = random_frame(t);
    const double a = optimal_bounds(fs).lower;
    const double pinv = spectral_norm(pseudo_inverse(synthesis_operator(fs)));
    EXPECT_NEAR(a * pinv * pinv, 1.0, 1e-7);
    const SurjectivityResult s = surjectivity_frame_test(fs);
    ASSERT_TRUE(s.surjective);
    EXPECT_NEAR(s.lower_bound / a, 1.0, 1e-8);
    // Synthesis norm is sqrt(B).
    EXPECT_NEAR(spectral_norm(synthesis_operator(fs)), std::sqrt(optimal_bounds(fs).upper), 1e-10);
  }
}

TEST(DualPairCheck, Examples) {
  EXPECT_TRUE(dual_pair_check(fixtures::orthonormal(), fixtures::orthonormal()));
  EXPECT_TRUE(dual_pair_check(fixtures::basic(), canonical_dual(fixtures::basic())));
  EXPECT_FALSE(dual_pair_check(fixtures::basic(), fixtures::basic()));
  EXPECT_THROW(dual_pair_check(fixtures::basic(), fixtures::orthonormal()), InputError);
}

TEST(DualPairCheck, BoundsOfDualPairs) {
  testkit::Rng rng(31);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const FrameSystem fs = random_frame(t);
    const Matrix s_inv = frame_operator(fs).inverse();
    const Matrix& phi = fs.coordinates();
    const Matrix proj = Matrix::Identity(fs.size(), fs.size()) - fs.gamma() * phi * s_inv * phi.transpose();
    const FrameSystem gs =
        FrameSystem::from_coordinates(fs.shared_space(), phi * s_inv + proj * rng.matrix(fs.size(), fs.rank()));
    ASSERT_TRUE(dual_pair_check(fs, gs));
    const FrameBounds bf = optimal_bounds(fs), bg = optimal_bounds(gs);
    EXPECT_GE(bf.lower, 1.0 / bg.upper - 1e-8);
    EXPECT_GE(bg.lower, 1.0 / bf.upper - 1e-8);
  }
}

TEST(ImageTheorem, InvertibleAndSingularOperators) {
  testkit::GenConfig cfg;
  cfg.seed = 77;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const FrameSystem fs = random_frame(t);
    const Index k = fs.rank();
    const Matrix u = testkit::gen_invertible_operator(cfg, k, t);
    const Matrix v = testkit::gen_singular_operator(cfg, k, t);
    ASSERT_TRUE(is_invertible(u));
    ASSERT_FALSE(is_invertible(v));
    const FrameSystem image = image_frame(u, fs);
    EXPECT_TRUE(is_frame(image));
    EXPECT_FALSE(is_frame(image_frame(v, fs)));
    const FrameBounds b = optimal_bounds(fs), bi = optimal_bounds(image);
    const double inv = spectral_norm(u.inverse()), un = spectral_norm(u);
    EXPECT_GE(bi.lower, b.lower / (inv * inv) * (1 - 1e-9));
    EXPECT_LE(bi.upper, b.upper * un * un * (1 + 1e-9));
    for (const Matrix* op : {&u, &v}) {
      const Matrix expected = *op * frame_operator(fs).matrix * op->transpose();
      EXPECT_LE(max_abs(frame_operator(image_frame(*op, fs)).matrix - expected), 1e-10 * std::max(1.0, max_abs(expected)));
    }
  }
}
