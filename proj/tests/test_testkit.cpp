#include <gtest/gtest.h>

#include <thread>

#include "fixtures.hpp"
#include "nframe/testkit.hpp"

using namespace nframe;
using namespace nframe::testkit;

TEST(Rng, UniformRangeAndDeterminism) {
  Rng a(123), b(123), c(124);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.symmetric();
    EXPECT_GE(x, -1.0);
    EXPECT_LT(x, 1.0);
    EXPECT_EQ(x, b.symmetric());
    differs = differs || x != c.symmetric();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, DerivedSeedsSeparateStreams) {
  EXPECT_NE(derive_seed(1, 1, 0), derive_seed(1, 2, 0));
  EXPECT_NE(derive_seed(1, 1, 0), derive_seed(1, 1, 1));
  EXPECT_NE(derive_seed(1, 1, 0), derive_seed(2, 1, 0));
  EXPECT_EQ(derive_seed(9, 3, 4), derive_seed(9, 3, 4));
}

TEST(GenAnchorSet, Contract) {
  GenConfig cfg;
  cfg.seed = 42;
  const AnchorSet one = gen_anchor_set(cfg, 3, 2);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_GT(one.gamma(), 1e-6);
  const AnchorSet two = gen_anchor_set(cfg, 4, 3);
  EXPECT_EQ(two.size(), 2u);
  EXPECT_TRUE(two.independent());
  EXPECT_THROW(gen_anchor_set(cfg, 2, 3), PreconditionError);
  EXPECT_THROW(gen_anchor_set(cfg, 3, 1), PreconditionError);
}

TEST(GenFrame, Contract) {
  GenConfig cfg;
  cfg.seed = 42;
  const InducedSpace xf = build_induced_space(gen_anchor_set(cfg, 5, 2));
  const Index k = xf.rank();
  const FrameSystem basis = gen_frame(cfg, xf, k);
  EXPECT_EQ(basis.size(), k);
  EXPECT_GT(optimal_bounds(basis).lower, 1e-6);
  const FrameSystem over = gen_frame(cfg, xf, 2 * k);
  EXPECT_EQ(over.size(), 2 * k);
  EXPECT_TRUE(is_frame(over));
  EXPECT_THROW(gen_frame(cfg, xf, k - 1), PreconditionError);
}

TEST(GenFrame, RetryExhaustion) {
  GenConfig cfg;
  cfg.max_retries = 3;
  cfg.min_lower_bound = 1e6;  // unattainable
  const InducedSpace xf = build_induced_space(gen_anchor_set(cfg, 4, 2));
  EXPECT_THROW(gen_frame(cfg, xf, 4), GenerationError);
}

TEST(Generators, Determinism) {
  GenConfig cfg;
  cfg.seed = 7;
  const InducedSpace xf = build_induced_space(gen_anchor_set(cfg, 6, 3, 5));
  const FrameSystem a = gen_frame(cfg, xf, 8, 2);
  const FrameSystem b = gen_frame(cfg, xf, 8, 2);
  EXPECT_EQ(a.coordinates(), b.coordinates());
  EXPECT_EQ(gen_invertible_operator(cfg, 4, 1), gen_invertible_operator(cfg, 4, 1));
  EXPECT_EQ(gen_vector(cfg, 6, 3), gen_vector(cfg, 6, 3));

  // Same results when generated concurrently.
  Matrix from_thread;
  std::thread worker([&] { from_thread = gen_frame(cfg, xf, 8, 2).coordinates(); });
  worker.join();
  EXPECT_EQ(from_thread, a.coordinates());
}

TEST(Generators, OperatorConditioning) {
  GenConfig cfg;
  cfg.seed = 3;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const Index k = 1 + static_cast<Index>(t % 7);
    const Vector s = singular_values(gen_invertible_operator(cfg, k, t));
    EXPECT_LE(s(0) / s(k - 1), cfg.cond_cap * (1 + 1e-9));
    EXPECT_NEAR(s(k - 1), 1.0, 1e-9);
    const Vector z = singular_values(gen_singular_operator(cfg, k, t));
    EXPECT_LE(z(k - 1), 1e-12 * std::max(1.0, z(0)));
  }
}

TEST(OracleBounds, BasicFixtureSandwich) {
  const OracleBounds ob = oracle_bounds(fixtures::basic(), 10000, 1);
  EXPECT_GE(ob.min, 1.0 - 1e-9);
  EXPECT_LE(ob.max, 3.0 + 1e-9);
  EXPECT_LT(ob.min, 1.05);
  EXPECT_GT(ob.max, 2.95);
}

TEST(OracleBounds, TightFixture) {
  const OracleBounds ob = oracle_bounds(fixtures::orthonormal(), 1000, 2);
  EXPECT_NEAR(ob.min, 1.0, 1e-9);
  EXPECT_NEAR(ob.max, 1.0, 1e-9);
}

TEST(OracleBounds, NonFrameRatioVanishes) {
  const OracleBounds ob = oracle_bounds(fixtures::single(), 10000, 3);
  EXPECT_LE(ob.min, 1e-2);
  EXPECT_THROW(oracle_bounds(fixtures::single(), 0, 3), PreconditionError);
}

TEST(OracleBounds, SandwichOnRandomFrames) {
  GenConfig cfg;
  cfg.seed = 8;
  for (std::uint64_t t = 0; t < 30; ++t) {
    const Index d = 2 + static_cast<Index>(t % 6);
    const InducedSpace xf = build_induced_space(gen_anchor_set(cfg, d, 2, t));
    const FrameSystem fs = gen_frame(cfg, xf, xf.rank() + 2, t);
    const FrameBounds b = optimal_bounds(fs);
    const OracleBounds ob = oracle_bounds(fs, 2000, t);
    EXPECT_GE(ob.min, b.lower - 1e-9);
    EXPECT_LE(ob.max, b.upper + 1e-9);
  }
}
