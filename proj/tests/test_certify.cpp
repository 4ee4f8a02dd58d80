#include <gtest/gtest.h>

#include "nframe/certify.hpp"

using namespace nframe;

namespace {

const certify::SuiteReport& find(const certify::Report& r, const std::string& name) {
  for (const auto& s : r.suites)
    if (s.name == name) return s;
  throw std::runtime_error("no suite " + name);
}

}  // namespace

TEST(Certify, SmallRunPasses) {
  certify::Options opts;
  opts.seed = 42;
  opts.trials = 25;
  const certify::Report r = certify::run(opts);
  for (const auto& s : r.suites) {
    EXPECT_TRUE(s.ok()) << s.name << " worst " << s.worst_residual << " " << s.failure_message;
    EXPECT_EQ(s.trials, 25);
  }
  EXPECT_TRUE(r.all_pass());
}

TEST(Certify, RejectsZeroTrials) {
  certify::Options opts;
  opts.trials = 0;
  EXPECT_THROW(certify::run(opts), PreconditionError);
}

TEST(Certify, ReportIndependentOfThreadCount) {
  certify::Options opts;
  opts.seed = 9;
  opts.trials = 12;
  opts.threads = 1;
  const certify::Report serial = certify::run(opts);
  opts.threads = 4;
  const certify::Report parallel = certify::run(opts);
  ASSERT_EQ(serial.suites.size(), parallel.suites.size());
  for (std::size_t i = 0; i < serial.suites.size(); ++i) {
    EXPECT_EQ(serial.suites[i].passed, parallel.suites[i].passed);
    EXPECT_EQ(serial.suites[i].worst_residual, parallel.suites[i].worst_residual);
  }
}

TEST(Certify, DetectsSignFlippedInnerProduct) {
  certify::Options opts;
  opts.trials = 5;
  opts.inner = [](const AmbientVector& x, const AmbientVector& y, const AnchorSet& f) { return -n_inner(x, y, f); };
  const certify::Report r = certify::run(opts);
  EXPECT_FALSE(r.all_pass());
  const auto& cs = find(r, "cauchy_schwarz");
  EXPECT_FALSE(cs.ok());
  ASSERT_TRUE(cs.counterexample);
  // The dump is a loadable instance.
  EXPECT_NO_THROW(resolve_instance(parse_instance(*cs.counterexample)));
}

TEST(Certify, TrialsAreReproducible) {
  certify::Options opts;
  opts.seed = 5;
  const certify::Trial a = certify::make_trial(opts, 3);
  const certify::Trial b = certify::make_trial(opts, 3);
  EXPECT_EQ(serialize_instance(a.instance.file), serialize_instance(b.instance.file));
  EXPECT_NE(serialize_instance(a.instance.file), serialize_instance(certify::make_trial(opts, 4).instance.file));
}
