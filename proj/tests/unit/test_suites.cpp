#include <cmath>

#include <gtest/gtest.h>

#include "bpdo/suites.hpp"

using namespace bpdo;

TEST(Config, DefaultsAreValid) {
  const ExperimentConfig c;
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(c.grid, default_grid());
  EXPECT_EQ(c.r_triples.size(), 27u);
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c;
  c.seed = 123;
  c.s1 = 0.125;
  c.s2 = 0.375;
  c.r_triples = {{1, 1, 1}, {2, 2, 2}};
  const ExperimentConfig back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, RejectsExponentsOffTheScalingLine) {
  ExperimentConfig c;
  c.suite = "prop";
  c.s1 = 0.25;
  c.s2 = 0.5;
  EXPECT_THROW(validate(c), Error);
  c.suite = "lemmas";
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, RejectsBadFields) {
  EXPECT_THROW(config_from_json({{"suit", "all"}}), Error);
  EXPECT_THROW(config_from_json({{"seed", -1}}), Error);
  EXPECT_THROW(config_from_json({{"seed", "seven"}}), Error);
  ExperimentConfig c;
  c.suite = "everything";
  EXPECT_THROW(validate(c), Error);
  c = {};
  c.r_triples = {{0.5, 1, 1}};
  EXPECT_THROW(validate(c), Error);
  c = {};
  c.trials_per_triple = 0;
  EXPECT_THROW(validate(c), Error);
}

TEST(Constants, MissingIdFailsClosed) {
  ConstantsTable t;
  EXPECT_TRUE(std::isnan(frozen_bound(t, "lweak.ratio")));
  EXPECT_FALSE(upper_check("lweak.ratio", "x", 0.1, frozen_bound(t, "lweak.ratio")).pass);
}

TEST(Constants, CalibrationSkipsFixedChecksAndKeepsWorst) {
  SuiteReport a, b;
  a.suite = "a";
  b.suite = "b";
  a.add(upper_check("fixed.tol", "t", 1e-9, 1e-6));
  a.add(upper_check("x.ratio", "r", 2.0, 0.0));
  b.add(upper_check("x.ratio", "r", 3.0, 0.0));
  const ConstantsTable t = calibrate({a, b}, 1.5);
  EXPECT_FALSE(t.has("fixed.tol"));
  ASSERT_TRUE(t.has("x.ratio"));
  EXPECT_DOUBLE_EQ(t.get("x.ratio"), 4.5);
}

TEST(Suites, IdentitiesPass) {
  const SuiteReport r = identities_suite(ExperimentConfig{});
  EXPECT_EQ(r.checks.size(), 6u);
  EXPECT_TRUE(r.passed());
}
