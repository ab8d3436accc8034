#include "qbag/oracle.hpp"

#include "../support/fixtures.hpp"

#include <gtest/gtest.h>

using namespace qbag;
using qbag::testing::example_query;
using qbag::testing::random_acyclic;

namespace {

GridSpec quarter_grid() {
  GridSpec g;
  g.step = 0.25;
  g.lower = 0.0;
  g.upper = 4.0;
  return g;
}

StrengthChange change(std::map<ArgumentId, double> m) { return StrengthChange{std::move(m)}; }

}  // namespace

TEST(GridValues, IncludeBaseScoreAndBounds) {
  GridSpec g;
  g.step = 0.3;
  const auto v = grid_values(g, StrengthDomain::unit(), 0.45);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.size(), 6u);  // 0, 0.3, 0.6, 0.9, 1 and the base score
  EXPECT_EQ(v.back(), 1.0);
  EXPECT_TRUE(std::find(v.begin(), v.end(), 0.45) != v.end());
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  EXPECT_THROW(grid_values(g, StrengthDomain::reals(), 0.0), Error);
  g.step = 0.0;
  EXPECT_THROW(grid_values(g, StrengthDomain::unit(), 0.0), Error);
}

TEST(BruteForce, ExampleQueryExactMode) {
  const auto r = brute_force_sx(example_query(), quarter_grid(), SatisfactionMode::exact);
  ASSERT_TRUE(r.best);
  EXPECT_EQ(*r.best, change({{"a", 2.25}}));
  EXPECT_EQ(r.best_norm, 1.25);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.evaluations, 17u * 17u);
}

TEST(BruteForce, ExampleQueryWeakModeAllowsTie) {
  const auto r = brute_force_sx(example_query(), quarter_grid(), SatisfactionMode::weak);
  ASSERT_TRUE(r.best);
  EXPECT_EQ(*r.best, change({{"a", 2.0}}));
  EXPECT_EQ(r.best_norm, 1.0);
}

TEST(BruteForce, SatisfiedQueryGivesEmptyChange) {
  SxQuery q = example_query();
  q.ordering = DesiredOrdering({{"c"}, {"b"}});
  const auto r = brute_force_sx(q, quarter_grid());
  ASSERT_TRUE(r.best);
  EXPECT_TRUE(r.best->empty());
  EXPECT_EQ(r.best_norm, 0.0);
}

TEST(BruteForce, UnreachableMutablesGiveNothing) {
  SxQuery q = example_query();
  q.mutable_set = {"b"};
  q.ordering = DesiredOrdering({{"c"}, {"e"}});
  const auto r = brute_force_sx(q, quarter_grid());
  EXPECT_FALSE(r.best);
  EXPECT_TRUE(std::isinf(r.best_norm));
  EXPECT_TRUE(r.exhaustive);
}

TEST(BruteForce, BudgetAndLimits) {
  GridSpec g = quarter_grid();
  g.max_evaluations = 10;
  const auto r = brute_force_sx(example_query(), g, SatisfactionMode::exact);
  EXPECT_FALSE(r.exhaustive);
  EXPECT_EQ(r.evaluations, 10u);

  g = quarter_grid();
  g.max_mutable = 1;
  EXPECT_THROW(brute_force_sx(example_query(), g), Error);

  GridSpec unbounded;
  EXPECT_THROW(brute_force_sx(example_query(), unbounded), Error);
}

TEST(BruteForce, FinerNestedGridNeverWorse) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Qbag g = random_acyclic(rng, 5, 0.5);
    const auto& ids = g.ids();
    const SxQuery q{g, SemanticsSpec::dfquad(), {ids[0], ids[1]}, DesiredOrdering::strict_descending({ids[3], ids[4]})};
    GridSpec coarse, fine;
    coarse.step = 0.25;
    fine.step = 0.125;
    const auto rc = brute_force_sx(q, coarse);
    const auto rf = brute_force_sx(q, fine);
    EXPECT_LE(rf.best_norm, rc.best_norm + 1e-12);
    if (rf.best) {
      EXPECT_TRUE(is_sx(q, *rf.best, SatisfactionMode::weak));
    }
  }
}

TEST(Certify, ExampleVerdicts) {
  const SxQuery q = example_query();
  const GridSpec g = quarter_grid();
  // {a: 2.25} beats ||{a:2, e:4}|| - 1 = 2.
  EXPECT_EQ(certify_epsilon(q, change({{"a", 2}, {"e", 4}}), 1.0, g), Verdict::no);
  EXPECT_EQ(is_epsilon_approximate(q, change({{"a", 2}, {"e", 4}}), 1.0, g), Verdict::no);
  // The infimum for {a: 3} minus 1 sits exactly on the boundary: the grid
  // cannot refute it, nor certify it without slack.
  EXPECT_NE(certify_epsilon(q, change({{"a", 3}}), 1.0, g), Verdict::no);
  EXPECT_EQ(certify_epsilon(q, change({{"a", 3}}), 1.5, g), Verdict::yes);
  EXPECT_EQ(certify_epsilon(q, change({{"a", 3}}), 2.0, g), Verdict::yes);
  EXPECT_THROW(certify_epsilon(q, change({{"a", 1.5}}), 1.0, g), Error);
  EXPECT_THROW(certify_epsilon(q, change({{"a", 3}}), -1.0, g), Error);
}

TEST(Certify, EmptyChangeOnSatisfiedQuery) {
  SxQuery q = example_query();
  q.ordering = DesiredOrdering({{"c"}, {"b"}});
  EXPECT_EQ(certify_epsilon(q, {}, 0.0, quarter_grid()), Verdict::yes);
}

TEST(Certify, CoarseGridTightEpsilonIsUnknown) {
  const SxQuery q = example_query();
  GridSpec coarse;
  coarse.step = 1.0;
  coarse.lower = 0.0;
  coarse.upper = 4.0;
  EXPECT_EQ(certify_epsilon(q, change({{"a", 2.25}}), 0.0, coarse), Verdict::unknown);
  GridSpec narrow = quarter_grid();
  narrow.upper = 2.0;
  EXPECT_EQ(certify_epsilon(q, change({{"a", 3}}), 1.5, narrow), Verdict::unknown);
  GridSpec tiny_budget = quarter_grid();
  tiny_budget.max_evaluations = 3;
  EXPECT_EQ(certify_epsilon(q, change({{"a", 3}}), 1.5, tiny_budget), Verdict::unknown);
}

TEST(StrengthRange, CoversReachableValues) {
  const Qbag g({{"a", 0.5}, {"t", 0.2}}, {}, {{"a", "t"}});
  GridSpec grid;
  grid.step = 0.5;
  const auto r = strength_range(g, SemanticsSpec::dfquad(), "t", {"a", "t"}, grid);
  EXPECT_EQ(r.min, 0.0);
  EXPECT_EQ(r.max, 1.0);
  EXPECT_TRUE(r.exhaustive);
  const auto fixed = strength_range(g, SemanticsSpec::dfquad(), "t", {}, grid);
  EXPECT_NEAR(fixed.min, 0.6, 1e-15);
  EXPECT_EQ(fixed.min, fixed.max);
}
