#include "qbag/graph.hpp"

#include "../support/fixtures.hpp"

#include <gtest/gtest.h>

using namespace qbag;
using qbag::testing::example_graph;

TEST(Graph, StoresArgumentsSortedWithBaseScores) {
  const Qbag g = example_graph();
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.ids(), (std::vector<ArgumentId>{"a", "b", "c", "d", "e"}));
  EXPECT_EQ(g.base_score("b"), 8.0);
  EXPECT_EQ(g.base_score("e"), 2.0);
  EXPECT_EQ(g.edge_count(), 5u);
}

TEST(Graph, AttackersAndSupporters) {
  const Qbag g = example_graph();
  EXPECT_EQ(attackers(g, "b"), ArgumentSet{"a"});
  EXPECT_EQ(attackers(g, "e"), ArgumentSet{"d"});
  EXPECT_EQ(supporters(g, "c"), (ArgumentSet{"a", "e"}));
  EXPECT_EQ(supporters(g, "a"), ArgumentSet{"d"});
  EXPECT_TRUE(attackers(g, "d").empty());
  EXPECT_TRUE(supporters(g, "d").empty());

  const Qbag lone({{"x", 0.5}, {"y", 0.1}}, {}, {});
  EXPECT_TRUE(attackers(lone, "x").empty());
  EXPECT_TRUE(supporters(lone, "y").empty());
  EXPECT_THROW(attackers(g, "zz"), Error);
}

TEST(Graph, Reachability) {
  const Qbag g = example_graph();
  EXPECT_TRUE(can_reach(g, {"d"}, {"b"}));
  EXPECT_FALSE(can_reach(g, {"b"}, {"d"}));
  EXPECT_FALSE(can_reach(g, {}, {"a", "b"}));
  EXPECT_FALSE(can_reach(g, {"a"}, {}));
  // Reaching oneself needs a nonempty path.
  EXPECT_FALSE(can_reach(g, {"a"}, {"a"}));
  const Qbag loop({{"x", 0.5}}, {{"x", "x"}}, {});
  EXPECT_TRUE(can_reach(loop, {"x"}, {"x"}));
  EXPECT_EQ(descendants(g, {"d"}), (ArgumentSet{"a", "b", "c", "e"}));
  EXPECT_THROW(can_reach(g, {"q"}, {"a"}), Error);
}

TEST(Graph, Restrict) {
  const Qbag g = example_graph();
  const Qbag ab = restrict(g, {"a", "b"});
  EXPECT_EQ(ab.size(), 2u);
  EXPECT_EQ(ab.attacks(), (std::vector<Edge>{{"a", "b"}}));
  EXPECT_TRUE(ab.supports().empty());
  EXPECT_EQ(ab.base_score("b"), 8.0);
  EXPECT_EQ(restrict(g, {"a", "b", "c", "d", "e"}), g);
  EXPECT_TRUE(restrict(g, {}).empty());
  EXPECT_THROW(restrict(g, {"nope"}), Error);
}

TEST(Graph, TopologicalOrder) {
  const auto order = topological_order(example_graph());
  ASSERT_TRUE(order);
  auto pos = [&](const ArgumentId& x) { return std::find(order->begin(), order->end(), x) - order->begin(); };
  EXPECT_LT(pos("d"), pos("a"));
  EXPECT_LT(pos("d"), pos("e"));
  EXPECT_LT(pos("a"), pos("b"));
  EXPECT_LT(pos("a"), pos("c"));
  EXPECT_LT(pos("e"), pos("c"));

  const Qbag single({{"x", 0.3}}, {}, {});
  EXPECT_EQ(*topological_order(single), std::vector<ArgumentId>{"x"});

  const Qbag cycle({{"x", 0.3}, {"y", 0.3}}, {{"x", "y"}}, {{"y", "x"}});
  EXPECT_FALSE(topological_order(cycle));
  const Qbag self({{"x", 0.3}}, {}, {{"x", "x"}});
  EXPECT_FALSE(topological_order(self));
}

TEST(Graph, ValidatesConstruction) {
  EXPECT_THROW(Qbag({{"a", 0.1}, {"a", 0.2}}, {}, {}), Error);
  EXPECT_THROW(Qbag({{"", 0.1}}, {}, {}), Error);
  EXPECT_THROW(Qbag({{"a", 0.1}}, {{"a", "b"}}, {}), Error);
  EXPECT_THROW(Qbag({{"a", 0.1}, {"b", 0.1}}, {{"a", "b"}}, {{"a", "b"}}), Error);
  // Repeated pairs within one relation collapse.
  const Qbag g({{"a", 0.1}, {"b", 0.1}}, {{"a", "b"}, {"a", "b"}}, {});
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(Qbag({}, {}, {}).empty());
}

TEST(Graph, WithBaseScoresSharesStructure) {
  const Qbag g = example_graph();
  Eigen::VectorXd s = g.base_scores();
  s[g.index("a")] = 3.0;
  const Qbag h = g.with_base_scores(s);
  EXPECT_EQ(h.base_score("a"), 3.0);
  EXPECT_EQ(g.base_score("a"), 1.0);
  EXPECT_EQ(h.attacks(), g.attacks());
  EXPECT_FALSE(h == g);
  EXPECT_THROW(g.with_base_scores(Eigen::VectorXd::Zero(2)), Error);
}

TEST(Graph, DomainHelpers) {
  const auto u = StrengthDomain::unit();
  EXPECT_TRUE(u.contains(0.0));
  EXPECT_TRUE(u.contains(1.0));
  EXPECT_FALSE(u.contains(1.0000001));
  EXPECT_EQ(u.clamp(-3.0), 0.0);
  EXPECT_EQ(u.clamp(7.0), 1.0);
  const auto r = StrengthDomain::reals();
  EXPECT_TRUE(r.contains(-1e9));
  EXPECT_EQ(r.clamp(-1e9), -1e9);
  EXPECT_FALSE(r.contains(std::numeric_limits<double>::quiet_NaN()));
}
