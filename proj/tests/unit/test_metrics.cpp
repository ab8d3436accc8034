#include "qbag/metrics.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qbag;

namespace {

// Target a > b > c (a strongest).
const DesiredOrdering kTarget = DesiredOrdering::strict_descending({"a", "b", "c"});

}  // namespace

TEST(Kendall, Basics) {
  EXPECT_DOUBLE_EQ(kendall_tau(kTarget, {{"a", 0.9}, {"b", 0.5}, {"c", 0.1}}), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(kTarget, {{"a", 0.1}, {"b", 0.5}, {"c", 0.9}}), -1.0);
  EXPECT_NEAR(kendall_tau(kTarget, {{"a", 0.9}, {"b", 0.1}, {"c", 0.5}}), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(kendall_tau(DesiredOrdering({{"a"}}), {{"a", 0.3}}), Error);
  EXPECT_THROW(kendall_tau(kTarget, {{"a", 0.3}}), Error);
}

TEST(Kendall, TieCorrection) {
  // tau-b with one tie among the achieved strengths: (2 - 0) / sqrt(3 * 2).
  EXPECT_NEAR(kendall_tau(kTarget, {{"a", 0.9}, {"b", 0.5}, {"c", 0.5}}), 2.0 / std::sqrt(6.0), 1e-15);
  EXPECT_EQ(kendall_tau(kTarget, {{"a", 0.5}, {"b", 0.5}, {"c", 0.5}}), 0.0);
}

TEST(Spearman, Basics) {
  EXPECT_NEAR(spearman_rho(kTarget, {{"a", 0.9}, {"b", 0.5}, {"c", 0.1}}), 1.0, 1e-15);
  EXPECT_NEAR(spearman_rho(kTarget, {{"a", 0.1}, {"b", 0.5}, {"c", 0.9}}), -1.0, 1e-15);
  EXPECT_NEAR(spearman_rho(kTarget, {{"a", 0.9}, {"b", 0.1}, {"c", 0.5}}), 0.5, 1e-15);
  // Average ranks: achieved ranks (3, 1.5, 1.5) against (3, 2, 1).
  EXPECT_NEAR(spearman_rho(kTarget, {{"a", 0.9}, {"b", 0.5}, {"c", 0.5}}), std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_EQ(spearman_rho(kTarget, {{"a", 0.5}, {"b", 0.5}, {"c", 0.5}}), 0.0);
}

TEST(Correlations, InvariantUnderRelabelling) {
  const auto t2 = DesiredOrdering::strict_descending({"z", "y", "x", "w"});
  const auto t1 = DesiredOrdering::strict_descending({"a", "b", "c", "d"});
  const std::map<ArgumentId, double> s1{{"a", 0.3}, {"b", 0.9}, {"c", 0.1}, {"d", 0.2}};
  const std::map<ArgumentId, double> s2{{"z", 0.3}, {"y", 0.9}, {"x", 0.1}, {"w", 0.2}};
  EXPECT_EQ(kendall_tau(t1, s1), kendall_tau(t2, s2));
  EXPECT_EQ(spearman_rho(t1, s1), spearman_rho(t2, s2));
}

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.structures = {{3, 5, 4, 3}};
  cfg.modes = {{Family::constrained, MutableMode::constrained}, {Family::random, MutableMode::first},
               {Family::random, MutableMode::all}};
  cfg.n_graphs = 6;
  cfg.seed = 100;
  cfg.record_runtime = false;
  return cfg;
}

}  // namespace

TEST(Experiment, CellsAndValidation) {
  ExperimentConfig cfg = small_config();
  cfg.semantics = {SemanticsSpec::dfquad(), SemanticsSpec::euler_based()};
  EXPECT_EQ(cfg.cells().size(), 6u);
  EXPECT_NO_THROW(cfg.validate());
  cfg.n_graphs = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small_config();
  cfg.modes = {{Family::random, MutableMode::constrained}};
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small_config();
  cfg.structures = {{3, 4, 2}};
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Experiment, IndependentOfWorkerCount) {
  const ExperimentConfig cfg = small_config();
  const auto one = run_experiment(cfg, 1);
  const auto three = run_experiment(cfg, 3);
  std::ostringstream a, b, ga, gb;
  write_summary_csv(a, one.summary);
  write_summary_csv(b, three.summary);
  write_graphs_csv(ga, cfg, one.graphs);
  write_graphs_csv(gb, cfg, three.graphs);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(ga.str(), gb.str());
  EXPECT_EQ(one.graphs.size(), 18u);
}

TEST(Experiment, RecordsAreConsistent) {
  const ExperimentConfig cfg = small_config();
  const auto res = run_experiment(cfg, 1);
  ASSERT_EQ(res.summary.size(), 3u);
  for (const auto& g : res.graphs) {
    EXPECT_TRUE(g.error.empty()) << g.error;
    if (g.valid) {
      EXPECT_TRUE(g.found);
      // Weak satisfaction rules out discordant pairs; ties are still allowed.
      EXPECT_GE(g.kendall, 0.0);
      EXPECT_GE(g.spearman, 0.0);
    }
    EXPECT_GE(g.kendall, -1.0);
    EXPECT_LE(g.kendall, 1.0);
  }
  for (const auto& r : res.summary) {
    EXPECT_GE(r.validity, 0.0);
    EXPECT_LE(r.validity, 1.0);
    EXPECT_EQ(r.abs_bs_diff.has_value(), r.validity > 0);
  }
  // Same graphs for every mode of one family: graph i uses seed + i.
  EXPECT_EQ(res.graphs[6].seed, 100u);
  EXPECT_EQ(res.graphs[11].seed, 105u);
}

TEST(Experiment, SummaryAveragesValidRunsOnly) {
  ExperimentConfig cfg = small_config();
  cfg.modes = {{Family::random, MutableMode::all}};
  std::vector<GraphRecord> g(3);
  g[0].valid = g[0].found = true;
  g[0].abs_bs_diff = 0.2;
  g[0].kendall = g[0].spearman = 1.0;
  g[1].abs_bs_diff = 0.9;
  g[1].kendall = g[1].spearman = -1.0;
  g[2].error = "boom";
  const auto s = summarize(cfg, g);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].validity, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(s[0].n_errors, 1);
  EXPECT_EQ(s[0].kendall, 0.0);
  ASSERT_TRUE(s[0].abs_bs_diff);
  EXPECT_EQ(*s[0].abs_bs_diff, 0.2);

  std::ostringstream os;
  write_summary_csv(os, {ExperimentRecord{}});
  EXPECT_NE(os.str().find("NA"), std::string::npos);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "structure,family,mode,semantics,validity,kendall,spearman,runtime_s,abs_bs_diff");
}
