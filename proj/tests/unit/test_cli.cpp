#include "qbag/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
namespace io = qbag::io;

namespace {

struct CliResult {
  int code;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(QBAG_SX_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) / ("qbag_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    graph_ = write("graph.json", R"({
      "arguments": [{"id":"a","base_score":1},{"id":"b","base_score":8},{"id":"c","base_score":1},
                    {"id":"d","base_score":1},{"id":"e","base_score":2}],
      "attacks": [["a","b"],["d","e"]], "supports": [["a","c"],["e","c"],["d","a"]]})");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const std::string p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
  std::string graph_;
};

}  // namespace

TEST_F(Cli, EvalPrintsStrengths) {
  const CliResult r = run("eval --graph " + graph_ + " --semantics naive");
  ASSERT_EQ(r.code, 0);
  const auto j = io::parse_json(r.out);
  EXPECT_EQ(j["d"].get<double>(), 1.0);
  EXPECT_EQ(j["a"].get<double>(), 2.0);
  EXPECT_EQ(j["e"].get<double>(), 1.0);
  EXPECT_EQ(j["b"].get<double>(), 6.0);
  EXPECT_EQ(j["c"].get<double>(), 4.0);

  const CliResult csv = run("eval --graph " + graph_ + " --semantics naive --format csv");
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out, "id,strength\na,2\nb,6\nc,4\nd,1\ne,1\n");
}

TEST_F(Cli, ExplainFindsChange) {
  const CliResult r = run("explain --graph " + graph_ + " --semantics naive --ordering 'c>b' --mutable a,e");
  ASSERT_EQ(r.code, 0);
  const auto j = io::parse_json(r.out);
  EXPECT_EQ(j["status"], "found");
  const auto d = io::change_from_json(j["sx"]);
  qbag::SxQuery q{io::graph_from_json(io::read_json_file(graph_)), qbag::SemanticsSpec::naive(), {"a", "e"},
                  io::parse_ordering_notation("c>b")};
  EXPECT_TRUE(qbag::is_sx(q, d, qbag::SatisfactionMode::weak));
  // Identical invocations give identical bytes.
  EXPECT_EQ(run("explain --graph " + graph_ + " --semantics naive --ordering 'c>b' --mutable a,e").out, r.out);
}

TEST_F(Cli, ExplainUnreachableExitsOne) {
  const CliResult r = run("explain --graph " + graph_ + " --semantics naive --ordering 'e>c' --mutable b");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(io::parse_json(r.out)["status"], "not_found");
}

TEST_F(Cli, UsageAndParseErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("eval").code, 2);
  EXPECT_EQ(run("eval --graph " + graph_ + " --semantics mlp").code, 2);
  EXPECT_EQ(run("eval --graph /nonexistent.json").code, 2);
  const std::string bad = write("bad.json", R"({"arguments": [{"id": "a"}]})");
  EXPECT_EQ(run("eval --graph " + bad).code, 2);
  EXPECT_EQ(run("explain --graph " + graph_ + " --semantics naive --ordering 'c>>b' --mutable a").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, GenerateWritesGraphAndManifest) {
  const std::string out = (dir_ / "gen").string();
  const CliResult r = run("generate --structure 8,32,16,3 --family constrained --seed 4 --out " + out);
  ASSERT_EQ(r.code, 0);
  const auto g = io::graph_from_json(io::read_json_file(out + "/graph.json"));
  EXPECT_EQ(g.size(), 59u);
  const auto m = io::read_json_file(out + "/manifest.json");
  EXPECT_EQ(m["layers"].size(), 4u);
  EXPECT_EQ(m["mutable"]["constrained"].size(), 43u);
  EXPECT_EQ(io::ordering_from_json(m["ordering"]).topic_count(), 3u);
  EXPECT_EQ(run("generate --structure 8,16,3 --family constrained --out " + out).code, 2);
}

TEST_F(Cli, OracleReportsBestChange) {
  const CliResult r = run("oracle --graph " + graph_ +
                    " --semantics naive --ordering 'c>b' --mutable a,e --grid-step 0.25 --grid-lower 0 "
                    "--grid-upper 4 --satisfaction exact");
  ASSERT_EQ(r.code, 0);
  const auto j = io::parse_json(r.out);
  EXPECT_EQ(j["best_norm"].get<double>(), 1.25);
  EXPECT_EQ(j["best"]["changes"]["a"].get<double>(), 2.25);
  EXPECT_TRUE(j["exhaustive"].get<bool>());

  const std::string d = write("delta.json", R"({"changes":{"a":2,"e":4}})");
  const CliResult v = run("oracle --graph " + graph_ +
                    " --semantics naive --ordering 'c>b' --mutable a,e --grid-step 0.25 --grid-lower 0 "
                    "--grid-upper 4 --satisfaction exact --change " + d + " --epsilon 1");
  ASSERT_EQ(v.code, 0);
  EXPECT_EQ(io::parse_json(v.out)["verdict"], "no");
}

TEST_F(Cli, InverseAndCounterfactual) {
  const std::string p = write("problem.json", R"({"arguments":["a","b","c","d","e"],
    "attacks":[["a","b"],["d","e"]],"supports":[["a","c"],["e","c"],["d","a"]],
    "ordering":{"tiers":[["d"],["e"],["a"],["b"],["c"]]}})");
  const CliResult inv = run("inverse --problem " + p + " --semantics naive");
  ASSERT_EQ(inv.code, 0);
  EXPECT_EQ(io::parse_json(inv.out)["status"], "found");

  const CliResult cf = run("counterfactual --graph " + graph_ + " --semantics naive --topic c --target-strength 6");
  ASSERT_EQ(cf.code, 0);
  const auto j = io::parse_json(cf.out);
  EXPECT_NEAR(j["topic_strength"].get<double>(), 6.0, 1e-4);
  EXPECT_EQ(j["dummy_strength"].get<double>(), 6.0);
  EXPECT_EQ(run("counterfactual --graph " + graph_ + " --semantics naive --topic c --target-strength 4").code, 2);
}

TEST_F(Cli, ExperimentWritesCsv) {
  const std::string cfg = write("exp.json", R"({"structures":[[3,5,4,3]],
    "modes":[{"family":"random","mode":"all"},{"family":"constrained","mode":"constrained"}],
    "n_graphs":3,"seed":1,"record_runtime":false})");
  const std::string out = (dir_ / "exp").string();
  const CliResult r = run("experiment --config " + cfg + " --out " + out + " --jobs 2 --format csv");
  ASSERT_EQ(r.code, 0);
  std::ifstream in(out + "/summary.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "structure,family,mode,semantics,validity,kendall,spearman,runtime_s,abs_bs_diff");
  EXPECT_TRUE(fs::exists(out + "/graphs.csv"));
  EXPECT_EQ(r.out.substr(0, header.size()), header);
  EXPECT_EQ(run("experiment --config " + cfg + " --out " + out + " --jobs 1 --format csv").out, r.out);
}
