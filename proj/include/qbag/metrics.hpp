#ifndef QBAG_METRICS_HPP
#define QBAG_METRICS_HPP

#include "qbag/generators.hpp"
#include "qbag/search.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qbag {

/// Tie-corrected Kendall rank correlation (tau-b) between the tier ranks of
/// `target` and the achieved strengths of its topics. 0 when either side is
/// entirely tied. Throws Error with fewer than two topics or a missing strength.
double kendall_tau(const DesiredOrdering& target, const std::map<ArgumentId, double>& strengths);

/// Spearman correlation on average ranks; 0 when either side is entirely tied.
double spearman_rho(const DesiredOrdering& target, const std::map<ArgumentId, double>& strengths);

struct ExperimentCell {
  LayerStructure structure;
  Family family = Family::random;
  MutableMode mode = MutableMode::all;
  SemanticsSpec semantics;
};

struct ExperimentConfig {
  std::vector<LayerStructure> structures;
  /// (family, mutability) combinations run for every structure.
  std::vector<std::pair<Family, MutableMode>> modes;
  std::vector<SemanticsSpec> semantics{SemanticsSpec::dfquad()};
  int n_graphs = 100;
  /// Graph i of every cell uses generator seed `seed + i`.
  std::uint64_t seed = 0;
  SearchConfig search{};
  TargetMode target = TargetMode::permuted;
  /// Divide the base-score difference by |A| instead of |M|.
  bool bs_diff_over_all = false;
  /// When false, runtimes are reported as 0 so repeated runs are byte-identical.
  bool record_runtime = true;

  void validate() const;
  /// Cells in report order: structure, then mode, then semantics.
  std::vector<ExperimentCell> cells() const;
};

struct GraphRecord {
  std::size_t cell = 0;
  int graph_index = 0;
  std::uint64_t seed = 0;
  bool found = false;
  bool valid = false;
  double kendall = 0.0;
  double spearman = 0.0;
  double runtime_s = 0.0;
  int iterations = 0;
  double final_cost = 0.0;
  double change_norm = 0.0;
  double abs_bs_diff = 0.0;
  /// Non-empty when the run failed with an error.
  std::string error;
};

struct ExperimentRecord {
  ExperimentCell cell;
  int n_graphs = 0;
  int n_errors = 0;
  double validity = 0.0;
  double kendall = 0.0;
  double spearman = 0.0;
  double runtime_s = 0.0;
  /// Mean over valid runs only; empty when no run was valid.
  std::optional<double> abs_bs_diff;
};

struct ExperimentResult {
  std::vector<ExperimentRecord> summary;
  std::vector<GraphRecord> graphs;
};

/// Generates, searches and scores one graph of one cell. Never throws;
/// failures are reported in GraphRecord::error.
GraphRecord run_graph(const ExperimentConfig& cfg, const ExperimentCell& cell, std::size_t cell_index,
                      int graph_index);

/// Runs every cell with `jobs` worker threads (0: hardware concurrency).
/// Results do not depend on `jobs` apart from runtimes.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 0,
                                const std::function<void(std::size_t done, std::size_t total)>& progress = {});

/// Aggregates per-graph records (in any order) into one record per cell.
std::vector<ExperimentRecord> summarize(const ExperimentConfig& cfg, const std::vector<GraphRecord>& graphs);

void write_summary_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_graphs_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<GraphRecord>& graphs);

}  // namespace qbag

#endif  // QBAG_METRICS_HPP
