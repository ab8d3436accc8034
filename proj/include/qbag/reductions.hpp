#ifndef QBAG_REDUCTIONS_HPP
#define QBAG_REDUCTIONS_HPP

#include "qbag/search.hpp"

#include <map>
#include <optional>
#include <vector>

namespace qbag {

/// Find base scores for a fixed structure so that the final strengths
/// realise an ordering over all arguments.
struct InverseProblem {
  std::vector<ArgumentId> arguments;
  std::vector<Edge> attacks;
  std::vector<Edge> supports;
  DesiredOrdering ordering;

  /// Throws Error on a malformed structure or when the ordering does not
  /// cover exactly the arguments.
  void validate() const;
};

/// The structure of `problem` with every base score set to `s`.
Qbag assign_uniform(const InverseProblem& problem, double s, StrengthDomain domain = StrengthDomain::unit());

/// Search settings tuned for equality targets: long runs with a decaying
/// step, success at cost 1e-6, and a small margin so that tiers separate
/// strictly.
SearchConfig reduction_search_config();

struct InverseSolution {
  /// Complete base-score assignment, including arguments left at `s`.
  std::map<ArgumentId, double> base_scores;
  SearchOutcome outcome;
};

/// Searches from the uniform assignment `s` with every argument mutable.
/// A result is returned only when the ordering holds exactly (tiers strictly
/// separated, same-tier strengths within `equality_tolerance`).
std::optional<InverseSolution> solve_inverse(const InverseProblem& problem, const SemanticsSpec& spec,
                                             const SearchConfig& cfg = reduction_search_config(), double s = 0.0,
                                             double equality_tolerance = 1e-6);

/// Make argument `topic` reach final strength `target` by changing base scores.
struct CounterfactualProblem {
  Qbag graph;
  ArgumentId topic;
  double target = 0.0;

  /// Throws Error when the topic is unknown, the target leaves the domain or
  /// equals the topic's current final strength.
  static CounterfactualProblem make(Qbag graph, ArgumentId topic, double target, const SemanticsSpec& spec);
};

/// SX query over the graph extended by an isolated dummy argument with base
/// score `target`; both the topic and the dummy form a single tier and all
/// original arguments are mutable. Throws Error if `dummy` is already taken.
SxQuery reduce_counterfactual(const CounterfactualProblem& c, const SemanticsSpec& spec,
                              const ArgumentId& dummy = "__target__");

struct CounterfactualSolution {
  bool solved = false;
  /// Base scores of the original arguments after the change.
  std::map<ArgumentId, double> base_scores;
  double topic_strength = 0.0;
  double dummy_strength = 0.0;
  SearchOutcome outcome;
};

/// Solves through reduce_counterfactual. `solved` requires a found SX and
/// |sigma(topic) - target| <= cfg.cost_tolerance. Throws Error if the dummy's
/// final strength ever differs from the target (the semantics would then
/// violate stability and the reduction would be meaningless).
CounterfactualSolution solve_counterfactual(const CounterfactualProblem& c, const SemanticsSpec& spec,
                                            const SearchConfig& cfg = reduction_search_config(),
                                            const ArgumentId& dummy = "__target__");

}  // namespace qbag

#endif  // QBAG_REDUCTIONS_HPP
