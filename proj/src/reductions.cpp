#include "qbag/reductions.hpp"

#include <cmath>
#include <sstream>

namespace qbag {

void InverseProblem::validate() const {
  std::vector<Qbag::Argument> args;
  for (const auto& x : arguments) args.push_back({x, 0.0});
  const Qbag structure(std::move(args), attacks, supports);
  ArgumentSet all(arguments.begin(), arguments.end());
  if (ordering.topics() != all) throw Error("the desired ordering must cover exactly the problem's arguments");
}

Qbag assign_uniform(const InverseProblem& problem, double s, StrengthDomain domain) {
  if (!domain.contains(s)) throw Error("uniform base score lies outside the strength domain");
  std::vector<Qbag::Argument> args;
  for (const auto& x : problem.arguments) args.push_back({x, s});
  return Qbag(std::move(args), problem.attacks, problem.supports);
}

SearchConfig reduction_search_config() {
  SearchConfig cfg;
  cfg.max_iterations = 3000;
  cfg.lr_decay = 0.996;
  cfg.cost_tolerance = 1e-6;
  cfg.margin = 1e-3;
  cfg.restarts = 3;
  return cfg;
}

std::optional<InverseSolution> solve_inverse(const InverseProblem& problem, const SemanticsSpec& spec,
                                             const SearchConfig& cfg, double s, double equality_tolerance) {
  problem.validate();
  SxQuery q{assign_uniform(problem, s, spec.domain), spec, {}, problem.ordering};
  q.mutable_set.insert(problem.arguments.begin(), problem.arguments.end());

  InverseSolution sol;
  sol.outcome = heuristic_search(q, cfg);
  if (!sol.outcome.found()) return std::nullopt;
  const Qbag solved = apply_change(q.graph, *sol.outcome.sx, spec.domain);
  if (!satisfies(solved, spec, problem.ordering, SatisfactionMode::exact, equality_tolerance)) return std::nullopt;
  for (const auto& x : problem.arguments) sol.base_scores[x] = solved.base_score(x);
  return sol;
}

CounterfactualProblem CounterfactualProblem::make(Qbag graph, ArgumentId topic, double target,
                                                  const SemanticsSpec& spec) {
  if (!graph.contains(topic)) throw Error("counterfactual topic '" + topic + "' is not in the graph");
  if (!spec.domain.contains(target)) throw Error("counterfactual target lies outside the strength domain");
  const auto sigma = final_strengths(graph, spec);
  if (sigma.at(topic) == target) {
    std::ostringstream os;
    os << "argument '" << topic << "' already has final strength " << target;
    throw Error(os.str());
  }
  return {std::move(graph), std::move(topic), target};
}

SxQuery reduce_counterfactual(const CounterfactualProblem& c, const SemanticsSpec& spec, const ArgumentId& dummy) {
  const Qbag& g = c.graph;
  if (g.contains(dummy)) throw Error("dummy argument id '" + dummy + "' is already used in the graph");
  std::vector<Qbag::Argument> args;
  for (Index i = 0; i < static_cast<Index>(g.size()); ++i) args.push_back({g.id(i), g.base_score(i)});
  args.push_back({dummy, c.target});
  SxQuery q{Qbag(std::move(args), g.attacks(), g.supports()), spec, {}, DesiredOrdering({{c.topic, dummy}})};
  q.mutable_set.insert(g.ids().begin(), g.ids().end());
  return q;
}

CounterfactualSolution solve_counterfactual(const CounterfactualProblem& c, const SemanticsSpec& spec,
                                            const SearchConfig& cfg, const ArgumentId& dummy) {
  const SxQuery q = reduce_counterfactual(c, spec, dummy);
  CounterfactualSolution sol;
  sol.outcome = heuristic_search(q, cfg);

  Eigen::VectorXd tau = q.graph.base_scores();
  for (const auto& [x, v] : sol.outcome.final_scores) tau[q.graph.index(x)] = v;
  const Qbag reached = q.graph.with_base_scores(tau);
  const auto sigma = final_strengths(reached, spec);
  sol.dummy_strength = sigma.at(dummy);
  if (sol.dummy_strength != c.target) {
    std::ostringstream os;
    os << "dummy argument ended at " << sol.dummy_strength << " instead of " << c.target
       << "; the semantics does not satisfy stability";
    throw Error(os.str());
  }
  sol.topic_strength = sigma.at(c.topic);
  for (const auto& x : c.graph.ids()) sol.base_scores[x] = reached.base_score(x);
  sol.solved = sol.outcome.found() && std::abs(sol.topic_strength - c.target) <= cfg.cost_tolerance;
  return sol;
}

}  // namespace qbag
