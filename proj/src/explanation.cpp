#include "qbag/explanation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbag {

DesiredOrdering::DesiredOrdering(std::vector<std::vector<ArgumentId>> tiers_weakest_first)
    : tiers_(std::move(tiers_weakest_first)) {
  ArgumentSet seen;
  for (auto& tier : tiers_) {
    if (tier.empty()) throw Error("desired ordering has an empty tier");
    std::sort(tier.begin(), tier.end());
    for (const auto& x : tier) {
      if (x.empty()) throw Error("desired ordering mentions an empty id");
      if (!seen.insert(x).second) throw Error("argument '" + x + "' appears twice in the desired ordering");
    }
  }
}

DesiredOrdering DesiredOrdering::strict_descending(const std::vector<ArgumentId>& strongest_first) {
  std::vector<std::vector<ArgumentId>> tiers;
  for (auto it = strongest_first.rbegin(); it != strongest_first.rend(); ++it) tiers.push_back({*it});
  return DesiredOrdering(std::move(tiers));
}

ArgumentSet DesiredOrdering::topics() const {
  ArgumentSet out;
  for (const auto& tier : tiers_) out.insert(tier.begin(), tier.end());
  return out;
}

std::size_t DesiredOrdering::topic_count() const {
  std::size_t n = 0;
  for (const auto& tier : tiers_) n += tier.size();
  return n;
}

std::size_t DesiredOrdering::tier_of(const ArgumentId& x) const {
  for (std::size_t t = 0; t < tiers_.size(); ++t)
    if (std::binary_search(tiers_[t].begin(), tiers_[t].end(), x)) return t;
  throw Error("'" + x + "' is not a topic of the desired ordering");
}

bool DesiredOrdering::strict() const {
  return std::all_of(tiers_.begin(), tiers_.end(), [](const auto& t) { return t.size() == 1; });
}

std::set<std::pair<ArgumentId, ArgumentId>> DesiredOrdering::pairs() const {
  std::set<std::pair<ArgumentId, ArgumentId>> out;
  for (std::size_t i = 0; i < tiers_.size(); ++i)
    for (std::size_t j = i; j < tiers_.size(); ++j)
      for (const auto& x : tiers_[i])
        for (const auto& y : tiers_[j]) {
          out.emplace(x, y);
          if (i == j) out.emplace(y, x);
        }
  return out;
}

std::set<std::pair<ArgumentId, ArgumentId>> induced_ordering(const Qbag& g, const SemanticsSpec& spec,
                                                             const ArgumentSet& s) {
  const auto sigma = final_strengths(g, spec);
  std::set<std::pair<ArgumentId, ArgumentId>> out;
  for (const auto& x : s)
    for (const auto& y : s)
      if (sigma.at(x) <= sigma.at(y)) out.emplace(x, y);
  return out;
}

bool satisfies(const StrengthAssignment& sigma, const DesiredOrdering& ordering, SatisfactionMode mode,
               double tolerance) {
  const auto& tiers = ordering.tiers();
  std::vector<std::vector<double>> values(tiers.size());
  for (std::size_t t = 0; t < tiers.size(); ++t)
    for (const auto& x : tiers[t]) values[t].push_back(sigma.at(x));

  auto leq = [&](double a, double b) { return a <= b + tolerance; };
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    for (std::size_t j = i; j < tiers.size(); ++j) {
      for (double a : values[i]) {
        for (double b : values[j]) {
          // Desired: a <= b, and b <= a only within one tier.
          if (!leq(a, b)) return false;
          if (i == j && !leq(b, a)) return false;
          if (i != j && mode == SatisfactionMode::exact && leq(b, a)) return false;
        }
      }
    }
  }
  return true;
}

bool satisfies(const Qbag& g, const SemanticsSpec& spec, const DesiredOrdering& ordering, SatisfactionMode mode,
               double tolerance) {
  return satisfies(final_strengths(g, spec), ordering, mode, tolerance);
}

ArgumentSet StrengthChange::ddom() const {
  ArgumentSet out;
  for (const auto& [k, v] : entries) out.insert(k);
  return out;
}

void validate_change(const Qbag& g, const StrengthChange& delta, StrengthDomain domain) {
  for (const auto& [x, v] : delta.entries) {
    const double old = g.base_score(x);
    if (v == old) throw Error("strength change entry for '" + x + "' equals its current base score");
    if (!domain.contains(v)) {
      std::ostringstream os;
      os << "strength change entry " << v << " for '" << x << "' lies outside the domain";
      throw Error(os.str());
    }
  }
}

Qbag apply_change(const Qbag& g, const StrengthChange& delta, StrengthDomain domain) {
  validate_change(g, delta, domain);
  Eigen::VectorXd scores = g.base_scores();
  for (const auto& [x, v] : delta.entries) scores[g.index(x)] = v;
  return g.with_base_scores(std::move(scores));
}

double amount_of_change(const Qbag& g, const StrengthChange& delta) {
  double total = 0.0;
  for (const auto& [x, v] : delta.entries) total += std::abs(v - g.base_score(x));
  return total;
}

StrengthChange change_between(const Qbag& g, const Eigen::VectorXd& scores, const ArgumentSet& allowed) {
  StrengthChange out;
  for (const auto& x : allowed) {
    const Index i = g.index(x);
    if (scores[i] != g.base_score(i)) out.entries.emplace(x, scores[i]);
  }
  return out;
}

void SxQuery::validate() const {
  for (const auto& x : mutable_set)
    if (!graph.contains(x)) throw Error("mutable argument '" + x + "' is not in the graph");
  for (const auto& x : ordering.topics())
    if (!graph.contains(x)) throw Error("topic argument '" + x + "' is not in the graph");
  check_domain(graph, semantics);
}

bool is_sx(const SxQuery& q, const StrengthChange& delta, SatisfactionMode mode, double tolerance) {
  const Qbag changed = apply_change(q.graph, delta, q.semantics.domain);
  for (const auto& [x, v] : delta.entries)
    if (!q.mutable_set.contains(x)) return false;
  return satisfies(changed, q.semantics, q.ordering, mode, tolerance);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace qbag
