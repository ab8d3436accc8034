#ifndef QBAG_EXPLANATION_HPP
#define QBAG_EXPLANATION_HPP

#include "qbag/graph.hpp"
#include "qbag/semantics.hpp"

#include <map>
#include <set>
#include <vector>

namespace qbag {

/// Desired final-strength ordering over a topic set, as tiers listed weakest
/// first. Arguments in one tier should end up equally strong; every argument
/// of a later tier strictly stronger than every argument of an earlier one.
class DesiredOrdering {
 public:
  DesiredOrdering() = default;
  /// Throws Error on empty tiers or an argument listed twice.
  explicit DesiredOrdering(std::vector<std::vector<ArgumentId>> tiers_weakest_first);

  /// Strict total order, strongest argument first.
  static DesiredOrdering strict_descending(const std::vector<ArgumentId>& strongest_first);

  const std::vector<std::vector<ArgumentId>>& tiers() const { return tiers_; }
  ArgumentSet topics() const;
  std::size_t topic_count() const;
  /// 0 for the weakest tier.
  std::size_t tier_of(const ArgumentId& x) const;
  bool strict() const;

  /// The induced preorder as the set of pairs (x, y) with x no stronger than y.
  std::set<std::pair<ArgumentId, ArgumentId>> pairs() const;

  friend bool operator==(const DesiredOrdering&, const DesiredOrdering&) = default;

 private:
  std::vector<std::vector<ArgumentId>> tiers_;
};

enum class SatisfactionMode {
  /// The induced final-strength preorder on the topics equals the desired one.
  exact,
  /// Every desired pair x <= y holds, so ties across tiers are tolerated.
  weak,
};

/// Preorder induced by final strengths on `s`: pairs (x, y) with sigma(x) <= sigma(y).
std::set<std::pair<ArgumentId, ArgumentId>> induced_ordering(const Qbag& g, const SemanticsSpec& spec,
                                                             const ArgumentSet& s);

/// `tolerance` widens every comparison: x <= y means sigma(x) <= sigma(y) + tolerance.
bool satisfies(const Qbag& g, const SemanticsSpec& spec, const DesiredOrdering& ordering,
               SatisfactionMode mode = SatisfactionMode::exact, double tolerance = 0.0);

/// Strength-based satisfaction check against already computed strengths.
bool satisfies(const StrengthAssignment& sigma, const DesiredOrdering& ordering, SatisfactionMode mode,
               double tolerance = 0.0);

/// Partial reassignment of base scores.
struct StrengthChange {
  std::map<ArgumentId, double> entries;

  ArgumentSet ddom() const;
  bool empty() const { return entries.empty(); }
  friend bool operator==(const StrengthChange&, const StrengthChange&) = default;
};

/// Throws Error when an entry names an unknown argument, repeats the current
/// base score, or leaves `domain`.
void validate_change(const Qbag& g, const StrengthChange& delta, StrengthDomain domain = StrengthDomain::reals());

Qbag apply_change(const Qbag& g, const StrengthChange& delta, StrengthDomain domain = StrengthDomain::reals());

/// l1 distance between new and old base scores over ddom(delta).
double amount_of_change(const Qbag& g, const StrengthChange& delta);

/// Entries of `scores` that differ from the base scores of `g`, restricted to
/// `allowed`.
StrengthChange change_between(const Qbag& g, const Eigen::VectorXd& scores, const ArgumentSet& allowed);

struct SxQuery {
  Qbag graph;
  SemanticsSpec semantics;
  ArgumentSet mutable_set;
  DesiredOrdering ordering;

  /// Throws Error if the topics or mutable arguments are not in the graph, or
  /// a base score lies outside the semantics' domain.
  void validate() const;
};

bool is_sx(const SxQuery& q, const StrengthChange& delta, SatisfactionMode mode = SatisfactionMode::exact,
           double tolerance = 0.0);

enum class Verdict { yes, no, unknown };
const char* to_string(Verdict v);

}  // namespace qbag

#endif  // QBAG_EXPLANATION_HPP
