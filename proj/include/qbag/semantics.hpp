#ifndef QBAG_SEMANTICS_HPP
#define QBAG_SEMANTICS_HPP

#include "qbag/graph.hpp"

#include <map>
#include <span>
#include <string>
#include <variant>

namespace qbag {

enum class Aggregation { sum, product };

struct LinearInfluence {
  double k = 1.0;
  friend bool operator==(const LinearInfluence&, const LinearInfluence&) = default;
};
struct EulerInfluence {
  friend bool operator==(const EulerInfluence&, const EulerInfluence&) = default;
};
struct PMaxInfluence {
  int p = 2;
  double k = 1.0;
  friend bool operator==(const PMaxInfluence&, const PMaxInfluence&) = default;
};
using Influence = std::variant<LinearInfluence, EulerInfluence, PMaxInfluence>;

/// Fixed-point settings for cyclic graphs (synchronous sweeps starting from
/// the base scores).
struct Convergence {
  double epsilon = 1e-9;
  int max_sweeps = 10000;
};

/// A gradual semantics: either a modular (aggregation, influence) pair or
/// the naive additive semantics (base score plus supporter strengths minus
/// attacker strengths, acyclic graphs only).
struct SemanticsSpec {
  enum class Builtin { dfquad, euler_based, quadratic_energy, naive, custom };

  Builtin builtin = Builtin::dfquad;
  Aggregation aggregation = Aggregation::product;
  Influence influence = LinearInfluence{1.0};
  StrengthDomain domain = StrengthDomain::unit();
  Convergence convergence{};

  static SemanticsSpec dfquad();
  static SemanticsSpec euler_based();
  static SemanticsSpec quadratic_energy();
  static SemanticsSpec naive();
  /// Throws Error when linear influence is paired with an unbounded domain
  /// or the parameters are out of range.
  static SemanticsSpec custom(Aggregation a, Influence i, StrengthDomain d = StrengthDomain::unit());
  /// Accepts `dfquad`, `eb`, `qe`, `naive`.
  static SemanticsSpec from_token(const std::string& token);

  bool is_naive() const { return builtin == Builtin::naive; }
  std::string name() const;
};

double aggregate(Aggregation kind, std::span<const double> attacker_strengths,
                 std::span<const double> supporter_strengths);

/// Influence function evaluated at initial strength w and aggregate s.
double influence(const Influence& kind, double w, double s);

/// Reusable evaluator bound to one graph structure and semantics.
///
/// Evaluates final strengths for arbitrary base score vectors on that
/// structure without reallocating, which is what the search loop needs.
/// Undefined strengths (non-convergent cycles) are reported as NaN.
class Evaluator {
 public:
  /// Throws Error when the naive semantics is used on a cyclic graph.
  Evaluator(const Qbag& g, const SemanticsSpec& spec);

  bool acyclic() const { return acyclic_; }
  const SemanticsSpec& spec() const { return spec_; }

  /// Writes strengths into `out`; returns the number of undefined entries.
  int evaluate(const Eigen::VectorXd& base, Eigen::VectorXd& out) const;
  Eigen::VectorXd evaluate(const Eigen::VectorXd& base) const;

 private:
  double update(Index i, const Eigen::VectorXd& base, const Eigen::VectorXd& current) const;
  int fixed_point(const Eigen::VectorXd& base, Eigen::VectorXd& out) const;

  Qbag graph_;
  SemanticsSpec spec_;
  bool acyclic_ = true;
  std::vector<Index> order_;
};

/// Final strength of every argument; NaN marks an undefined strength.
struct StrengthAssignment {
  std::vector<ArgumentId> ids;
  Eigen::VectorXd values;

  bool defined(const ArgumentId& id) const;
  bool all_defined() const { return !values.hasNaN(); }
  /// Throws Error for unknown ids or undefined strengths.
  double at(const ArgumentId& id) const;
  std::map<ArgumentId, double> to_map() const;
};

/// Throws Error when a base score lies outside the semantics' domain.
void check_domain(const Qbag& g, const SemanticsSpec& spec);

StrengthAssignment final_strengths(const Qbag& g, const SemanticsSpec& spec);

enum class Principle { directionality, strong_directionality, stability, balance, weak_monotonicity };

/// Counterexample found by check_principle.
struct PrincipleWitness {
  Principle principle;
  std::string description;
};

/// Exhaustively checks one principle on a concrete acyclic graph at absolute
/// tolerance `tol`. Returns nothing when the principle holds.
///
/// directionality: every single edge (y, z) whose target cannot reach x is
/// removed in turn and sigma(x) compared. strong_directionality: for every x,
/// both the full set of arguments that cannot reach x and each of them alone
/// are removed. weak_monotonicity: both conditions over every ordered pair.
std::optional<PrincipleWitness> check_principle(const Qbag& g, const SemanticsSpec& spec, Principle principle,
                                                double tol = 1e-12);

}  // namespace qbag

#endif  // QBAG_SEMANTICS_HPP
