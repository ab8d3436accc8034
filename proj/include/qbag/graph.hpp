#ifndef QBAG_GRAPH_HPP
#define QBAG_GRAPH_HPP

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qbag {

/// Raised for every contract violation in the library: malformed graphs,
/// unknown argument ids, domain violations, unsatisfiable preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ArgumentId = std::string;
using Index = std::int32_t;
using Edge = std::pair<ArgumentId, ArgumentId>;
using ArgumentSet = std::set<ArgumentId>;

/// Range of admissible base scores and final strengths.
struct StrengthDomain {
  enum class Kind { unit_interval, all_reals };

  Kind kind = Kind::unit_interval;

  static constexpr StrengthDomain unit() { return {Kind::unit_interval}; }
  static constexpr StrengthDomain reals() { return {Kind::all_reals}; }

  bool bounded() const { return kind == Kind::unit_interval; }
  double lower() const;
  double upper() const;
  bool contains(double v) const;
  /// Projects v onto the domain (identity for the reals).
  double clamp(double v) const;

  friend bool operator==(const StrengthDomain&, const StrengthDomain&) = default;
};

/// A quantitative bipolar argumentation graph.
///
/// Arguments are stored sorted by id; every index-based accessor refers to
/// that order. The structure is shared between copies, so replacing base
/// scores (the only thing explanations ever change) copies a single vector.
class Qbag {
 public:
  struct Argument {
    ArgumentId id;
    double base_score = 0.0;
  };

  Qbag();
  /// Throws Error on duplicate or empty ids, dangling edge endpoints, or a
  /// pair present in both relations. Repeated pairs within one relation are
  /// collapsed.
  Qbag(std::vector<Argument> arguments, std::vector<Edge> attacks, std::vector<Edge> supports);

  std::size_t size() const { return base_.size(); }
  bool empty() const { return size() == 0; }

  const std::vector<ArgumentId>& ids() const { return s_->ids; }
  const ArgumentId& id(Index i) const { return s_->ids[static_cast<std::size_t>(i)]; }
  bool contains(const ArgumentId& id) const { return find(id).has_value(); }
  std::optional<Index> find(const ArgumentId& id) const;
  /// Throws Error for unknown ids.
  Index index(const ArgumentId& id) const;

  const Eigen::VectorXd& base_scores() const { return base_; }
  double base_score(const ArgumentId& id) const { return base_[index(id)]; }
  double base_score(Index i) const { return base_[i]; }

  std::span<const Index> attackers_of(Index i) const { return slice(s_->att_off, s_->att, i); }
  std::span<const Index> supporters_of(Index i) const { return slice(s_->sup_off, s_->sup, i); }
  std::span<const Index> children_of(Index i) const { return slice(s_->out_off, s_->out, i); }

  /// Edge lists in (source, target) index order.
  std::vector<Edge> attacks() const;
  std::vector<Edge> supports() const;
  std::size_t edge_count() const { return s_->att.size() + s_->sup.size(); }

  /// Same structure, new base scores (one per argument, in index order).
  Qbag with_base_scores(Eigen::VectorXd scores) const;

  friend bool operator==(const Qbag& a, const Qbag& b);

 private:
  struct Structure {
    std::vector<ArgumentId> ids;
    // Incoming attackers / supporters and outgoing children, CSR layout.
    std::vector<Index> att_off, att, sup_off, sup, out_off, out;
  };

  static std::span<const Index> slice(const std::vector<Index>& off, const std::vector<Index>& v, Index i) {
    auto b = static_cast<std::size_t>(off[static_cast<std::size_t>(i)]);
    auto e = static_cast<std::size_t>(off[static_cast<std::size_t>(i) + 1]);
    return {v.data() + b, e - b};
  }

  std::shared_ptr<const Structure> s_;
  Eigen::VectorXd base_;
};

ArgumentSet attackers(const Qbag& g, const ArgumentId& x);
ArgumentSet supporters(const Qbag& g, const ArgumentId& x);

/// True iff a nonempty directed path over attacks and supports leads from
/// some source to some target.
bool can_reach(const Qbag& g, const ArgumentSet& sources, const ArgumentSet& targets);

/// Every argument reachable from `sources` by a nonempty path.
ArgumentSet descendants(const Qbag& g, const ArgumentSet& sources);

/// Induced subgraph on `keep`.
Qbag restrict(const Qbag& g, const ArgumentSet& keep);

/// Index-level Kahn order, smallest index first among ready nodes.
/// Empty optional when the graph has a cycle (including self-loops).
std::optional<std::vector<Index>> topological_indices(const Qbag& g);
std::optional<std::vector<ArgumentId>> topological_order(const Qbag& g);

}  // namespace qbag

#endif  // QBAG_GRAPH_HPP
