#ifndef QBAG_SEARCH_HPP
#define QBAG_SEARCH_HPP

#include "qbag/explanation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace qbag {

struct AdamParams {
  double alpha = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long t = 0;

  explicit AdamState(Eigen::Index dim = 0) : m(Eigen::VectorXd::Zero(dim)), v(Eigen::VectorXd::Zero(dim)) {}
};

/// One Adam step. Advances the moment estimates and returns the parameter
/// displacement -alpha * m_hat / (sqrt(v_hat) + eps).
Eigen::VectorXd adam_step(AdamState& state, const Eigen::VectorXd& gradient, const AdamParams& params);

struct SearchConfig {
  int max_iterations = 100;
  double fd_epsilon = 1e-4;
  AdamParams adam{};
  /// Success threshold on the ordering cost.
  double cost_tolerance = 0.0;
  /// Hinge margin added to every cross-tier term; > 0 asks for strict gaps.
  double margin = 0.0;
  /// Step size at iteration k is alpha * lr_decay^(k-1).
  double lr_decay = 1.0;
  /// Extra attempts from jittered starting points after a failed run.
  int restarts = 0;
  /// Half-width of the start jitter on unbounded domains; bounded domains
  /// restart from a uniform draw over the domain.
  double restart_jitter = 1.0;
  std::uint64_t rng_seed = 0;
  bool record_trajectory = false;

  /// Throws Error on out-of-range values.
  void validate() const;
};

struct SearchOutcome {
  enum class Status { found, not_found };

  Status status = Status::not_found;
  /// Present iff found.
  std::optional<StrengthChange> sx;
  /// Cost checks performed, summed over restarts.
  int iterations_used = 0;
  int restarts_used = 0;
  /// Cost at the returned (found) or last (not found) base scores.
  double final_cost = 0.0;
  /// Base scores of the mutable arguments at return time.
  std::map<ArgumentId, double> final_scores;
  std::vector<double> trajectory;

  bool found() const { return status == Status::found; }
};

/// Pairwise hinge cost of an ordering, precompiled to argument indices.
///
/// Every pair (x stronger tier, y weaker tier) contributes
/// max(0, sigma(y) - sigma(x) + margin); every pair sharing a tier
/// contributes |sigma(x) - sigma(y)|. Zero exactly at weak satisfaction
/// when the margin is zero.
class OrderingCost {
 public:
  OrderingCost(const Qbag& g, const DesiredOrdering& ordering, double margin = 0.0);
  double operator()(const Eigen::VectorXd& strengths) const;

 private:
  struct Term {
    Index stronger;
    Index weaker;
    bool same_tier;
  };
  std::vector<Term> terms_;
  double margin_;
};

double relu_cost(const std::map<ArgumentId, double>& strengths, const DesiredOrdering& ordering, double margin = 0.0);

/// Difference quotient of the cost per mutable argument. Uses a backward
/// step where a forward one would leave the domain.
std::map<ArgumentId, double> finite_diff_gradient(const Qbag& g, const SemanticsSpec& spec,
                                                  const DesiredOrdering& ordering, const ArgumentSet& mutable_set,
                                                  double fd_epsilon, double margin = 0.0);

/// Gradient-free local search for a strength change explanation: repeatedly
/// evaluates the cost, estimates its gradient by finite differences over the
/// mutable arguments and takes an Adam step, clamped to the domain.
SearchOutcome heuristic_search(const SxQuery& q, const SearchConfig& cfg = {});

}  // namespace qbag

#endif  // QBAG_SEARCH_HPP
