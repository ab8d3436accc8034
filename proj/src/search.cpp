#include "qbag/search.hpp"

#include "qbag/random.hpp"

#include <cmath>

namespace qbag {

Eigen::VectorXd adam_step(AdamState& state, const Eigen::VectorXd& gradient, const AdamParams& params) {
  if (state.m.size() != gradient.size()) throw Error("Adam state and gradient dimensions differ");
  ++state.t;
  state.m = params.beta1 * state.m + (1.0 - params.beta1) * gradient;
  state.v = params.beta2 * state.v + (1.0 - params.beta2) * gradient.cwiseAbs2();
  const double c1 = 1.0 - std::pow(params.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(params.beta2, static_cast<double>(state.t));
  return -params.alpha * (state.m / c1).cwiseQuotient(((state.v / c2).cwiseSqrt().array() + params.eps).matrix());
}

void SearchConfig::validate() const {
  if (max_iterations < 1) throw Error("max_iterations must be at least 1");
  if (!(fd_epsilon > 0)) throw Error("fd_epsilon must be positive");
  if (!(adam.alpha > 0)) throw Error("adam alpha must be positive");
  if (!(adam.beta1 >= 0 && adam.beta1 < 1) || !(adam.beta2 >= 0 && adam.beta2 < 1))
    throw Error("adam betas must lie in [0, 1)");
  if (!(adam.eps > 0)) throw Error("adam eps must be positive");
  if (!(cost_tolerance >= 0)) throw Error("cost_tolerance must be non-negative");
  if (!(margin >= 0)) throw Error("margin must be non-negative");
  if (!(lr_decay > 0 && lr_decay <= 1)) throw Error("lr_decay must lie in (0, 1]");
  if (restarts < 0) throw Error("restarts must be non-negative");
  if (!(restart_jitter >= 0)) throw Error("restart_jitter must be non-negative");
}

OrderingCost::OrderingCost(const Qbag& g, const DesiredOrdering& ordering, double margin) : margin_(margin) {
  const auto& tiers = ordering.tiers();
  std::vector<std::vector<Index>> idx(tiers.size());
  for (std::size_t t = 0; t < tiers.size(); ++t)
    for (const auto& x : tiers[t]) idx[t].push_back(g.index(x));
  for (std::size_t t = 0; t < idx.size(); ++t) {
    for (std::size_t a = 0; a < idx[t].size(); ++a)
      for (std::size_t b = a + 1; b < idx[t].size(); ++b) terms_.push_back({idx[t][a], idx[t][b], true});
    for (std::size_t u = t + 1; u < idx.size(); ++u)
      for (Index weaker : idx[t])
        for (Index stronger : idx[u]) terms_.push_back({stronger, weaker, false});
  }
}

double OrderingCost::operator()(const Eigen::VectorXd& s) const {
  double cost = 0.0;
  for (const auto& t : terms_) {
    const double gap = s[t.weaker] - s[t.stronger];
    cost += t.same_tier ? std::abs(gap) : std::max(0.0, gap + margin_);
  }
  return cost;
}

double relu_cost(const std::map<ArgumentId, double>& strengths, const DesiredOrdering& ordering, double margin) {
  const auto& tiers = ordering.tiers();
  auto value = [&](const ArgumentId& x) {
    auto it = strengths.find(x);
    if (it == strengths.end() || std::isnan(it->second)) throw Error("no defined strength for topic '" + x + "'");
    return it->second;
  };
  double cost = 0.0;
  for (std::size_t t = 0; t < tiers.size(); ++t) {
    for (std::size_t a = 0; a < tiers[t].size(); ++a)
      for (std::size_t b = a + 1; b < tiers[t].size(); ++b) cost += std::abs(value(tiers[t][a]) - value(tiers[t][b]));
    for (std::size_t u = t + 1; u < tiers.size(); ++u)
      for (const auto& weaker : tiers[t])
        for (const auto& stronger : tiers[u]) cost += std::max(0.0, value(weaker) - value(stronger) + margin);
  }
  return cost;
}

namespace {

/// Cost landscape over the base scores of a fixed graph.
class Landscape {
 public:
  Landscape(const Qbag& g, const SemanticsSpec& spec, const DesiredOrdering& ordering, const ArgumentSet& mutable_set,
            double margin)
      : evaluator_(g, spec), cost_(g, ordering, margin), domain_(spec.domain) {
    for (const auto& x : mutable_set) mutable_.push_back(g.index(x));
  }

  const std::vector<Index>& mutable_indices() const { return mutable_; }
  const StrengthDomain& domain() const { return domain_; }

  double cost(const Eigen::VectorXd& tau) {
    evaluator_.evaluate(tau, sigma_);
    const double c = cost_(sigma_);
    if (std::isnan(c)) throw Error("final strengths of the topics are undefined");
    return c;
  }

  /// Fills `grad` (one entry per mutable argument); `tau` is restored.
  void gradient(Eigen::VectorXd& tau, double base_cost, double fd_epsilon, Eigen::VectorXd& grad) {
    grad.resize(static_cast<Eigen::Index>(mutable_.size()));
    for (std::size_t k = 0; k < mutable_.size(); ++k) {
      const Index i = mutable_[k];
      const double saved = tau[i];
      double h = fd_epsilon;
      if (domain_.bounded() && saved + h > domain_.upper()) h = -fd_epsilon;
      tau[i] = saved + h;
      const double perturbed = cost(tau);
      tau[i] = saved;
      grad[static_cast<Eigen::Index>(k)] = (perturbed - base_cost) / h;
    }
  }

 private:
  Evaluator evaluator_;
  OrderingCost cost_;
  StrengthDomain domain_;
  std::vector<Index> mutable_;
  Eigen::VectorXd sigma_;
};

struct Attempt {
  bool found = false;
  int iterations = 0;
  double cost = 0.0;
  Eigen::VectorXd tau;
};

Attempt descend(Landscape& land, Eigen::VectorXd tau, const SearchConfig& cfg, std::vector<double>* trajectory) {
  const auto& mut = land.mutable_indices();
  AdamState adam(static_cast<Eigen::Index>(mut.size()));
  AdamParams params = cfg.adam;
  Eigen::VectorXd grad;
  Attempt out;
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    const double c = land.cost(tau);
    if (trajectory) trajectory->push_back(c);
    out.iterations = k;
    if (c <= cfg.cost_tolerance) {
      out.found = true;
      out.cost = c;
      out.tau = std::move(tau);
      return out;
    }
    land.gradient(tau, c, cfg.fd_epsilon, grad);
    params.alpha = cfg.adam.alpha * std::pow(cfg.lr_decay, k - 1);
    const Eigen::VectorXd step = adam_step(adam, grad, params);
    for (std::size_t j = 0; j < mut.size(); ++j) {
      const Index i = mut[j];
      tau[i] = land.domain().clamp(tau[i] + step[static_cast<Eigen::Index>(j)]);
    }
  }
  out.cost = land.cost(tau);
  out.tau = std::move(tau);
  return out;
}

}  // namespace

std::map<ArgumentId, double> finite_diff_gradient(const Qbag& g, const SemanticsSpec& spec,
                                                  const DesiredOrdering& ordering, const ArgumentSet& mutable_set,
                                                  double fd_epsilon, double margin) {
  if (!(fd_epsilon > 0)) throw Error("fd_epsilon must be positive");
  check_domain(g, spec);
  Landscape land(g, spec, ordering, mutable_set, margin);
  Eigen::VectorXd tau = g.base_scores();
  Eigen::VectorXd grad;
  land.gradient(tau, land.cost(tau), fd_epsilon, grad);
  std::map<ArgumentId, double> out;
  for (std::size_t k = 0; k < land.mutable_indices().size(); ++k)
    out.emplace(g.id(land.mutable_indices()[k]), grad[static_cast<Eigen::Index>(k)]);
  return out;
}

SearchOutcome heuristic_search(const SxQuery& q, const SearchConfig& cfg) {
  cfg.validate();
  q.validate();
  const Qbag& g = q.graph;
  Landscape land(g, q.semantics, q.ordering, q.mutable_set, cfg.margin);
  const auto& mut = land.mutable_indices();

  SearchOutcome out;
  std::vector<double>* trajectory = cfg.record_trajectory ? &out.trajectory : nullptr;
  Attempt attempt;
  for (int r = 0; r <= cfg.restarts; ++r) {
    Eigen::VectorXd start = g.base_scores();
    if (r > 0) {
      Rng rng(cfg.rng_seed + static_cast<std::uint64_t>(r));
      for (Index i : mut) {
        start[i] = land.domain().bounded() ? rng.uniform(land.domain().lower(), land.domain().upper())
                                           : start[i] + rng.uniform(-cfg.restart_jitter, cfg.restart_jitter);
      }
    }
    attempt = descend(land, std::move(start), cfg, trajectory);
    out.iterations_used += attempt.iterations;
    out.restarts_used = r;
    if (attempt.found) break;
  }

  out.final_cost = attempt.cost;
  for (Index i : mut) out.final_scores.emplace(g.id(i), attempt.tau[i]);
  if (attempt.found) {
    // Re-check on a freshly built graph so the reported change stands on its own.
    StrengthChange sx = change_between(g, attempt.tau, q.mutable_set);
    const Qbag changed = apply_change(g, sx, q.semantics.domain);
    Landscape fresh(changed, q.semantics, q.ordering, {}, cfg.margin);
    const double c = fresh.cost(changed.base_scores());
    if (c <= cfg.cost_tolerance) {
      out.status = SearchOutcome::Status::found;
      out.sx = std::move(sx);
      out.final_cost = c;
    }
  }
  return out;
}

}  // namespace qbag
