#include "qbag/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qbag {

SemanticsSpec SemanticsSpec::dfquad() {
  SemanticsSpec s;
  s.builtin = Builtin::dfquad;
  s.aggregation = Aggregation::product;
  s.influence = LinearInfluence{1.0};
  return s;
}

SemanticsSpec SemanticsSpec::euler_based() {
  SemanticsSpec s;
  s.builtin = Builtin::euler_based;
  s.aggregation = Aggregation::sum;
  s.influence = EulerInfluence{};
  return s;
}

SemanticsSpec SemanticsSpec::quadratic_energy() {
  SemanticsSpec s;
  s.builtin = Builtin::quadratic_energy;
  s.aggregation = Aggregation::sum;
  s.influence = PMaxInfluence{2, 1.0};
  return s;
}

SemanticsSpec SemanticsSpec::naive() {
  SemanticsSpec s;
  s.builtin = Builtin::naive;
  s.aggregation = Aggregation::sum;
  s.domain = StrengthDomain::reals();
  return s;
}

SemanticsSpec SemanticsSpec::custom(Aggregation a, Influence i, StrengthDomain d) {
  if (const auto* lin = std::get_if<LinearInfluence>(&i)) {
    if (!(lin->k > 0)) throw Error("linear influence requires k > 0");
    if (!d.bounded()) throw Error("linear influence requires the unit interval domain");
  }
  if (const auto* pm = std::get_if<PMaxInfluence>(&i)) {
    if (pm->p < 1) throw Error("p-max influence requires p >= 1");
    if (!(pm->k > 0)) throw Error("p-max influence requires k > 0");
  }
  SemanticsSpec s;
  s.builtin = Builtin::custom;
  s.aggregation = a;
  s.influence = i;
  s.domain = d;
  return s;
}

SemanticsSpec SemanticsSpec::from_token(const std::string& token) {
  if (token == "dfquad") return dfquad();
  if (token == "eb") return euler_based();
  if (token == "qe") return quadratic_energy();
  if (token == "naive") return naive();
  throw Error("unknown semantics '" + token + "' (expected dfquad, eb, qe or naive)");
}

std::string SemanticsSpec::name() const {
  switch (builtin) {
    case Builtin::dfquad: return "dfquad";
    case Builtin::euler_based: return "eb";
    case Builtin::quadratic_energy: return "qe";
    case Builtin::naive: return "naive";
    case Builtin::custom: break;
  }
  std::ostringstream os;
  os << (aggregation == Aggregation::sum ? "sum" : "product") << '+';
  std::visit(
      [&](const auto& inf) {
        using T = std::decay_t<decltype(inf)>;
        if constexpr (std::is_same_v<T, LinearInfluence>) os << "linear(" << inf.k << ')';
        else if constexpr (std::is_same_v<T, EulerInfluence>) os << "euler";
        else os << inf.p << "-max(" << inf.k << ')';
      },
      influence);
  return os.str();
}

double aggregate(Aggregation kind, std::span<const double> attacker_strengths,
                 std::span<const double> supporter_strengths) {
  if (kind == Aggregation::sum) {
    double s = 0.0;
    for (double v : supporter_strengths) s += v;
    for (double v : attacker_strengths) s -= v;
    return s;
  }
  double att = 1.0, sup = 1.0;
  for (double v : attacker_strengths) att *= 1.0 - v;
  for (double v : supporter_strengths) sup *= 1.0 - v;
  return att - sup;
}

namespace {

inline double pmax_h(double x, int p) {
  if (x <= 0.0) return 0.0;
  double xp = p == 2 ? x * x : std::pow(x, p);
  return xp / (1.0 + xp);
}

struct InfluenceEval {
  double w;
  double s;
  double operator()(const LinearInfluence& l) const {
    return w - w / l.k * std::max(0.0, -s) + (1.0 - w) / l.k * std::max(0.0, s);
  }
  double operator()(const EulerInfluence&) const {
    // Algebraically w at s = 0; return it exactly so stability holds bitwise.
    if (s == 0.0) return w;
    return 1.0 - (1.0 - w * w) / (1.0 + w * std::exp(s));
  }
  double operator()(const PMaxInfluence& p) const {
    return w - w * pmax_h(-s / p.k, p.p) + (1.0 - w) * pmax_h(s / p.k, p.p);
  }
};

}  // namespace

double influence(const Influence& kind, double w, double s) { return std::visit(InfluenceEval{w, s}, kind); }

Evaluator::Evaluator(const Qbag& g, const SemanticsSpec& spec) : graph_(g), spec_(spec) {
  auto order = topological_indices(g);
  acyclic_ = order.has_value();
  if (acyclic_) {
    order_ = std::move(*order);
  } else if (spec.is_naive()) {
    throw Error("the naive semantics is only defined on acyclic graphs");
  }
}

double Evaluator::update(Index i, const Eigen::VectorXd& base, const Eigen::VectorXd& current) const {
  double agg;
  if (spec_.aggregation == Aggregation::sum) {
    agg = 0.0;
    for (Index j : graph_.supporters_of(i)) agg += current[j];
    for (Index j : graph_.attackers_of(i)) agg -= current[j];
  } else {
    double att = 1.0, sup = 1.0;
    for (Index j : graph_.attackers_of(i)) att *= 1.0 - current[j];
    for (Index j : graph_.supporters_of(i)) sup *= 1.0 - current[j];
    agg = att - sup;
  }
  if (spec_.is_naive()) return base[i] + agg;
  return std::visit(InfluenceEval{base[i], agg}, spec_.influence);
}

int Evaluator::evaluate(const Eigen::VectorXd& base, Eigen::VectorXd& out) const {
  out.resize(base.size());
  if (!acyclic_) return fixed_point(base, out);
  for (Index i : order_) out[i] = update(i, base, out);
  return 0;
}

Eigen::VectorXd Evaluator::evaluate(const Eigen::VectorXd& base) const {
  Eigen::VectorXd out;
  evaluate(base, out);
  return out;
}

int Evaluator::fixed_point(const Eigen::VectorXd& base, Eigen::VectorXd& out) const {
  const auto n = static_cast<Index>(base.size());
  Eigen::VectorXd current = base;
  Eigen::VectorXd next(base.size());
  Eigen::VectorXd change = Eigen::VectorXd::Constant(base.size(), std::numeric_limits<double>::infinity());
  for (int sweep = 0; sweep < spec_.convergence.max_sweeps; ++sweep) {
    for (Index i = 0; i < n; ++i) next[i] = update(i, base, current);
    change = (next - current).cwiseAbs();
    current.swap(next);
    if (!current.allFinite()) break;
    if (change.maxCoeff() < spec_.convergence.epsilon) {
      out = current;
      return 0;
    }
  }
  // Anything still moving is undefined, and so is everything it feeds.
  std::vector<Index> stack;
  std::vector<bool> bad(static_cast<std::size_t>(n), false);
  for (Index i = 0; i < n; ++i) {
    if (!(change[i] < spec_.convergence.epsilon) || !std::isfinite(current[i])) {
      bad[static_cast<std::size_t>(i)] = true;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    for (Index c : graph_.children_of(v)) {
      if (!bad[static_cast<std::size_t>(c)]) {
        bad[static_cast<std::size_t>(c)] = true;
        stack.push_back(c);
      }
    }
  }
  int undefined = 0;
  out = current;
  for (Index i = 0; i < n; ++i) {
    if (bad[static_cast<std::size_t>(i)]) {
      out[i] = std::numeric_limits<double>::quiet_NaN();
      ++undefined;
    }
  }
  return undefined;
}

bool StrengthAssignment::defined(const ArgumentId& id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) throw Error("unknown argument '" + id + "'");
  return !std::isnan(values[it - ids.begin()]);
}

double StrengthAssignment::at(const ArgumentId& id) const {
  if (!defined(id)) throw Error("final strength of '" + id + "' is undefined");
  return values[std::lower_bound(ids.begin(), ids.end(), id) - ids.begin()];
}

std::map<ArgumentId, double> StrengthAssignment::to_map() const {
  std::map<ArgumentId, double> out;
  for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], values[static_cast<Eigen::Index>(i)]);
  return out;
}

void check_domain(const Qbag& g, const SemanticsSpec& spec) {
  for (Index i = 0; i < static_cast<Index>(g.size()); ++i) {
    if (!spec.domain.contains(g.base_score(i))) {
      std::ostringstream os;
      os << "base score " << g.base_score(i) << " of '" << g.id(i) << "' lies outside the domain of " << spec.name();
      throw Error(os.str());
    }
  }
}

StrengthAssignment final_strengths(const Qbag& g, const SemanticsSpec& spec) {
  check_domain(g, spec);
  Evaluator ev(g, spec);
  return {g.ids(), ev.evaluate(g.base_scores())};
}

namespace {

std::string principle_name(Principle p) {
  switch (p) {
    case Principle::directionality: return "directionality";
    case Principle::strong_directionality: return "strong directionality";
    case Principle::stability: return "stability";
    case Principle::balance: return "balance";
    case Principle::weak_monotonicity: return "weak monotonicity";
  }
  return "?";
}

std::optional<PrincipleWitness> witness(Principle p, const std::string& what) {
  return PrincipleWitness{p, principle_name(p) + ": " + what};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool is_subset(std::span<const Index> a, std::span<const Index> b) {
  // CSR slices are sorted by source index.
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::optional<PrincipleWitness> check_principle(const Qbag& g, const SemanticsSpec& spec, Principle principle,
                                                double tol) {
  if (!topological_indices(g)) throw Error("principle checks require an acyclic graph");
  const auto sigma = final_strengths(g, spec);
  const auto n = static_cast<Index>(g.size());
  const auto& tau = g.base_scores();
  const auto& s = sigma.values;

  switch (principle) {
    case Principle::stability:
      for (Index x = 0; x < n; ++x) {
        if (g.attackers_of(x).empty() && g.supporters_of(x).empty() && std::abs(s[x] - tau[x]) > tol)
          return witness(principle, "parent-free '" + g.id(x) + "' has sigma " + fmt(s[x]) + " != tau " + fmt(tau[x]));
      }
      return std::nullopt;

    case Principle::balance:
      for (Index x = 0; x < n; ++x) {
        std::vector<double> att, sup;
        for (Index y : g.attackers_of(x)) att.push_back(s[y]);
        for (Index y : g.supporters_of(x)) sup.push_back(s[y]);
        if (att.size() != sup.size()) continue;
        std::sort(att.begin(), att.end());
        std::sort(sup.begin(), sup.end());
        bool equal = true;
        for (std::size_t k = 0; k < att.size(); ++k) equal = equal && std::abs(att[k] - sup[k]) <= tol;
        if (equal && std::abs(s[x] - tau[x]) > tol)
          return witness(principle, "'" + g.id(x) + "' has balanced parents but sigma " + fmt(s[x]) + " != tau " +
                                        fmt(tau[x]));
      }
      return std::nullopt;

    case Principle::directionality: {
      const auto atts = g.attacks();
      const auto sups = g.supports();
      auto check_removal = [&](const Edge& e, std::vector<Edge> a, std::vector<Edge> su) -> std::optional<PrincipleWitness> {
        std::erase(a, e);
        std::erase(su, e);
        std::vector<Qbag::Argument> args;
        for (Index i = 0; i < n; ++i) args.push_back({g.id(i), tau[i]});
        const Qbag reduced(std::move(args), std::move(a), std::move(su));
        const auto s2 = final_strengths(reduced, spec).values;
        const auto reach = descendants(g, {e.second});
        for (Index x = 0; x < n; ++x) {
          if (g.id(x) == e.second || reach.contains(g.id(x))) continue;
          if (std::abs(s[x] - s2[x]) > tol)
            return witness(principle, "removing (" + e.first + ", " + e.second + ") changes sigma('" + g.id(x) +
                                          "') from " + fmt(s[x]) + " to " + fmt(s2[x]));
        }
        return std::nullopt;
      };
      for (const auto& e : atts)
        if (auto w = check_removal(e, atts, sups)) return w;
      for (const auto& e : sups)
        if (auto w = check_removal(e, atts, sups)) return w;
      return std::nullopt;
    }

    case Principle::strong_directionality:
      for (Index x = 0; x < n; ++x) {
        ArgumentSet non_ancestors;
        for (Index y = 0; y < n; ++y)
          if (y != x && !can_reach(g, {g.id(y)}, {g.id(x)})) non_ancestors.insert(g.id(y));
        std::vector<ArgumentSet> removals{non_ancestors};
        for (const auto& y : non_ancestors) removals.push_back({y});
        for (const auto& removed : removals) {
          if (removed.empty()) continue;
          ArgumentSet keep(g.ids().begin(), g.ids().end());
          for (const auto& y : removed) keep.erase(y);
          const double sx = final_strengths(restrict(g, keep), spec).at(g.id(x));
          if (std::abs(sx - s[x]) > tol)
            return witness(principle, "removing " + std::to_string(removed.size()) +
                                          " non-ancestor(s) changes sigma('" + g.id(x) + "') from " + fmt(s[x]) +
                                          " to " + fmt(sx));
        }
      }
      return std::nullopt;

    case Principle::weak_monotonicity:
      for (Index x = 0; x < n; ++x) {
        for (Index y = 0; y < n; ++y) {
          if (x == y) continue;
          if (!is_subset(g.attackers_of(y), g.attackers_of(x)) || !is_subset(g.supporters_of(x), g.supporters_of(y)))
            continue;
          if (tau[x] <= tau[y] && s[x] > s[y] + tol)
            return witness(principle, "condition 1 fails for ('" + g.id(x) + "', '" + g.id(y) + "')");
          if (s[y] < s[x] - tol && !(tau[y] < tau[x]))
            return witness(principle, "condition 2 fails for ('" + g.id(x) + "', '" + g.id(y) + "')");
        }
      }
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace qbag
