#include "qbag/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qbag {

namespace {

constexpr double kNormTie = 1e-12;

struct Bounds {
  double lower;
  double upper;
};

Bounds grid_bounds(const GridSpec& grid, const StrengthDomain& domain) {
  if (!(grid.step > 0) || !std::isfinite(grid.step)) throw Error("grid step must be positive");
  if (!domain.bounded() && (!grid.lower || !grid.upper))
    throw Error("grid bounds are required on an unbounded strength domain");
  const double lo = grid.lower.value_or(domain.lower());
  const double hi = grid.upper.value_or(domain.upper());
  if (!(lo <= hi)) throw Error("grid lower bound exceeds its upper bound");
  if (!domain.contains(lo) || !domain.contains(hi)) throw Error("grid bounds leave the strength domain");
  return {lo, hi};
}

/// Visits every assignment of grid values to `mut` (odometer order, first
/// index slowest), writing it into `tau`. Stops after `budget` visits;
/// returns whether the enumeration completed.
bool enumerate(Eigen::VectorXd& tau, const std::vector<Index>& mut, const std::vector<std::vector<double>>& values,
               std::uint64_t budget, std::uint64_t& visited, const std::function<void()>& visit) {
  std::vector<std::size_t> digit(mut.size(), 0);
  for (std::size_t k = 0; k < mut.size(); ++k) tau[mut[k]] = values[k][0];
  visited = 0;
  while (true) {
    if (visited >= budget) return false;
    ++visited;
    visit();
    std::size_t k = mut.size();
    while (k > 0) {
      --k;
      if (++digit[k] < values[k].size()) {
        tau[mut[k]] = values[k][digit[k]];
        break;
      }
      digit[k] = 0;
      tau[mut[k]] = values[k][0];
      if (k == 0) return true;
    }
    if (mut.empty()) return true;
  }
}

bool better(double norm, const StrengthChange& cand, double best_norm, const StrengthChange& best) {
  if (norm < best_norm - kNormTie) return true;
  if (norm > best_norm + kNormTie) return false;
  if (cand.entries.size() != best.entries.size()) return cand.entries.size() < best.entries.size();
  return std::lexicographical_compare(cand.entries.begin(), cand.entries.end(), best.entries.begin(),
                                      best.entries.end());
}

}  // namespace

std::vector<double> grid_values(const GridSpec& grid, const StrengthDomain& domain, double base_score) {
  const Bounds b = grid_bounds(grid, domain);
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((b.upper - b.lower) / grid.step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(std::min(b.upper, b.lower + static_cast<double>(i) * grid.step));
  // Keep the upper bound even when the step does not divide the range.
  if (out.back() < b.upper - 1e-9 * grid.step) out.push_back(b.upper);
  out.push_back(base_score);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OracleResult brute_force_sx(const SxQuery& q, const GridSpec& grid, SatisfactionMode mode, double tolerance) {
  q.validate();
  if (static_cast<int>(q.mutable_set.size()) > grid.max_mutable)
    throw Error("oracle supports at most " + std::to_string(grid.max_mutable) + " mutable arguments, got " +
                std::to_string(q.mutable_set.size()));
  const Qbag& g = q.graph;
  const Evaluator eval(g, q.semantics);

  std::vector<Index> mut;
  std::vector<std::vector<double>> values;
  for (const auto& x : q.mutable_set) {
    mut.push_back(g.index(x));
    values.push_back(grid_values(grid, q.semantics.domain, g.base_score(mut.back())));
  }

  StrengthAssignment sigma{g.ids(), Eigen::VectorXd()};
  Eigen::VectorXd tau = g.base_scores();
  OracleResult out;
  StrengthChange best;
  auto visit = [&] {
    double norm = 0.0;
    for (Index i : mut) norm += std::abs(tau[i] - g.base_score(i));
    if (out.best && norm > out.best_norm + kNormTie) return;
    eval.evaluate(tau, sigma.values);
    for (const auto& x : q.ordering.topics())
      if (!sigma.defined(x)) return;
    if (!satisfies(sigma, q.ordering, mode, tolerance)) return;
    StrengthChange cand = change_between(g, tau, q.mutable_set);
    if (!out.best || better(norm, cand, out.best_norm, best)) {
      best = std::move(cand);
      out.best_norm = norm;
      out.best = best;
    }
  };
  out.exhaustive = enumerate(tau, mut, values, grid.max_evaluations, out.evaluations, visit);
  if (out.best) out.best_norm = amount_of_change(g, *out.best);
  return out;
}

Verdict certify_epsilon(const SxQuery& q, const StrengthChange& delta, double epsilon, const GridSpec& grid,
                        SatisfactionMode mode, double tolerance) {
  if (!(epsilon >= 0)) throw Error("epsilon must be non-negative");
  if (!is_sx(q, delta, mode, tolerance)) throw Error("the given strength change is not an SX of the query");
  const double bound = amount_of_change(q.graph, delta) - epsilon;
  if (bound <= 0) return Verdict::yes;

  const OracleResult r = brute_force_sx(q, grid, mode, tolerance);
  if (r.best && r.best_norm < bound) return Verdict::no;
  if (!r.exhaustive) return Verdict::unknown;

  // A witness below the bound must lie within the grid box for the
  // discretisation argument to apply to it.
  const Bounds b = grid_bounds(grid, q.semantics.domain);
  const StrengthDomain& d = q.semantics.domain;
  for (const auto& x : q.mutable_set) {
    const double t = q.graph.base_score(x);
    const double need_lo = d.bounded() ? std::max(d.lower(), t - bound) : t - bound;
    const double need_hi = d.bounded() ? std::min(d.upper(), t + bound) : t + bound;
    if (b.lower > need_lo || b.upper < need_hi) return Verdict::unknown;
  }
  const double slack = static_cast<double>(q.mutable_set.size()) * grid.step;
  return r.best_norm >= bound + slack ? Verdict::yes : Verdict::unknown;
}

Verdict is_epsilon_approximate(const SxQuery& q, const StrengthChange& delta, double epsilon, const GridSpec& grid,
                               SatisfactionMode mode, double tolerance) {
  return certify_epsilon(q, delta, epsilon, grid, mode, tolerance);
}

StrengthRange strength_range(const Qbag& g, const SemanticsSpec& spec, const ArgumentId& x,
                             const ArgumentSet& mutable_set, const GridSpec& grid) {
  if (static_cast<int>(mutable_set.size()) > grid.max_mutable)
    throw Error("oracle supports at most " + std::to_string(grid.max_mutable) + " mutable arguments");
  check_domain(g, spec);
  const Evaluator eval(g, spec);
  const Index target = g.index(x);
  std::vector<Index> mut;
  std::vector<std::vector<double>> values;
  for (const auto& m : mutable_set) {
    mut.push_back(g.index(m));
    values.push_back(grid_values(grid, spec.domain, g.base_score(mut.back())));
  }
  Eigen::VectorXd tau = g.base_scores();
  Eigen::VectorXd sigma;
  StrengthRange out;
  std::uint64_t visited = 0;
  out.exhaustive = enumerate(tau, mut, values, grid.max_evaluations, visited, [&] {
    eval.evaluate(tau, sigma);
    const double v = sigma[target];
    if (std::isnan(v)) return;
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
  });
  return out;
}

}  // namespace qbag
