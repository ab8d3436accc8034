#include "qbag/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace qbag {

double StrengthDomain::lower() const {
  return bounded() ? 0.0 : -std::numeric_limits<double>::infinity();
}

double StrengthDomain::upper() const {
  return bounded() ? 1.0 : std::numeric_limits<double>::infinity();
}

bool StrengthDomain::contains(double v) const {
  if (std::isnan(v)) return false;
  return !bounded() || (v >= 0.0 && v <= 1.0);
}

double StrengthDomain::clamp(double v) const {
  return bounded() ? std::max(0.0, std::min(1.0, v)) : v;
}

namespace {

using IndexEdge = std::pair<Index, Index>;

void build_csr(std::size_t n, const std::vector<IndexEdge>& edges, bool by_target, std::vector<Index>& off,
               std::vector<Index>& adj) {
  off.assign(n + 1, 0);
  for (const auto& [s, t] : edges) ++off[static_cast<std::size_t>(by_target ? t : s) + 1];
  for (std::size_t i = 0; i < n; ++i) off[i + 1] += off[i];
  adj.assign(edges.size(), 0);
  std::vector<Index> fill(off.begin(), off.end() - 1);
  for (const auto& [s, t] : edges) {
    auto slot = static_cast<std::size_t>(fill[static_cast<std::size_t>(by_target ? t : s)]++);
    adj[slot] = by_target ? s : t;
  }
}

}  // namespace

Qbag::Qbag() : s_(std::make_shared<Structure>(Structure{{}, {0}, {}, {0}, {}, {0}, {}})) {}

Qbag::Qbag(std::vector<Argument> arguments, std::vector<Edge> attacks, std::vector<Edge> supports) {
  std::sort(arguments.begin(), arguments.end(), [](const Argument& a, const Argument& b) { return a.id < b.id; });
  auto s = std::make_shared<Structure>();
  s->ids.reserve(arguments.size());
  base_.resize(static_cast<Eigen::Index>(arguments.size()));
  for (std::size_t i = 0; i < arguments.size(); ++i) {
    if (arguments[i].id.empty()) throw Error("argument id must be non-empty");
    if (i > 0 && arguments[i].id == arguments[i - 1].id) throw Error("duplicate argument id '" + arguments[i].id + "'");
    s->ids.push_back(arguments[i].id);
    base_[static_cast<Eigen::Index>(i)] = arguments[i].base_score;
  }
  s_ = s;

  auto to_index = [&](const std::vector<Edge>& edges, const char* what) {
    std::vector<IndexEdge> out;
    out.reserve(edges.size());
    for (const auto& [from, to] : edges) {
      auto a = find(from);
      auto b = find(to);
      if (!a || !b) {
        throw Error(std::string(what) + " edge (" + from + ", " + to + ") references an unknown argument");
      }
      out.emplace_back(*a, *b);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto att = to_index(attacks, "attack");
  auto sup = to_index(supports, "support");

  std::vector<IndexEdge> both;
  std::set_intersection(att.begin(), att.end(), sup.begin(), sup.end(), std::back_inserter(both));
  if (!both.empty()) {
    throw Error("pair (" + s->ids[static_cast<std::size_t>(both[0].first)] + ", " +
                s->ids[static_cast<std::size_t>(both[0].second)] + ") is both an attack and a support");
  }

  const auto n = s->ids.size();
  build_csr(n, att, true, s->att_off, s->att);
  build_csr(n, sup, true, s->sup_off, s->sup);
  std::vector<IndexEdge> all(att);
  all.insert(all.end(), sup.begin(), sup.end());
  std::sort(all.begin(), all.end());
  build_csr(n, all, false, s->out_off, s->out);
}

std::optional<Index> Qbag::find(const ArgumentId& id) const {
  auto it = std::lower_bound(s_->ids.begin(), s_->ids.end(), id);
  if (it == s_->ids.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - s_->ids.begin());
}

Index Qbag::index(const ArgumentId& id) const {
  auto i = find(id);
  if (!i) throw Error("unknown argument '" + id + "'");
  return *i;
}

std::vector<Edge> Qbag::attacks() const {
  std::vector<Edge> out;
  for (Index t = 0; t < static_cast<Index>(size()); ++t)
    for (Index s : attackers_of(t)) out.emplace_back(id(s), id(t));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> Qbag::supports() const {
  std::vector<Edge> out;
  for (Index t = 0; t < static_cast<Index>(size()); ++t)
    for (Index s : supporters_of(t)) out.emplace_back(id(s), id(t));
  std::sort(out.begin(), out.end());
  return out;
}

Qbag Qbag::with_base_scores(Eigen::VectorXd scores) const {
  if (static_cast<std::size_t>(scores.size()) != size()) throw Error("base score vector has the wrong length");
  Qbag g(*this);
  g.base_ = std::move(scores);
  return g;
}

bool operator==(const Qbag& a, const Qbag& b) {
  if (a.ids() != b.ids() || a.base_ != b.base_) return false;
  if (a.s_ == b.s_) return true;
  return a.s_->att_off == b.s_->att_off && a.s_->att == b.s_->att && a.s_->sup_off == b.s_->sup_off &&
         a.s_->sup == b.s_->sup;
}

ArgumentSet attackers(const Qbag& g, const ArgumentId& x) {
  ArgumentSet out;
  for (Index i : g.attackers_of(g.index(x))) out.insert(g.id(i));
  return out;
}

ArgumentSet supporters(const Qbag& g, const ArgumentId& x) {
  ArgumentSet out;
  for (Index i : g.supporters_of(g.index(x))) out.insert(g.id(i));
  return out;
}

namespace {

std::vector<bool> reachable_from(const Qbag& g, const ArgumentSet& sources) {
  std::vector<bool> seen(g.size(), false);
  std::vector<Index> stack;
  for (const auto& s : sources) {
    for (Index c : g.children_of(g.index(s))) {
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = true;
        stack.push_back(c);
      }
    }
  }
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    for (Index c : g.children_of(v)) {
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = true;
        stack.push_back(c);
      }
    }
  }
  return seen;
}

}  // namespace

bool can_reach(const Qbag& g, const ArgumentSet& sources, const ArgumentSet& targets) {
  std::vector<Index> target_idx;
  for (const auto& t : targets) target_idx.push_back(g.index(t));
  if (sources.empty() || targets.empty()) {
    for (const auto& s : sources) g.index(s);
    return false;
  }
  auto seen = reachable_from(g, sources);
  return std::any_of(target_idx.begin(), target_idx.end(), [&](Index t) { return seen[static_cast<std::size_t>(t)]; });
}

ArgumentSet descendants(const Qbag& g, const ArgumentSet& sources) {
  auto seen = reachable_from(g, sources);
  ArgumentSet out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.insert(g.id(static_cast<Index>(i)));
  return out;
}

Qbag restrict(const Qbag& g, const ArgumentSet& keep) {
  std::vector<Qbag::Argument> args;
  for (const auto& id : keep) args.push_back({id, g.base_score(id)});
  auto filter = [&](std::vector<Edge> edges) {
    std::erase_if(edges, [&](const Edge& e) { return !keep.contains(e.first) || !keep.contains(e.second); });
    return edges;
  };
  return Qbag(std::move(args), filter(g.attacks()), filter(g.supports()));
}

std::optional<std::vector<Index>> topological_indices(const Qbag& g) {
  const auto n = g.size();
  std::vector<Index> indegree(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (Index c : g.children_of(static_cast<Index>(v))) ++indegree[static_cast<std::size_t>(c)];
  std::priority_queue<Index, std::vector<Index>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(static_cast<Index>(v));
  std::vector<Index> order;
  order.reserve(n);
  while (!ready.empty()) {
    Index v = ready.top();
    ready.pop();
    order.push_back(v);
    for (Index c : g.children_of(v))
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

std::optional<std::vector<ArgumentId>> topological_order(const Qbag& g) {
  auto idx = topological_indices(g);
  if (!idx) return std::nullopt;
  std::vector<ArgumentId> out;
  out.reserve(idx->size());
  for (Index i : *idx) out.push_back(g.id(i));
  return out;
}

}  // namespace qbag
