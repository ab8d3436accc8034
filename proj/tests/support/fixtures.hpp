#ifndef QBAG_TESTS_FIXTURES_HPP
#define QBAG_TESTS_FIXTURES_HPP

#include "qbag/explanation.hpp"
#include "qbag/random.hpp"

#include <string>
#include <vector>

namespace qbag::testing {

// Five-argument example graph: d supports a, a attacks b and supports c,
// d attacks e, e supports c.
inline Qbag example_graph(double a = 1, double e = 2) {
  return Qbag({{"a", a}, {"b", 8}, {"c", 1}, {"d", 1}, {"e", e}}, {{"a", "b"}, {"d", "e"}},
              {{"a", "c"}, {"e", "c"}, {"d", "a"}});
}

inline SxQuery example_query() {
  return SxQuery{example_graph(), SemanticsSpec::naive(), {"a", "e"}, DesiredOrdering({{"b"}, {"c"}})};
}

inline std::string node_id(int i) { return "n" + std::to_string(100 + i).substr(1); }

// Random DAG: arguments n00..n(n-1) in a shuffled topological order, each
// forward pair connected with probability p by an attack or a support.
inline Qbag random_acyclic(Rng& rng, int n, double p, double lo = 0.0, double hi = 1.0) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);
  std::vector<Qbag::Argument> args;
  for (int i = 0; i < n; ++i) args.push_back({node_id(i), rng.uniform(lo, hi)});
  std::vector<Edge> att, sup;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p)
        (rng.coin() ? att : sup).emplace_back(node_id(perm[static_cast<std::size_t>(i)]),
                                              node_id(perm[static_cast<std::size_t>(j)]));
  return Qbag(std::move(args), std::move(att), std::move(sup));
}

}  // namespace qbag::testing

#endif  // QBAG_TESTS_FIXTURES_HPP
