#ifndef QBAG_ORACLE_HPP
#define QBAG_ORACLE_HPP

#include "qbag/explanation.hpp"

#include <cstdint>
#include <limits>
#include <optional>

namespace qbag {

/// Value grid for exhaustive enumeration. Each mutable argument ranges over
/// {lower, lower + step, ..., upper} together with its own base score, so
/// "leave it unchanged" is always a candidate.
struct GridSpec {
  double step = 0.05;
  /// Default to the semantics' domain bounds; required on unbounded domains.
  std::optional<double> lower;
  std::optional<double> upper;
  int max_mutable = 4;
  /// Cap on evaluated assignments; enumeration stops early beyond it.
  std::uint64_t max_evaluations = 5'000'000;
};

struct OracleResult {
  /// Smallest-norm satisfying assignment; ties go to fewer entries, then to
  /// the lexicographically smallest (id, value) sequence.
  std::optional<StrengthChange> best;
  double best_norm = std::numeric_limits<double>::infinity();
  /// False when the evaluation budget cut the enumeration short.
  bool exhaustive = true;
  std::uint64_t evaluations = 0;
};

/// Candidate values of one mutable argument, sorted ascending.
std::vector<double> grid_values(const GridSpec& grid, const StrengthDomain& domain, double base_score);

/// Enumerates every grid assignment to the mutable arguments. Throws Error
/// when |M| exceeds grid.max_mutable or the grid is malformed.
OracleResult brute_force_sx(const SxQuery& q, const GridSpec& grid, SatisfactionMode mode = SatisfactionMode::weak,
                            double tolerance = 0.0);

/// Decides whether `delta` is an epsilon-approximate SX:
///  - no:  the grid holds an SX with norm < ||delta|| - epsilon;
///  - yes: ||delta|| - epsilon <= 0, or the enumeration was exhaustive, the
///         grid covers every candidate within that norm, and the grid minimum
///         is at least ||delta|| - epsilon + |M| * step;
///  - unknown otherwise.
/// Throws Error when `delta` is not an SX of `q` in `mode`.
Verdict certify_epsilon(const SxQuery& q, const StrengthChange& delta, double epsilon, const GridSpec& grid,
                        SatisfactionMode mode = SatisfactionMode::exact, double tolerance = 0.0);

/// Same decision as certify_epsilon, under the name used by the explanation API.
Verdict is_epsilon_approximate(const SxQuery& q, const StrengthChange& delta, double epsilon, const GridSpec& grid,
                               SatisfactionMode mode = SatisfactionMode::exact, double tolerance = 0.0);

struct StrengthRange {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  bool exhaustive = true;
};

/// Range of the final strength of `x` over all grid assignments to `mutable_set`.
StrengthRange strength_range(const Qbag& g, const SemanticsSpec& spec, const ArgumentId& x,
                             const ArgumentSet& mutable_set, const GridSpec& grid);

}  // namespace qbag

#endif  // QBAG_ORACLE_HPP
