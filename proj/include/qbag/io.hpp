#ifndef QBAG_IO_HPP
#define QBAG_IO_HPP

#include "qbag/generators.hpp"
#include "qbag/metrics.hpp"
#include "qbag/oracle.hpp"
#include "qbag/reductions.hpp"
#include "qbag/search.hpp"

#include "json.hpp"

#include <string>

// JSON readers reject unknown keys and wrong types with qbag::Error, so a
// typo in a config file never silently falls back to a default.
namespace qbag::io {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);
void write_text_file(const std::string& path, const std::string& text);

/// {"arguments":[{"id":"a","base_score":1}],"attacks":[["a","b"]],"supports":[["d","a"]]}
Qbag graph_from_json(const Json& j);
Json graph_to_json(const Qbag& g);

/// {"tiers":[["d","e"],["a"]]}, weakest tier first.
DesiredOrdering ordering_from_json(const Json& j);
Json ordering_to_json(const DesiredOrdering& o);

/// Strongest-first command-line notation: "c>b", "a=b>c".
DesiredOrdering parse_ordering_notation(const std::string& text);
std::string format_ordering_notation(const DesiredOrdering& o);

/// Comma-separated argument ids, e.g. "a,e".
ArgumentSet parse_id_list(const std::string& text);

/// {"changes":{"a":2.0,"e":3.0}}
StrengthChange change_from_json(const Json& j);
Json change_to_json(const StrengthChange& d);

/// A token ("dfquad", "eb", "qe", "naive") or
/// {"aggregation":"sum","influence":{"kind":"p_max","p":2,"k":1},"domain":"unit"}.
SemanticsSpec semantics_from_json(const Json& j);
Json semantics_to_json(const SemanticsSpec& s);

SearchConfig search_config_from_json(const Json& j);
Json search_config_to_json(const SearchConfig& c);
Json outcome_to_json(const SearchOutcome& o);

/// NaN strengths become null.
Json strengths_to_json(const StrengthAssignment& s);

/// {"step":0.05,"lower":0,"upper":1,"max_mutable":4,"max_evaluations":5000000}
GridSpec grid_from_json(const Json& j);

/// {"arguments":[...],"attacks":[...],"supports":[...],"ordering":{"tiers":[...]}}
InverseProblem inverse_problem_from_json(const Json& j);

/// {"structures":[[8,32,16,3]],"modes":[{"family":"random","mode":"all"}],
///  "semantics":["dfquad"],"n_graphs":100,"seed":0,"search":{...},
///  "target":"permuted","bs_diff_over_all":false,"record_runtime":true}
ExperimentConfig experiment_config_from_json(const Json& j);

/// Layers, mutability presets and desired ordering of a generated instance.
Json manifest_to_json(const GeneratedInstance& inst, const GenSpec& spec);

}  // namespace qbag::io

#endif  // QBAG_IO_HPP
