#ifndef QBAG_GENERATORS_HPP
#define QBAG_GENERATORS_HPP

#include "qbag/explanation.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qbag {

/// Arguments per layer, input layer first, e.g. {8, 32, 16, 3}.
using LayerStructure = std::vector<int>;

/// Parses "8,32,16,3".
LayerStructure parse_structure(const std::string& text);
std::string format_structure(const LayerStructure& s);

enum class Family { random, constrained };

/// How the desired ordering over the final layer is chosen.
enum class TargetMode {
  /// Uniformly random strict permutation, redrawn until the generated graph
  /// does not already satisfy it.
  permuted,
  /// Decreasing order of the final-layer strengths in the generated graph
  /// (already satisfied by construction).
  literal,
};

enum class MutableMode { first, intermediate, first_and_intermediate, all, constrained };

const char* to_string(Family f);
const char* to_string(TargetMode t);
const char* to_string(MutableMode m);
Family parse_family(const std::string& s);
TargetMode parse_target_mode(const std::string& s);
MutableMode parse_mutable_mode(const std::string& s);

struct GenSpec {
  LayerStructure structure;
  Family family = Family::random;
  std::uint64_t seed = 0;
  TargetMode target = TargetMode::permuted;
};

/// A layered, fully connected QBAG with its experiment metadata.
struct GeneratedInstance {
  Family family = Family::random;
  Qbag graph;
  std::vector<std::vector<ArgumentId>> layers;
  std::map<MutableMode, ArgumentSet> mutable_presets;
  DesiredOrdering ordering;
};

/// Argument id of position `index` in layer `layer` (both zero-based).
ArgumentId layer_argument_id(std::size_t layer, std::size_t index);

/// Every edge between consecutive layers, each an attack or a support with
/// probability 1/2; base scores uniform on [0, 1]. The semantics is only used
/// to pick the desired ordering over the final layer.
GeneratedInstance generate_random(const GenSpec& spec, const SemanticsSpec& semantics = SemanticsSpec::dfquad());

/// As generate_random, except: layer n-1 has base scores uniform on [0, 0.1]
/// and is immutable, every n-2 -> n-1 edge is an attack and every n-3 -> n-2
/// edge is a support. Needs at least four layers.
GeneratedInstance generate_constrained(const GenSpec& spec, const SemanticsSpec& semantics = SemanticsSpec::dfquad());

/// Dispatches on spec.family.
GeneratedInstance generate(const GenSpec& spec, const SemanticsSpec& semantics = SemanticsSpec::dfquad());

/// Throws Error for the constrained preset on a random-family instance.
const ArgumentSet& mutable_preset(const GeneratedInstance& instance, MutableMode mode);

}  // namespace qbag

#endif  // QBAG_GENERATORS_HPP
