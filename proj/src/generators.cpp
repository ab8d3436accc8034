#include "qbag/generators.hpp"

#include "qbag/random.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace qbag {

LayerStructure parse_structure(const std::string& text) {
  LayerStructure out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw Error("malformed layer structure '" + text + "'");
    }
    if (used != item.size() || v < 1) throw Error("malformed layer structure '" + text + "'");
    out.push_back(v);
  }
  if (out.size() < 2) throw Error("a layer structure needs at least two layers");
  return out;
}

std::string format_structure(const LayerStructure& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

const char* to_string(Family f) { return f == Family::random ? "random" : "constrained"; }
const char* to_string(TargetMode t) { return t == TargetMode::permuted ? "permuted" : "literal"; }

const char* to_string(MutableMode m) {
  switch (m) {
    case MutableMode::first: return "first";
    case MutableMode::intermediate: return "intermediate";
    case MutableMode::first_and_intermediate: return "first_and_intermediate";
    case MutableMode::all: return "all";
    case MutableMode::constrained: return "constrained";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "random") return Family::random;
  if (s == "constrained") return Family::constrained;
  throw Error("unknown family '" + s + "' (expected random or constrained)");
}

TargetMode parse_target_mode(const std::string& s) {
  if (s == "permuted") return TargetMode::permuted;
  if (s == "literal") return TargetMode::literal;
  throw Error("unknown target mode '" + s + "' (expected permuted or literal)");
}

MutableMode parse_mutable_mode(const std::string& s) {
  for (auto m : {MutableMode::first, MutableMode::intermediate, MutableMode::first_and_intermediate, MutableMode::all,
                 MutableMode::constrained})
    if (s == to_string(m)) return m;
  throw Error("unknown mutability mode '" + s + "'");
}

ArgumentId layer_argument_id(std::size_t layer, std::size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "L%zu_%03zu", layer + 1, index);
  return buf;
}

namespace {

void check_structure(const LayerStructure& s) {
  if (s.size() < 2) throw Error("a layer structure needs at least two layers");
  for (int n : s)
    if (n < 1) throw Error("every layer needs at least one argument");
}

DesiredOrdering pick_target(const Qbag& g, const SemanticsSpec& semantics, const std::vector<ArgumentId>& topics,
                            TargetMode mode, Rng& rng) {
  const auto sigma = final_strengths(g, semantics);
  if (mode == TargetMode::literal) {
    std::vector<ArgumentId> order = topics;
    std::stable_sort(order.begin(), order.end(),
                     [&](const ArgumentId& a, const ArgumentId& b) { return sigma.at(a) > sigma.at(b); });
    return DesiredOrdering::strict_descending(order);
  }
  std::vector<ArgumentId> order = topics;
  DesiredOrdering target;
  // A graph whose topic strengths all tie satisfies no strict target, so the
  // loop ends; the cap only guards against pathological inputs.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    rng.shuffle(order);
    target = DesiredOrdering::strict_descending(order);
    if (topics.size() < 2 || !satisfies(sigma, target, SatisfactionMode::weak)) break;
  }
  return target;
}

GeneratedInstance build(const GenSpec& spec, const SemanticsSpec& semantics, bool constrained) {
  check_structure(spec.structure);
  const std::size_t n = spec.structure.size();
  if (constrained && n < 4) throw Error("constrained instances need at least four layers");

  Rng rng(spec.seed);
  GeneratedInstance inst;
  inst.family = constrained ? Family::constrained : Family::random;

  std::vector<Qbag::Argument> args;
  for (std::size_t l = 0; l < n; ++l) {
    const bool small = constrained && l == n - 2;
    std::vector<ArgumentId> layer;
    for (int i = 0; i < spec.structure[l]; ++i) {
      layer.push_back(layer_argument_id(l, static_cast<std::size_t>(i)));
      args.push_back({layer.back(), small ? rng.uniform(0.0, 0.1) : rng.uniform()});
    }
    inst.layers.push_back(std::move(layer));
  }

  std::vector<Edge> attacks, supports;
  for (std::size_t l = 0; l + 1 < n; ++l) {
    for (const auto& from : inst.layers[l]) {
      for (const auto& to : inst.layers[l + 1]) {
        bool attack;
        if (constrained && l == n - 3) attack = true;
        else if (constrained && l == n - 4) attack = false;
        else attack = rng.coin();
        (attack ? attacks : supports).emplace_back(from, to);
      }
    }
  }
  inst.graph = Qbag(std::move(args), std::move(attacks), std::move(supports));

  auto collect = [&](std::size_t from, std::size_t to) {
    ArgumentSet out;
    for (std::size_t l = from; l < to; ++l) out.insert(inst.layers[l].begin(), inst.layers[l].end());
    return out;
  };
  inst.mutable_presets[MutableMode::first] = collect(0, 1);
  inst.mutable_presets[MutableMode::intermediate] = collect(1, n - 1);
  inst.mutable_presets[MutableMode::first_and_intermediate] = collect(0, n - 1);
  inst.mutable_presets[MutableMode::all] = collect(0, n);
  if (constrained) {
    ArgumentSet m = collect(0, n);
    for (const auto& x : inst.layers[n - 2]) m.erase(x);
    inst.mutable_presets[MutableMode::constrained] = std::move(m);
  }

  inst.ordering = pick_target(inst.graph, semantics, inst.layers.back(), spec.target, rng);
  return inst;
}

}  // namespace

GeneratedInstance generate_random(const GenSpec& spec, const SemanticsSpec& semantics) {
  if (spec.family != Family::random) throw Error("generate_random needs the random family");
  return build(spec, semantics, false);
}

GeneratedInstance generate_constrained(const GenSpec& spec, const SemanticsSpec& semantics) {
  if (spec.family != Family::constrained) throw Error("generate_constrained needs the constrained family");
  return build(spec, semantics, true);
}

GeneratedInstance generate(const GenSpec& spec, const SemanticsSpec& semantics) {
  return spec.family == Family::random ? generate_random(spec, semantics) : generate_constrained(spec, semantics);
}

const ArgumentSet& mutable_preset(const GeneratedInstance& instance, MutableMode mode) {
  auto it = instance.mutable_presets.find(mode);
  if (it == instance.mutable_presets.end())
    throw Error(std::string("mutability mode '") + to_string(mode) + "' is not available for the " +
                to_string(instance.family) + " family");
  return it->second;
}

}  // namespace qbag
