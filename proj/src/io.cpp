#include "qbag/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace qbag::io {

namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw Error(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw Error("unknown key '" + key + "' in " + what);
  }
}

const Json& require(const Json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(what + " is missing '" + key + "'");
  return *it;
}

double as_number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw Error(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(what + " must be finite");
  return v;
}

long long as_integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw Error(what + " must be an integer");
  return j.get<long long>();
}

std::string as_string(const Json& j, const std::string& what) {
  if (!j.is_string()) throw Error(what + " must be a string");
  return j.get<std::string>();
}

bool as_bool(const Json& j, const std::string& what) {
  if (!j.is_boolean()) throw Error(what + " must be a boolean");
  return j.get<bool>();
}

const Json& as_array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw Error(what + " must be an array");
  return j;
}

std::vector<Edge> edges_from_json(const Json& j, const std::string& what) {
  std::vector<Edge> out;
  for (const auto& e : as_array(j, what)) {
    if (!e.is_array() || e.size() != 2) throw Error("each entry of " + what + " must be a [from, to] pair");
    out.emplace_back(as_string(e[0], what + " endpoint"), as_string(e[1], what + " endpoint"));
  }
  return out;
}

Json edges_to_json(const std::vector<Edge>& edges) {
  Json out = Json::array();
  for (const auto& [a, b] : edges) out.push_back(Json::array({a, b}));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

StrengthDomain domain_from_json(const Json& j) {
  const std::string d = as_string(j, "domain");
  if (d == "unit") return StrengthDomain::unit();
  if (d == "reals") return StrengthDomain::reals();
  throw Error("unknown domain '" + d + "' (expected unit or reals)");
}

Influence influence_from_json(const Json& j) {
  check_keys(j, {"kind", "k", "p"}, "influence");
  const std::string kind = as_string(require(j, "kind", "influence"), "influence kind");
  const double k = j.contains("k") ? as_number(j["k"], "influence k") : 1.0;
  if (kind == "linear") {
    if (j.contains("p")) throw Error("linear influence takes no 'p'");
    return LinearInfluence{k};
  }
  if (kind == "euler") {
    if (j.contains("p") || j.contains("k")) throw Error("euler influence takes no parameters");
    return EulerInfluence{};
  }
  if (kind == "p_max") {
    const long long p = j.contains("p") ? as_integer(j["p"], "influence p") : 2;
    return PMaxInfluence{static_cast<int>(p), k};
  }
  throw Error("unknown influence kind '" + kind + "' (expected linear, euler or p_max)");
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json(buf.str());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

Qbag graph_from_json(const Json& j) {
  check_keys(j, {"arguments", "attacks", "supports"}, "graph");
  std::vector<Qbag::Argument> args;
  for (const auto& a : as_array(require(j, "arguments", "graph"), "arguments")) {
    check_keys(a, {"id", "base_score"}, "argument");
    args.push_back({as_string(require(a, "id", "argument"), "argument id"),
                    as_number(require(a, "base_score", "argument"), "base_score")});
  }
  auto attacks = j.contains("attacks") ? edges_from_json(j["attacks"], "attacks") : std::vector<Edge>{};
  auto supports = j.contains("supports") ? edges_from_json(j["supports"], "supports") : std::vector<Edge>{};
  return Qbag(std::move(args), std::move(attacks), std::move(supports));
}

Json graph_to_json(const Qbag& g) {
  Json args = Json::array();
  for (Index i = 0; i < static_cast<Index>(g.size()); ++i)
    args.push_back(Json{{"id", g.id(i)}, {"base_score", g.base_score(i)}});
  return Json{{"arguments", args}, {"attacks", edges_to_json(g.attacks())}, {"supports", edges_to_json(g.supports())}};
}

DesiredOrdering ordering_from_json(const Json& j) {
  check_keys(j, {"tiers"}, "ordering");
  std::vector<std::vector<ArgumentId>> tiers;
  for (const auto& t : as_array(require(j, "tiers", "ordering"), "tiers")) {
    std::vector<ArgumentId> tier;
    for (const auto& x : as_array(t, "tier")) tier.push_back(as_string(x, "tier member"));
    tiers.push_back(std::move(tier));
  }
  return DesiredOrdering(std::move(tiers));
}

Json ordering_to_json(const DesiredOrdering& o) { return Json{{"tiers", o.tiers()}}; }

DesiredOrdering parse_ordering_notation(const std::string& text) {
  std::vector<std::vector<ArgumentId>> tiers;
  for (const auto& group : split(text, '>')) {
    std::vector<ArgumentId> tier;
    for (const auto& raw : split(group, '=')) {
      const std::string id = trim(raw);
      if (id.empty()) throw Error("malformed ordering '" + text + "' (expected e.g. c>b or a=b>c)");
      tier.push_back(id);
    }
    tiers.push_back(std::move(tier));
  }
  if (tiers.empty()) throw Error("empty ordering");
  std::reverse(tiers.begin(), tiers.end());
  return DesiredOrdering(std::move(tiers));
}

std::string format_ordering_notation(const DesiredOrdering& o) {
  std::string out;
  const auto& tiers = o.tiers();
  for (auto it = tiers.rbegin(); it != tiers.rend(); ++it) {
    if (!out.empty()) out += '>';
    for (std::size_t i = 0; i < it->size(); ++i) out += (i ? "=" : "") + (*it)[i];
  }
  return out;
}

ArgumentSet parse_id_list(const std::string& text) {
  ArgumentSet out;
  if (trim(text).empty()) return out;
  for (const auto& raw : split(text, ',')) {
    const std::string id = trim(raw);
    if (id.empty()) throw Error("malformed argument list '" + text + "'");
    out.insert(id);
  }
  return out;
}

StrengthChange change_from_json(const Json& j) {
  check_keys(j, {"changes"}, "strength change");
  const Json& c = require(j, "changes", "strength change");
  if (!c.is_object()) throw Error("'changes' must be an object");
  StrengthChange d;
  for (const auto& [k, v] : c.items()) d.entries[k] = as_number(v, "change for '" + k + "'");
  return d;
}

Json change_to_json(const StrengthChange& d) {
  Json c = Json::object();
  for (const auto& [k, v] : d.entries) c[k] = v;
  return Json{{"changes", c}};
}

SemanticsSpec semantics_from_json(const Json& j) {
  if (j.is_string()) return SemanticsSpec::from_token(j.get<std::string>());
  check_keys(j, {"aggregation", "influence", "domain", "convergence"}, "semantics");
  const std::string agg = as_string(require(j, "aggregation", "semantics"), "aggregation");
  Aggregation a;
  if (agg == "sum") a = Aggregation::sum;
  else if (agg == "product") a = Aggregation::product;
  else throw Error("unknown aggregation '" + agg + "' (expected sum or product)");
  const StrengthDomain d = j.contains("domain") ? domain_from_json(j["domain"]) : StrengthDomain::unit();
  SemanticsSpec s = SemanticsSpec::custom(a, influence_from_json(require(j, "influence", "semantics")), d);
  if (j.contains("convergence")) {
    const Json& c = j["convergence"];
    check_keys(c, {"epsilon", "max_sweeps"}, "convergence");
    if (c.contains("epsilon")) s.convergence.epsilon = as_number(c["epsilon"], "convergence epsilon");
    if (c.contains("max_sweeps"))
      s.convergence.max_sweeps = static_cast<int>(as_integer(c["max_sweeps"], "convergence max_sweeps"));
    if (!(s.convergence.epsilon > 0) || s.convergence.max_sweeps < 1) throw Error("invalid convergence settings");
  }
  return s;
}

Json semantics_to_json(const SemanticsSpec& s) {
  if (s.builtin != SemanticsSpec::Builtin::custom) return s.name();
  Json inf = std::visit(
      [](const auto& i) -> Json {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, LinearInfluence>) return Json{{"kind", "linear"}, {"k", i.k}};
        else if constexpr (std::is_same_v<T, EulerInfluence>) return Json{{"kind", "euler"}};
        else return Json{{"kind", "p_max"}, {"p", i.p}, {"k", i.k}};
      },
      s.influence);
  return Json{{"aggregation", s.aggregation == Aggregation::sum ? "sum" : "product"},
              {"influence", inf},
              {"domain", s.domain.bounded() ? "unit" : "reals"}};
}

SearchConfig search_config_from_json(const Json& j) {
  check_keys(j,
             {"max_iterations", "fd_epsilon", "alpha", "beta1", "beta2", "adam_eps", "cost_tolerance", "margin",
              "lr_decay", "restarts", "restart_jitter", "rng_seed", "record_trajectory"},
             "search config");
  SearchConfig c;
  if (j.contains("max_iterations")) c.max_iterations = static_cast<int>(as_integer(j["max_iterations"], "max_iterations"));
  if (j.contains("fd_epsilon")) c.fd_epsilon = as_number(j["fd_epsilon"], "fd_epsilon");
  if (j.contains("alpha")) c.adam.alpha = as_number(j["alpha"], "alpha");
  if (j.contains("beta1")) c.adam.beta1 = as_number(j["beta1"], "beta1");
  if (j.contains("beta2")) c.adam.beta2 = as_number(j["beta2"], "beta2");
  if (j.contains("adam_eps")) c.adam.eps = as_number(j["adam_eps"], "adam_eps");
  if (j.contains("cost_tolerance")) c.cost_tolerance = as_number(j["cost_tolerance"], "cost_tolerance");
  if (j.contains("margin")) c.margin = as_number(j["margin"], "margin");
  if (j.contains("lr_decay")) c.lr_decay = as_number(j["lr_decay"], "lr_decay");
  if (j.contains("restarts")) c.restarts = static_cast<int>(as_integer(j["restarts"], "restarts"));
  if (j.contains("restart_jitter")) c.restart_jitter = as_number(j["restart_jitter"], "restart_jitter");
  if (j.contains("rng_seed")) {
    if (!j["rng_seed"].is_number_unsigned()) throw Error("rng_seed must be a non-negative integer");
    c.rng_seed = j["rng_seed"].get<std::uint64_t>();
  }
  if (j.contains("record_trajectory")) c.record_trajectory = as_bool(j["record_trajectory"], "record_trajectory");
  c.validate();
  return c;
}

Json search_config_to_json(const SearchConfig& c) {
  return Json{{"max_iterations", c.max_iterations}, {"fd_epsilon", c.fd_epsilon},
              {"alpha", c.adam.alpha},                {"beta1", c.adam.beta1},
              {"beta2", c.adam.beta2},                {"adam_eps", c.adam.eps},
              {"cost_tolerance", c.cost_tolerance},   {"margin", c.margin},
              {"lr_decay", c.lr_decay},               {"restarts", c.restarts},
              {"restart_jitter", c.restart_jitter},   {"rng_seed", c.rng_seed},
              {"record_trajectory", c.record_trajectory}};
}

Json outcome_to_json(const SearchOutcome& o) {
  Json scores = Json::object();
  for (const auto& [k, v] : o.final_scores) scores[k] = v;
  Json out{{"status", o.found() ? "found" : "not_found"},
           {"sx", o.sx ? change_to_json(*o.sx) : Json(nullptr)},
           {"iterations_used", o.iterations_used},
           {"restarts_used", o.restarts_used},
           {"final_cost", o.final_cost},
           {"final_scores", scores}};
  if (!o.trajectory.empty()) out["trajectory"] = o.trajectory;
  return out;
}

Json strengths_to_json(const StrengthAssignment& s) {
  Json out = Json::object();
  for (std::size_t i = 0; i < s.ids.size(); ++i) {
    const double v = s.values[static_cast<Eigen::Index>(i)];
    out[s.ids[i]] = std::isnan(v) ? Json(nullptr) : Json(v);
  }
  return out;
}

GridSpec grid_from_json(const Json& j) {
  check_keys(j, {"step", "lower", "upper", "max_mutable", "max_evaluations"}, "grid");
  GridSpec g;
  if (j.contains("step")) g.step = as_number(j["step"], "grid step");
  if (j.contains("lower")) g.lower = as_number(j["lower"], "grid lower");
  if (j.contains("upper")) g.upper = as_number(j["upper"], "grid upper");
  if (j.contains("max_mutable")) g.max_mutable = static_cast<int>(as_integer(j["max_mutable"], "max_mutable"));
  if (j.contains("max_evaluations")) {
    if (!j["max_evaluations"].is_number_unsigned()) throw Error("max_evaluations must be a non-negative integer");
    g.max_evaluations = j["max_evaluations"].get<std::uint64_t>();
  }
  if (!(g.step > 0)) throw Error("grid step must be positive");
  return g;
}

InverseProblem inverse_problem_from_json(const Json& j) {
  check_keys(j, {"arguments", "attacks", "supports", "ordering"}, "inverse problem");
  InverseProblem p;
  for (const auto& x : as_array(require(j, "arguments", "inverse problem"), "arguments"))
    p.arguments.push_back(as_string(x, "argument id"));
  if (j.contains("attacks")) p.attacks = edges_from_json(j["attacks"], "attacks");
  if (j.contains("supports")) p.supports = edges_from_json(j["supports"], "supports");
  p.ordering = ordering_from_json(require(j, "ordering", "inverse problem"));
  p.validate();
  return p;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  check_keys(j,
             {"structures", "modes", "semantics", "n_graphs", "seed", "search", "target", "bs_diff_over_all",
              "record_runtime"},
             "experiment config");
  ExperimentConfig c;
  for (const auto& s : as_array(require(j, "structures", "experiment config"), "structures")) {
    LayerStructure st;
    for (const auto& n : as_array(s, "structure")) st.push_back(static_cast<int>(as_integer(n, "layer size")));
    c.structures.push_back(std::move(st));
  }
  for (const auto& m : as_array(require(j, "modes", "experiment config"), "modes")) {
    check_keys(m, {"family", "mode"}, "mode entry");
    c.modes.emplace_back(parse_family(as_string(require(m, "family", "mode entry"), "family")),
                         parse_mutable_mode(as_string(require(m, "mode", "mode entry"), "mode")));
  }
  if (j.contains("semantics")) {
    c.semantics.clear();
    for (const auto& s : as_array(j["semantics"], "semantics")) c.semantics.push_back(semantics_from_json(s));
  }
  if (j.contains("n_graphs")) c.n_graphs = static_cast<int>(as_integer(j["n_graphs"], "n_graphs"));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw Error("seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("search")) c.search = search_config_from_json(j["search"]);
  if (j.contains("target")) c.target = parse_target_mode(as_string(j["target"], "target"));
  if (j.contains("bs_diff_over_all")) c.bs_diff_over_all = as_bool(j["bs_diff_over_all"], "bs_diff_over_all");
  if (j.contains("record_runtime")) c.record_runtime = as_bool(j["record_runtime"], "record_runtime");
  c.validate();
  return c;
}

Json manifest_to_json(const GeneratedInstance& inst, const GenSpec& spec) {
  Json mut = Json::object();
  for (const auto& [mode, set] : inst.mutable_presets) mut[to_string(mode)] = Json(std::vector<ArgumentId>(set.begin(), set.end()));
  return Json{{"structure", spec.structure},
              {"family", to_string(spec.family)},
              {"seed", spec.seed},
              {"target", to_string(spec.target)},
              {"layers", inst.layers},
              {"ordering", ordering_to_json(inst.ordering)},
              {"mutable", mut}};
}

}  // namespace qbag::io
