// qbag-sx: command-line front end for the qbag_sx library.
//
// Results go to stdout as JSON (or CSV where --format csv is accepted);
// diagnostics and human summaries go to stderr.

#include "qbag/io.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using qbag::io::Json;

constexpr int kOk = 0;
constexpr int kNotFound = 1;
constexpr int kUsage = 2;

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

qbag::SemanticsSpec load_semantics(const std::string& arg) {
  if (arg.empty()) throw qbag::Error("--semantics is empty");
  if (arg.front() == '{') return qbag::io::semantics_from_json(qbag::io::parse_json(arg));
  if (arg.find('.') != std::string::npos || arg.find('/') != std::string::npos)
    return qbag::io::semantics_from_json(qbag::io::read_json_file(arg));
  return qbag::SemanticsSpec::from_token(arg);
}

qbag::DesiredOrdering load_ordering(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return qbag::io::ordering_from_json(qbag::io::parse_json(arg));
  if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json")
    return qbag::io::ordering_from_json(qbag::io::read_json_file(arg));
  return qbag::io::parse_ordering_notation(arg);
}

qbag::SearchConfig load_search_config(const std::string& path, const qbag::SearchConfig& fallback = {}) {
  return path.empty() ? fallback : qbag::io::search_config_from_json(qbag::io::read_json_file(path));
}

int default_jobs() {
  if (const char* env = std::getenv("QBAG_SX_JOBS")) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(env, &used);
      if (used == std::string(env).size() && n > 0) return n;
    } catch (const std::exception&) {
    }
    throw qbag::Error(std::string("QBAG_SX_JOBS must be a positive integer, got '") + env + "'");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct Options {
  std::string graph, semantics = "dfquad", ordering, mutable_ids, search_config, format = "json", out;
  std::string structure, family = "random", target_mode = "permuted", problem, topic, dummy = "__target__";
  std::string change, satisfaction = "weak", trajectory, config;
  std::uint64_t seed = 0;
  double grid_step = 0.05, target_strength = 0.0, uniform = 0.0, epsilon = 0.0, tolerance = 0.0;
  std::optional<double> grid_lower, grid_upper;
  int max_mutable = 4, jobs = 0;
  std::uint64_t max_evaluations = 5'000'000;
  bool no_timing = false;
};

qbag::SatisfactionMode parse_satisfaction(const std::string& s) {
  if (s == "weak") return qbag::SatisfactionMode::weak;
  if (s == "exact") return qbag::SatisfactionMode::exact;
  throw qbag::Error("unknown satisfaction mode '" + s + "' (expected weak or exact)");
}

int run_eval(const Options& o) {
  const qbag::Qbag g = qbag::io::graph_from_json(qbag::io::read_json_file(o.graph));
  const auto sigma = qbag::final_strengths(g, load_semantics(o.semantics));
  if (o.format == "csv") {
    std::cout << "id,strength\n";
    std::cout.precision(17);
    for (std::size_t i = 0; i < sigma.ids.size(); ++i) {
      const double v = sigma.values[static_cast<Eigen::Index>(i)];
      std::cout << sigma.ids[i] << ',';
      if (std::isnan(v)) std::cout << "NA";
      else std::cout << v;
      std::cout << '\n';
    }
  } else {
    print(qbag::io::strengths_to_json(sigma));
  }
  if (!sigma.all_defined()) std::cerr << "warning: some final strengths are undefined (no convergence)\n";
  return kOk;
}

qbag::SxQuery load_query(const Options& o) {
  qbag::SxQuery q{qbag::io::graph_from_json(qbag::io::read_json_file(o.graph)), load_semantics(o.semantics),
                  qbag::io::parse_id_list(o.mutable_ids), load_ordering(o.ordering)};
  q.validate();
  return q;
}

int run_explain(const Options& o) {
  const qbag::SxQuery q = load_query(o);
  qbag::SearchConfig cfg = load_search_config(o.search_config);
  if (!o.trajectory.empty()) cfg.record_trajectory = true;
  const qbag::SearchOutcome out = qbag::heuristic_search(q, cfg);
  Json j = qbag::io::outcome_to_json(out);
  j["amount_of_change"] = out.sx ? Json(qbag::amount_of_change(q.graph, *out.sx)) : Json(nullptr);
  if (!o.trajectory.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "iteration,cost\n";
    for (std::size_t k = 0; k < out.trajectory.size(); ++k) csv << k + 1 << ',' << out.trajectory[k] << '\n';
    qbag::io::write_text_file(o.trajectory, csv.str());
    j.erase("trajectory");
  }
  print(j);
  if (!out.found()) std::cerr << "no strength change explanation found\n";
  return out.found() ? kOk : kNotFound;
}

int run_generate(const Options& o) {
  qbag::GenSpec spec{qbag::parse_structure(o.structure), qbag::parse_family(o.family), o.seed,
                     qbag::parse_target_mode(o.target_mode)};
  const auto inst = qbag::generate(spec, load_semantics(o.semantics));
  namespace fs = std::filesystem;
  fs::create_directories(o.out);
  const std::string graph_path = (fs::path(o.out) / "graph.json").string();
  const std::string manifest_path = (fs::path(o.out) / "manifest.json").string();
  qbag::io::write_text_file(graph_path, qbag::io::graph_to_json(inst.graph).dump(2) + "\n");
  qbag::io::write_text_file(manifest_path, qbag::io::manifest_to_json(inst, spec).dump(2) + "\n");
  print(Json{{"graph", graph_path}, {"manifest", manifest_path}});
  return kOk;
}

int run_oracle(const Options& o) {
  const qbag::SxQuery q = load_query(o);
  qbag::GridSpec grid;
  grid.step = o.grid_step;
  grid.lower = o.grid_lower;
  grid.upper = o.grid_upper;
  grid.max_mutable = o.max_mutable;
  grid.max_evaluations = o.max_evaluations;
  const auto mode = parse_satisfaction(o.satisfaction);
  const qbag::OracleResult r = qbag::brute_force_sx(q, grid, mode, o.tolerance);
  Json j{{"best", r.best ? qbag::io::change_to_json(*r.best) : Json(nullptr)},
         {"best_norm", r.best ? Json(r.best_norm) : Json(nullptr)},
         {"exhaustive", r.exhaustive},
         {"evaluations", r.evaluations}};
  if (!o.change.empty()) {
    const auto delta = qbag::io::change_from_json(qbag::io::read_json_file(o.change));
    j["epsilon"] = o.epsilon;
    j["verdict"] = qbag::to_string(qbag::certify_epsilon(q, delta, o.epsilon, grid, mode, o.tolerance));
  }
  print(j);
  return kOk;
}

int run_inverse(const Options& o) {
  const auto problem = qbag::io::inverse_problem_from_json(qbag::io::read_json_file(o.problem));
  const auto spec = load_semantics(o.semantics);
  const auto sol =
      qbag::solve_inverse(problem, spec, load_search_config(o.search_config, qbag::reduction_search_config()), o.uniform);
  if (!sol) {
    print(Json{{"status", "not_found"}, {"base_scores", nullptr}, {"strengths", nullptr}});
    std::cerr << "no solution found\n";
    return kNotFound;
  }
  Json scores = Json::object();
  for (const auto& [k, v] : sol->base_scores) scores[k] = v;
  const auto g = qbag::assign_uniform(problem, o.uniform, spec.domain);
  const auto solved = qbag::apply_change(g, *sol->outcome.sx, spec.domain);
  print(Json{{"status", "found"},
             {"base_scores", scores},
             {"strengths", qbag::io::strengths_to_json(qbag::final_strengths(solved, spec))}});
  return kOk;
}

int run_counterfactual(const Options& o) {
  const auto spec = load_semantics(o.semantics);
  const auto c = qbag::CounterfactualProblem::make(qbag::io::graph_from_json(qbag::io::read_json_file(o.graph)),
                                                   o.topic, o.target_strength, spec);
  const auto sol =
      qbag::solve_counterfactual(c, spec, load_search_config(o.search_config, qbag::reduction_search_config()), o.dummy);
  Json scores = Json::object();
  for (const auto& [k, v] : sol.base_scores) scores[k] = v;
  print(Json{{"status", sol.solved ? "found" : "not_found"},
             {"topic", c.topic},
             {"target_strength", c.target},
             {"topic_strength", sol.topic_strength},
             {"dummy_strength", sol.dummy_strength},
             {"base_scores", scores}});
  if (!sol.solved) std::cerr << "target strength not reached\n";
  return sol.solved ? kOk : kNotFound;
}

int run_experiment(const Options& o) {
  qbag::ExperimentConfig cfg = qbag::io::experiment_config_from_json(qbag::io::read_json_file(o.config));
  if (o.no_timing) cfg.record_runtime = false;
  const int jobs = o.jobs > 0 ? o.jobs : default_jobs();
  const auto result = qbag::run_experiment(cfg, jobs, [](std::size_t done, std::size_t total) {
    if (done == total || done % 50 == 0) std::cerr << "\r" << done << "/" << total << " runs" << std::flush;
  });
  std::cerr << '\n';

  namespace fs = std::filesystem;
  fs::create_directories(o.out);
  std::ostringstream summary, graphs;
  qbag::write_summary_csv(summary, result.summary);
  qbag::write_graphs_csv(graphs, cfg, result.graphs);
  qbag::io::write_text_file((fs::path(o.out) / "summary.csv").string(), summary.str());
  qbag::io::write_text_file((fs::path(o.out) / "graphs.csv").string(), graphs.str());

  if (o.format == "csv") {
    std::cout << summary.str();
  } else {
    Json rows = Json::array();
    for (const auto& r : result.summary)
      rows.push_back(Json{{"structure", r.cell.structure},
                          {"family", qbag::to_string(r.cell.family)},
                          {"mode", qbag::to_string(r.cell.mode)},
                          {"semantics", r.cell.semantics.name()},
                          {"n_graphs", r.n_graphs},
                          {"errors", r.n_errors},
                          {"validity", r.validity},
                          {"kendall", r.kendall},
                          {"spearman", r.spearman},
                          {"runtime_s", r.runtime_s},
                          {"abs_bs_diff", r.abs_bs_diff ? Json(*r.abs_bs_diff) : Json(nullptr)}});
    print(rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradual semantics and strength change explanations for quantitative bipolar argumentation graphs"};
  app.require_subcommand(1);
  Options o;

  auto add_query = [&](CLI::App* sub) {
    sub->add_option("--graph", o.graph, "Graph JSON file")->required();
    sub->add_option("--semantics", o.semantics, "dfquad|eb|qe|naive, inline JSON or a JSON file");
    sub->add_option("--ordering", o.ordering, "Desired ordering, strongest first (c>b, a=b>c) or JSON")->required();
    sub->add_option("--mutable", o.mutable_ids, "Comma-separated mutable argument ids")->required();
  };

  auto* eval = app.add_subcommand("eval", "Print final strengths");
  eval->add_option("--graph", o.graph, "Graph JSON file")->required();
  eval->add_option("--semantics", o.semantics, "dfquad|eb|qe|naive, inline JSON or a JSON file");
  eval->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  auto* explain = app.add_subcommand("explain", "Search for a strength change explanation");
  add_query(explain);
  explain->add_option("--search-config", o.search_config, "Search config JSON file");
  explain->add_option("--trajectory", o.trajectory, "Write the per-iteration cost as CSV to this file");

  auto* generate = app.add_subcommand("generate", "Generate a layered instance");
  generate->add_option("--structure", o.structure, "Layer sizes, e.g. 8,32,16,3")->required();
  generate->add_option("--family", o.family, "random|constrained")->check(CLI::IsMember({"random", "constrained"}));
  generate->add_option("--seed", o.seed, "Generator seed");
  generate->add_option("--target", o.target_mode, "permuted|literal")->check(CLI::IsMember({"permuted", "literal"}));
  generate->add_option("--semantics", o.semantics, "Semantics used to pick the target ordering");
  generate->add_option("--out", o.out, "Output directory")->required();

  auto* oracle = app.add_subcommand("oracle", "Exhaustive grid search over the mutable base scores");
  add_query(oracle);
  oracle->add_option("--grid-step", o.grid_step, "Grid step");
  oracle->add_option("--grid-lower", o.grid_lower, "Lowest grid value (default: domain bound)");
  oracle->add_option("--grid-upper", o.grid_upper, "Highest grid value (default: domain bound)");
  oracle->add_option("--max-mutable", o.max_mutable, "Largest mutable set accepted");
  oracle->add_option("--max-evaluations", o.max_evaluations, "Evaluation budget");
  oracle->add_option("--satisfaction", o.satisfaction, "weak|exact")->check(CLI::IsMember({"weak", "exact"}));
  oracle->add_option("--tolerance", o.tolerance, "Comparison tolerance");
  oracle->add_option("--change", o.change, "Strength change JSON to certify as epsilon-approximate");
  oracle->add_option("--epsilon", o.epsilon, "Epsilon for --change");

  auto* inverse = app.add_subcommand("inverse", "Solve an inverse problem");
  inverse->add_option("--problem", o.problem, "Inverse problem JSON file")->required();
  inverse->add_option("--semantics", o.semantics, "dfquad|eb|qe|naive, inline JSON or a JSON file");
  inverse->add_option("--search-config", o.search_config, "Search config JSON file");
  inverse->add_option("--uniform", o.uniform, "Starting base score for every argument");

  auto* counterfactual = app.add_subcommand("counterfactual", "Solve a strong counterfactual problem");
  counterfactual->add_option("--graph", o.graph, "Graph JSON file")->required();
  counterfactual->add_option("--semantics", o.semantics, "dfquad|eb|qe|naive, inline JSON or a JSON file");
  counterfactual->add_option("--topic", o.topic, "Argument whose strength should change")->required();
  counterfactual->add_option("--target-strength", o.target_strength, "Desired final strength")->required();
  counterfactual->add_option("--search-config", o.search_config, "Search config JSON file");
  counterfactual->add_option("--dummy", o.dummy, "Id of the auxiliary argument");

  auto* experiment = app.add_subcommand("experiment", "Run a batch experiment and write CSV reports");
  experiment->add_option("--config", o.config, "Experiment config JSON file")->required();
  experiment->add_option("--out", o.out, "Output directory")->required();
  experiment->add_option("--jobs", o.jobs, "Worker threads (default: QBAG_SX_JOBS or logical cores)");
  experiment->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  experiment->add_flag("--no-timing", o.no_timing, "Report runtimes as 0 for byte-identical output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*eval) return run_eval(o);
    if (*explain) return run_explain(o);
    if (*generate) return run_generate(o);
    if (*oracle) return run_oracle(o);
    if (*inverse) return run_inverse(o);
    if (*counterfactual) return run_counterfactual(o);
    if (*experiment) return run_experiment(o);
  } catch (const qbag::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
