#include "qbag/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace qbag {

namespace {

struct Paired {
  std::vector<double> target;
  std::vector<double> achieved;
};

Paired pair_up(const DesiredOrdering& ordering, const std::map<ArgumentId, double>& strengths) {
  if (ordering.topic_count() < 2) throw Error("rank correlation needs at least two topics");
  Paired p;
  const auto& tiers = ordering.tiers();
  for (std::size_t t = 0; t < tiers.size(); ++t) {
    for (const auto& x : tiers[t]) {
      auto it = strengths.find(x);
      if (it == strengths.end() || std::isnan(it->second)) throw Error("no defined strength for topic '" + x + "'");
      p.target.push_back(static_cast<double>(t));
      p.achieved.push_back(it->second);
    }
  }
  return p;
}

int sign(double v) { return (v > 0) - (v < 0); }

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed << v;
  return os.str();
}

}  // namespace

double kendall_tau(const DesiredOrdering& target, const std::map<ArgumentId, double>& strengths) {
  const Paired p = pair_up(target, strengths);
  const std::size_t n = p.target.size();
  long s = 0, ties_t = 0, ties_a = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int st = sign(p.target[i] - p.target[j]);
      const int sa = sign(p.achieved[i] - p.achieved[j]);
      s += st * sa;
      ties_t += st == 0;
      ties_a += sa == 0;
    }
  }
  const double n0 = static_cast<double>(n * (n - 1) / 2);
  const double denom = std::sqrt((n0 - static_cast<double>(ties_t)) * (n0 - static_cast<double>(ties_a)));
  return denom > 0 ? static_cast<double>(s) / denom : 0.0;
}

double spearman_rho(const DesiredOrdering& target, const std::map<ArgumentId, double>& strengths) {
  const Paired p = pair_up(target, strengths);
  const auto rt = average_ranks(p.target);
  const auto ra = average_ranks(p.achieved);
  const Eigen::Map<const Eigen::VectorXd> x(rt.data(), static_cast<Eigen::Index>(rt.size()));
  const Eigen::Map<const Eigen::VectorXd> y(ra.data(), static_cast<Eigen::Index>(ra.size()));
  const Eigen::VectorXd dx = x.array() - x.mean();
  const Eigen::VectorXd dy = y.array() - y.mean();
  const double denom = std::sqrt(dx.squaredNorm() * dy.squaredNorm());
  return denom > 0 ? dx.dot(dy) / denom : 0.0;
}

void ExperimentConfig::validate() const {
  if (n_graphs < 1) throw Error("n_graphs must be at least 1");
  if (structures.empty()) throw Error("experiment needs at least one structure");
  if (modes.empty()) throw Error("experiment needs at least one (family, mode) pair");
  if (semantics.empty()) throw Error("experiment needs at least one semantics");
  for (const auto& s : structures) {
    if (s.size() < 2) throw Error("a layer structure needs at least two layers");
    for (int n : s)
      if (n < 1) throw Error("every layer needs at least one argument");
  }
  for (const auto& [family, mode] : modes) {
    if (mode == MutableMode::constrained && family != Family::constrained)
      throw Error("the constrained mutability mode needs the constrained family");
    if (family == Family::constrained)
      for (const auto& s : structures)
        if (s.size() < 4) throw Error("constrained instances need at least four layers");
  }
  search.validate();
}

std::vector<ExperimentCell> ExperimentConfig::cells() const {
  std::vector<ExperimentCell> out;
  for (const auto& s : structures)
    for (const auto& [family, mode] : modes)
      for (const auto& sem : semantics) out.push_back({s, family, mode, sem});
  return out;
}

GraphRecord run_graph(const ExperimentConfig& cfg, const ExperimentCell& cell, std::size_t cell_index,
                      int graph_index) {
  GraphRecord rec;
  rec.cell = cell_index;
  rec.graph_index = graph_index;
  rec.seed = cfg.seed + static_cast<std::uint64_t>(graph_index);
  try {
    const GeneratedInstance inst = generate({cell.structure, cell.family, rec.seed, cfg.target}, cell.semantics);
    const SxQuery q{inst.graph, cell.semantics, mutable_preset(inst, cell.mode), inst.ordering};
    SearchConfig sc = cfg.search;
    sc.rng_seed = cfg.search.rng_seed + rec.seed;

    const auto start = std::chrono::steady_clock::now();
    const SearchOutcome out = heuristic_search(q, sc);
    const auto stop = std::chrono::steady_clock::now();
    if (cfg.record_runtime) rec.runtime_s = std::chrono::duration<double>(stop - start).count();

    rec.found = out.found();
    rec.iterations = out.iterations_used;
    rec.final_cost = out.final_cost;

    Eigen::VectorXd tau = q.graph.base_scores();
    for (const auto& [x, v] : out.final_scores) tau[q.graph.index(x)] = v;
    const Qbag reached = q.graph.with_base_scores(tau);
    const auto sigma = final_strengths(reached, cell.semantics).to_map();
    rec.valid = rec.found && relu_cost(sigma, q.ordering) <= sc.cost_tolerance;
    rec.kendall = kendall_tau(q.ordering, sigma);
    rec.spearman = spearman_rho(q.ordering, sigma);

    rec.change_norm = amount_of_change(q.graph, change_between(q.graph, tau, q.mutable_set));
    const double per = cfg.bs_diff_over_all ? static_cast<double>(q.graph.size())
                                            : static_cast<double>(q.mutable_set.size());
    rec.abs_bs_diff = per > 0 ? rec.change_norm / per : 0.0;
  } catch (const std::exception& e) {
    rec.error = e.what();
    if (rec.error.empty()) rec.error = "unknown error";
  }
  return rec;
}

std::vector<ExperimentRecord> summarize(const ExperimentConfig& cfg, const std::vector<GraphRecord>& graphs) {
  const auto cells = cfg.cells();
  std::vector<ExperimentRecord> out(cells.size());
  std::vector<int> valid(cells.size(), 0);
  std::vector<double> bs(cells.size(), 0.0);
  for (std::size_t c = 0; c < cells.size(); ++c) out[c].cell = cells[c];
  for (const auto& g : graphs) {
    if (g.cell >= out.size()) throw Error("graph record refers to an unknown cell");
    auto& r = out[g.cell];
    ++r.n_graphs;
    if (!g.error.empty()) {
      ++r.n_errors;
      continue;
    }
    r.kendall += g.kendall;
    r.spearman += g.spearman;
    r.runtime_s += g.runtime_s;
    if (g.valid) {
      ++valid[g.cell];
      bs[g.cell] += g.abs_bs_diff;
    }
  }
  for (std::size_t c = 0; c < out.size(); ++c) {
    auto& r = out[c];
    // Errored runs count as invalid; correlations and times average over the rest.
    const int ok = r.n_graphs - r.n_errors;
    if (r.n_graphs > 0) r.validity = static_cast<double>(valid[c]) / r.n_graphs;
    if (ok > 0) {
      r.kendall /= ok;
      r.spearman /= ok;
      r.runtime_s /= ok;
    }
    if (valid[c] > 0) r.abs_bs_diff = bs[c] / valid[c];
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs,
                                const std::function<void(std::size_t, std::size_t)>& progress) {
  cfg.validate();
  const auto cells = cfg.cells();
  const std::size_t total = cells.size() * static_cast<std::size_t>(cfg.n_graphs);
  std::vector<GraphRecord> records(total);

  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), std::max<std::size_t>(total, 1)));

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      const std::size_t c = t / static_cast<std::size_t>(cfg.n_graphs);
      const int i = static_cast<int>(t % static_cast<std::size_t>(cfg.n_graphs));
      records[t] = run_graph(cfg, cells[c], c, i);
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(d, total);
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  result.summary = summarize(cfg, records);
  result.graphs = std::move(records);
  return result;
}

void write_summary_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << "structure,family,mode,semantics,validity,kendall,spearman,runtime_s,abs_bs_diff\n";
  for (const auto& r : records) {
    os << csv_field(format_structure(r.cell.structure)) << ',' << to_string(r.cell.family) << ','
       << to_string(r.cell.mode) << ',' << csv_field(r.cell.semantics.name()) << ',' << num(r.validity) << ','
       << num(r.kendall) << ',' << num(r.spearman) << ',' << num(r.runtime_s) << ','
       << (r.abs_bs_diff ? num(*r.abs_bs_diff) : std::string("NA")) << '\n';
  }
}

void write_graphs_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<GraphRecord>& graphs) {
  const auto cells = cfg.cells();
  os << "structure,family,mode,semantics,graph,seed,found,valid,kendall,spearman,runtime_s,iterations,final_cost,"
        "change_norm,abs_bs_diff,error\n";
  for (const auto& g : graphs) {
    const auto& c = cells.at(g.cell);
    os << csv_field(format_structure(c.structure)) << ',' << to_string(c.family) << ',' << to_string(c.mode) << ','
       << csv_field(c.semantics.name()) << ',' << g.graph_index << ',' << g.seed << ',' << (g.found ? 1 : 0) << ','
       << (g.valid ? 1 : 0) << ',' << num(g.kendall) << ',' << num(g.spearman) << ',' << num(g.runtime_s) << ','
       << g.iterations << ',' << num(g.final_cost) << ',' << num(g.change_norm) << ',' << num(g.abs_bs_diff) << ','
       << csv_field(g.error) << '\n';
  }
}

}  // namespace qbag
