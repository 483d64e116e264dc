#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "gclust/analysis.hpp"
#include "gclust/clustering.hpp"
#include "gclust/instances.hpp"
#include "gclust/serialize.hpp"
#include "gclust/solvers.hpp"
#include "gclust/tsplib.hpp"

namespace gclust::cli {

namespace {

struct RunConfig {
  std::vector<std::string> instances;
  double gamma = 1.000001;
  double budget_secs = 900.0;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string solver;
  unsigned jobs = 0;
  std::string out;
  std::string progress;

  // gen
  std::string kind;
  int n = 2;
  double alpha = 2.0;
  double beta = 1.0;
  std::vector<int> sizes;
  double margin = 0.05;
  double scale = 100.0;
  std::string map;
  std::string name;

  // gap
  int tightness_n = -1;
  int search_space = -1;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

struct LoadedInstance {
  std::string name;
  MetricGraph graph;
};

LoadedInstance load_instance(const std::string& path) {
  const std::filesystem::path p(path);
  if (!std::filesystem::exists(p)) throw UsageError("cannot open '" + path + "'");
  LoadedInstance inst;
  if (p.extension() == ".map") {
    inst.name = p.stem().string();
    inst.graph = gen_office(read_office_map_file(path));
    return inst;
  }
  const auto tsp = read_tsplib_file(path);
  inst.name = tsp.name.empty() ? p.stem().string() : tsp.name;
  inst.graph = instance_to_graph(tsp);
  return inst;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_gamma(const RunConfig& c) {
  if (!(c.gamma > 1.0)) throw UsageError("--gamma must be greater than 1");
}

void check_budget(const RunConfig& c) {
  if (!(c.budget_secs > 0.0)) throw UsageError("--budget-secs must be positive");
}

void check_format(const RunConfig& c, std::initializer_list<std::string_view> allowed) {
  if (std::find(allowed.begin(), allowed.end(), c.format) == allowed.end()) {
    throw UsageError("unsupported --format '" + c.format + "' for this command");
  }
}

SolveOptions options_for(const RunConfig& c, std::ostream* progress) {
  SolveOptions o;
  o.budget = std::chrono::duration<double>(c.budget_secs);
  if (progress != nullptr) {
    o.on_improvement = [progress](double elapsed, double cost) {
      *progress << format_double(elapsed) << ' ' << format_double(cost) << '\n';
    };
  }
  return o;
}

int cmd_cluster(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_gamma(c);
  check_format(c, {"json", "text"});
  if (c.instances.size() != 1) throw UsageError("cluster takes exactly one instance");
  const auto inst = load_instance(c.instances.front());
  const auto start = std::chrono::steady_clock::now();
  const auto tree = gamma_clustering(inst.graph, c.gamma);
  const double secs = seconds_since(start);

  std::ostringstream summary;
  summary << inst.name << ": " << tree.size() << " clusters in " << format_double(secs) << " s\n";
  if (c.format == "json") {
    emit(to_json(tree).dump(2) + "\n", c.out, out);
    (c.out.empty() ? err : out) << summary.str();
  } else {
    std::ostringstream text;
    text << summary.str();
    for (std::size_t i = 0; i < tree.size(); ++i) {
      const auto& cl = tree[i];
      text << "  [" << i << "] size " << cl.vertices.size() << " gamma "
           << format_double(cl.metrics.gamma) << " parent " << cl.parent << " {";
      for (std::size_t k = 0; k < cl.vertices.size(); ++k) {
        text << (k ? " " : "") << inst.graph.label(cl.vertices[k]);
      }
      text << "}\n";
    }
    emit(text.str(), c.out, out);
  }
  return kSuccess;
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream&) {
  check_budget(c);
  check_format(c, {"json", "text", "tour"});
  if (c.instances.size() != 1) throw UsageError("solve takes exactly one instance");
  const std::string solver = c.solver.empty() ? "ctsp" : c.solver;
  const auto inst = load_instance(c.instances.front());

  std::ofstream progress_file;
  if (!c.progress.empty()) {
    progress_file.open(c.progress);
    if (!progress_file) throw UsageError("cannot write '" + c.progress + "'");
  }
  const auto options = options_for(c, c.progress.empty() ? nullptr : &progress_file);

  ClusterTree tree;
  const bool clustered = solver == "ctsp" || solver == "heuristic-ctsp";
  if (clustered) {
    check_gamma(c);
    tree = gamma_clustering(inst.graph, c.gamma);
  }
  SolveReport report;
  if (solver == "tsp") {
    report = solve_exact_tsp(inst.graph, options);
  } else if (solver == "ctsp") {
    report = solve_exact_ctsp(inst.graph, tree, options);
  } else if (solver == "heuristic") {
    report = solve_heuristic(inst.graph, nullptr, options, c.seed);
  } else if (solver == "heuristic-ctsp") {
    report = solve_heuristic(inst.graph, &tree, options, c.seed);
  } else {
    throw UsageError("unknown --solver '" + solver + "'");
  }

  if (c.format == "json") {
    Json j = to_json(report);
    j["instance"] = inst.name;
    if (clustered) j["clusters"] = tree.size();
    emit(j.dump(2) + "\n", c.out, out);
  } else if (c.format == "tour") {
    emit(tour_section(report.tour, inst.name), c.out, out);
  } else {
    std::ostringstream text;
    text << inst.name << ": " << report.solver_name << " " << to_string(report.status) << " cost "
         << format_double(report.cost) << " nodes " << report.nodes_expanded << "\n";
    emit(text.str(), c.out, out);
  }
  return report.status == SolveStatus::kFeasibleTimeout ? kTimeout : kSuccess;
}

struct BenchRow {
  std::string name;
  std::size_t vertices = 0;
  std::size_t clusters = 0;
  SolveReport tsp;
  SolveReport ctsp;
  double cluster_time = 0.0;
  std::string error;
};

SolveReport bench_solve(const MetricGraph& g, const ClusterTree* tree, const std::string& solver,
                        const SolveOptions& options, std::uint64_t seed) {
  const bool exact = solver == "exact" || (solver == "auto");
  if (exact) {
    try {
      return tree == nullptr ? solve_exact_tsp(g, options) : solve_exact_ctsp(g, *tree, options);
    } catch (const Error&) {
      if (solver == "exact") throw;
    }
  }
  return solve_heuristic(g, tree, options, seed);
}

BenchRow bench_one(const std::string& path, const RunConfig& c) {
  BenchRow row;
  row.name = std::filesystem::path(path).stem().string();
  try {
    const auto inst = load_instance(path);
    row.name = inst.name;
    row.vertices = inst.graph.size();
    const auto start = std::chrono::steady_clock::now();
    const auto tree = gamma_clustering(inst.graph, c.gamma);
    row.cluster_time = seconds_since(start);
    row.clusters = tree.size();
    const auto options = options_for(c, nullptr);
    const std::string solver = c.solver.empty() ? "auto" : c.solver;
    row.tsp = bench_solve(inst.graph, nullptr, solver, options, c.seed);
    row.ctsp = tree.empty() ? row.tsp : bench_solve(inst.graph, &tree, solver, options, c.seed);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

int cmd_bench(const RunConfig& c, std::ostream& out, std::ostream&) {
  check_gamma(c);
  check_budget(c);
  check_format(c, {"csv", "json"});
  if (c.instances.empty()) throw UsageError("bench needs at least one instance");
  if (!c.solver.empty() && c.solver != "auto" && c.solver != "exact" && c.solver != "heuristic") {
    throw UsageError("unknown --solver '" + c.solver + "' (auto, exact, heuristic)");
  }
  std::vector<BenchRow> rows(c.instances.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      std::min<unsigned>(c.jobs == 0 ? hw : c.jobs, static_cast<unsigned>(rows.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) rows[i] = bench_one(c.instances[i], c);
    });
  }
  for (auto& t : pool) t.join();

  bool timed_out = false;
  std::ostringstream text;
  if (c.format == "csv") {
    text << "name,vertices,clusters,tsp_cost,tsp_status,tsp_time,ctsp_cost,ctsp_status,ctsp_time,"
            "gap_ratio,cluster_time,cluster_time_ratio,error\n";
  }
  Json rows_json = Json::array();
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    timed_out = timed_out || (ok && (r.tsp.status == SolveStatus::kFeasibleTimeout ||
                                     r.ctsp.status == SolveStatus::kFeasibleTimeout));
    const double gap = ok && r.tsp.cost > 0.0 ? r.ctsp.cost / r.tsp.cost : 1.0;
    const double total = r.cluster_time + r.ctsp.elapsed.count();
    const double time_ratio = total > 0.0 ? r.cluster_time / total : 0.0;
    if (c.format == "csv") {
      text << csv_field(r.name) << ',' << r.vertices << ',' << r.clusters << ',';
      if (ok) {
        text << format_double(r.tsp.cost) << ',' << to_string(r.tsp.status) << ','
             << format_double(r.tsp.elapsed.count()) << ',' << format_double(r.ctsp.cost) << ','
             << to_string(r.ctsp.status) << ',' << format_double(r.ctsp.elapsed.count()) << ','
             << format_double(gap) << ',' << format_double(r.cluster_time) << ','
             << format_double(time_ratio) << ",\n";
      } else {
        text << ",error,,,error,,,,," << csv_field(r.error) << '\n';
      }
    } else {
      Json j = {{"name", r.name}, {"vertices", r.vertices}, {"clusters", r.clusters}};
      if (ok) {
        j["tsp"] = to_json(r.tsp);
        j["ctsp"] = to_json(r.ctsp);
        j["gap_ratio"] = gap;
        j["timing"] = {{"cluster_seconds", r.cluster_time}, {"cluster_time_ratio", time_ratio}};
      } else {
        j["error"] = r.error;
      }
      rows_json.push_back(j);
    }
  }
  emit(c.format == "csv" ? text.str() : rows_json.dump(2) + "\n", c.out, out);
  return timed_out ? kTimeout : kSuccess;
}

int cmd_gen(const RunConfig& c, std::ostream& out, std::ostream&) {
  MetricGraph graph;
  std::string name = c.name;
  std::string comment;
  Json sidecar;
  if (c.kind == "lower-bound") {
    const auto inst = gen_lower_bound(c.n, c.alpha, c.beta);
    graph = inst.graph;
    if (name.empty()) name = "lower_bound_" + std::to_string(c.n);
    comment = "lower-bound family n=" + std::to_string(c.n) + " alpha=" + format_double(c.alpha) +
              " beta=" + format_double(c.beta);
    sidecar = {{"cluster", std::vector<Vertex>(inst.cluster.begin(), inst.cluster.end())},
               {"ring", inst.ring}};
  } else if (c.kind == "planted") {
    check_gamma(c);
    if (c.sizes.empty()) throw UsageError("planted needs --sizes");
    PlantedOptions po;
    po.margin = c.margin;
    const auto inst = gen_planted(c.sizes, c.gamma, c.seed, po);
    graph = inst.graph;
    if (name.empty()) name = "planted_" + std::to_string(c.seed);
    comment = "planted clusters gamma=" + format_double(c.gamma) + " seed=" + std::to_string(c.seed);
    sidecar = to_json(inst.clusters);
    sidecar["block_of"] = inst.block_of;
  } else if (c.kind == "office") {
    if (c.map.empty()) throw UsageError("office needs --map");
    graph = gen_office(read_office_map_file(c.map));
    if (name.empty()) name = std::filesystem::path(c.map).stem().string();
    comment = "office waypoints from " + std::filesystem::path(c.map).filename().string();
  } else if (c.kind == "random") {
    graph = gen_random_euclidean(c.n, c.seed, c.scale);
    if (name.empty()) name = "random_" + std::to_string(c.n) + "_" + std::to_string(c.seed);
    comment = "uniform random points seed=" + std::to_string(c.seed);
  } else {
    throw UsageError("unknown generator '" + c.kind + "' (lower-bound, planted, office, random)");
  }
  emit(write_tsplib_explicit(graph, name, comment), c.out, out);
  if (!sidecar.is_null() && !c.out.empty() && c.out != "-") {
    emit(sidecar.dump(2) + "\n", c.out + ".clusters.json", out);
  }
  return kSuccess;
}

int cmd_gap(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_gamma(c);
  check_budget(c);
  check_format(c, {"json", "csv"});
  const auto budget = std::chrono::duration<double>(c.budget_secs);
  if (c.search_space >= 0) {
    const auto r = search_space_ratio(c.search_space, c.sizes);
    emit(to_json(r).dump(2) + "\n", c.out, out);
    return kSuccess;
  }
  if (c.tightness_n >= 0) {
    const auto curve = tightness_curve(c.gamma, c.tightness_n, budget);
    for (const auto& w : curve.warnings) err << "warning: " << w << '\n';
    emit(c.format == "csv" ? tightness_csv(curve) : to_json(curve).dump(2) + "\n", c.out, out);
    for (const auto& w : curve.warnings) {
      if (w.find("exceeded the budget") != std::string::npos) return kTimeout;
    }
    return kSuccess;
  }
  if (c.instances.size() != 1) throw UsageError("gap takes exactly one instance");
  const auto inst = load_instance(c.instances.front());
  try {
    const auto r = measure_gap(inst.graph, c.gamma, budget);
    if (c.format == "csv") {
      emit(gap_csv_header() + "\n" + gap_csv_row(inst.name, r) + "\n", c.out, out);
    } else {
      Json j = to_json(r);
      j["instance"] = inst.name;
      emit(j.dump(2) + "\n", c.out, out);
    }
    return kSuccess;
  } catch (const GapTimeout& e) {
    Json j = to_json(e.partial());
    j["instance"] = inst.name;
    j["error"] = e.what();
    emit(j.dump(2) + "\n", c.out, out);
    return kTimeout;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Separation-based clustering and clustered TSP solving", "gclust"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--gamma", c.gamma, "Separation threshold (> 1)");
    sub->add_option("--budget-secs", c.budget_secs, "Time budget per solve in seconds");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--format", c.format, "Output format");
    sub->add_option("--out", c.out, "Output file (default stdout)");
  };

  auto* cluster = app.add_subcommand("cluster", "Compute the clustering of an instance");
  cluster->add_option("instance", c.instances, "TSPLIB or .map file")->required();
  add_common(cluster);

  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("instance", c.instances, "TSPLIB or .map file")->required();
  solve->add_option("--solver", c.solver, "tsp, ctsp (default), heuristic, heuristic-ctsp");
  solve->add_option("--progress", c.progress, "Append incumbent improvements to this file");
  add_common(solve);

  auto* bench = app.add_subcommand("bench", "Cluster and solve many instances, CSV table");
  bench->add_option("instances", c.instances, "TSPLIB or .map files")->required();
  bench->add_option("--solver", c.solver, "auto (default), exact, heuristic");
  bench->add_option("--jobs", c.jobs, "Worker threads (default: logical cores)");
  add_common(bench);

  auto* gen = app.add_subcommand("gen", "Generate an instance as TSPLIB EXPLICIT");
  gen->add_option("kind", c.kind, "lower-bound, planted, office, random")->required();
  gen->add_option("--n", c.n, "Family index (lower-bound) or vertex count (random)");
  gen->add_option("--alpha", c.alpha, "Leaving weight (lower-bound)");
  gen->add_option("--beta", c.beta, "Internal weight (lower-bound)");
  gen->add_option("--sizes", c.sizes, "Cluster sizes (planted)")->delimiter(',');
  gen->add_option("--margin", c.margin, "Separation margin (planted)");
  gen->add_option("--scale", c.scale, "Coordinate scale (random)");
  gen->add_option("--map", c.map, "Office map file (office)");
  gen->add_option("--name", c.name, "Instance name");
  add_common(gen);

  auto* gap = app.add_subcommand("gap", "Clustered versus unclustered optimum");
  gap->add_option("instance", c.instances, "TSPLIB or .map file");
  gap->add_option("--tightness", c.tightness_n, "Measure the lower-bound family up to this n");
  gap->add_option("--search-space", c.search_space, "Search-space ratio for this vertex count");
  gap->add_option("--sizes", c.sizes, "Cluster sizes for --search-space")->delimiter(',');
  add_common(gap);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*bench && c.format == "json" && !bench->get_option("--format")->count()) c.format = "csv";
    if (*cluster) return cmd_cluster(c, out, err);
    if (*solve) return cmd_solve(c, out, err);
    if (*bench) return cmd_bench(c, out, err);
    if (*gen) return cmd_gen(c, out, err);
    if (*gap) return cmd_gap(c, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace gclust::cli
