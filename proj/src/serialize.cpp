#include "gclust/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace gclust {

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

Json to_json(const ClusterTree& tree) {
  Json clusters = Json::array();
  for (const auto& c : tree.clusters()) {
    Json vertices = Json::array();
    for (Vertex v : c.vertices) vertices.push_back(v);
    clusters.push_back({{"vertices", vertices},
                        {"alpha", c.metrics.alpha},
                        {"beta", c.metrics.beta},
                        {"gamma", c.metrics.gamma},
                        {"parent_index", c.parent}});
  }
  return {{"gamma_threshold", tree.gamma_threshold()}, {"clusters", clusters}};
}

ClusterTree cluster_tree_from_json(const Json& j) {
  try {
    std::vector<Cluster> clusters;
    std::vector<int> parents;
    for (const auto& c : j.at("clusters")) {
      Cluster cluster;
      cluster.vertices = VertexSet(c.at("vertices").get<std::vector<Vertex>>());
      cluster.metrics.alpha = c.at("alpha").get<double>();
      cluster.metrics.beta = c.at("beta").get<double>();
      cluster.metrics.gamma = c.value("gamma", 0.0);
      parents.push_back(c.value("parent_index", -1));
      clusters.push_back(std::move(cluster));
    }
    ClusterTree tree(j.at("gamma_threshold").get<double>(), std::move(clusters));
    // Input already in canonical order keeps its indices.
    for (std::size_t i = 0; i < tree.size(); ++i) {
      if (i < parents.size() && tree[i].parent != parents[i]) {
        throw Error("cluster " + std::to_string(i) + ": parent_index " +
                    std::to_string(parents[i]) + " disagrees with nesting (" +
                    std::to_string(tree[i].parent) + ")");
      }
    }
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed cluster tree JSON: ") + e.what());
  }
}

Json to_json(const Tour& tour, double cost) {
  return {{"kind", std::string(to_string(tour.kind))}, {"order", tour.order}, {"cost", cost}};
}

Tour tour_from_json(const Json& j) {
  try {
    Tour t;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "cycle") {
      t.kind = TourKind::kCycle;
    } else if (kind == "open_path") {
      t.kind = TourKind::kOpenPath;
    } else {
      throw Error("unknown tour kind '" + kind + "'");
    }
    t.order = j.at("order").get<std::vector<Vertex>>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed tour JSON: ") + e.what());
  }
}

std::string tour_section(const Tour& tour, const std::string& name) {
  std::ostringstream out;
  out << "NAME : " << name << "\n"
      << "TYPE : TOUR\n"
      << "DIMENSION : " << tour.order.size() << "\n"
      << "TOUR_SECTION\n";
  for (Vertex v : tour.order) out << v + 1 << "\n";
  out << "-1\nEOF\n";
  return out.str();
}

Json to_json(const SolveReport& report) {
  return {{"solver", report.solver_name},
          {"status", std::string(to_string(report.status))},
          {"cost", report.cost},
          {"tour", to_json(report.tour, report.cost)},
          {"nodes_expanded", report.nodes_expanded},
          {"timing", {{"elapsed_seconds", report.elapsed.count()}}}};
}

Json to_json(const GapReport& report) {
  Json tsp = to_json(report.tsp);
  Json ctsp = to_json(report.ctsp);
  const Json timing = {{"tsp_seconds", report.tsp.elapsed.count()},
                       {"ctsp_seconds", report.ctsp.elapsed.count()}};
  tsp.erase("timing");
  ctsp.erase("timing");
  return {{"gamma", report.gamma},
          {"clusters", report.clusters},
          {"c_star", report.c_star},
          {"c_prime_star", report.c_prime_star},
          {"ratio", report.ratio},
          {"bound", report.bound},
          {"within_bound", report.within_bound},
          {"tsp", tsp},
          {"ctsp", ctsp},
          {"timing", timing}};
}

Json to_json(const SearchSpaceReport& report) {
  Json j = {{"total_vertices", report.total_vertices},
            {"blocks", report.blocks},
            {"n0_log10", report.n0_log10},
            {"n1_log10", report.n1_log10},
            {"ratio_log10", report.ratio_log10},
            {"n0_scientific", scientific_log10(report.n0_log10)},
            {"n1_scientific", scientific_log10(report.n1_log10)},
            {"n1_over_n0_scientific", scientific_log10(-report.ratio_log10)}};
  if (report.n0) j["n0"] = report.n0->str();
  if (report.n1) j["n1"] = report.n1->str();
  return j;
}

Json to_json(const TightnessCurve& curve) {
  Json points = Json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"n", p.n},
                      {"c_star", p.c_star},
                      {"c_prime_star", p.c_prime_star},
                      {"ratio", p.ratio},
                      {"expected_c_star", p.expected_c_star},
                      {"expected_c_prime_star", p.expected_c_prime_star},
                      {"expected_ratio", p.expected_ratio}});
  }
  return {{"gamma", curve.gamma},
          {"limit", curve.limit},
          {"points", points},
          {"warnings", curve.warnings}};
}

std::string gap_csv_header() {
  return "name,clusters,c_star,c_prime_star,ratio,bound,within_bound";
}

std::string gap_csv_row(const std::string& name, const GapReport& r) {
  std::ostringstream out;
  out << name << ',' << r.clusters << ',' << format_double(r.c_star) << ','
      << format_double(r.c_prime_star) << ',' << format_double(r.ratio) << ','
      << format_double(r.bound) << ',' << (r.within_bound ? "true" : "false");
  return out.str();
}

std::string tightness_csv(const TightnessCurve& curve) {
  std::ostringstream out;
  out << "n,c_star,c_prime_star,ratio,expected_ratio,limit\n";
  for (const auto& p : curve.points) {
    out << p.n << ',' << format_double(p.c_star) << ',' << format_double(p.c_prime_star) << ','
        << format_double(p.ratio) << ',' << format_double(p.expected_ratio) << ','
        << format_double(curve.limit) << '\n';
  }
  return out.str();
}

}  // namespace gclust
