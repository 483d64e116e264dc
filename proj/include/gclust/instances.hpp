#ifndef GCLUST_INSTANCES_HPP
#define GCLUST_INSTANCES_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gclust/clustering.hpp"
#include "gclust/graph.hpp"

namespace gclust {

/// Scalable lower-bound family for the clustered/unclustered cost gap.
///
/// Vertices come in triples (bottom, top, top): triple k holds vertices
/// 3k (bottom) and 3k+1, 3k+2 (top row). The top row forms the cluster.
/// Weights: top-top beta, bottom-bottom 2*alpha + beta, bottom-top
/// alpha + beta, except along the ring
///
///   b0 t0 u0 b1 u1 t1 b2 t2 u2 b3 u3 t3 ...  (back to b0)
///
/// (t_k = 3k+1, u_k = 3k+2, the pair order alternates with k) where every
/// ring edge touching a bottom vertex costs alpha. The ring is an optimal
/// tour of cost (n+1)(2*alpha + beta); the best tour that keeps the top row
/// together costs (n+1)(2*alpha + 3*beta) - 2*beta.
struct LowerBoundInstance {
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  /// (bottom, top, top) per triple.
  std::vector<std::array<Vertex, 3>> triples;
  VertexSet cluster;
  MetricGraph graph;
  /// The ring tour described above.
  std::vector<Vertex> ring;
};

LowerBoundInstance gen_lower_bound(int n, double alpha, double beta);

/// Plain-text grid: '#' obstacle, '.' free, 'W' waypoint, one row per line.
struct GridOfficeMap {
  int width = 0;
  int height = 0;
  /// Row-major, true for obstacle cells.
  std::vector<bool> obstacle;
  /// (column, row) of each waypoint in reading order.
  std::vector<std::pair<int, int>> waypoints;

  bool blocked(int col, int row) const {
    return obstacle[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                    static_cast<std::size_t>(col)];
  }
};

GridOfficeMap parse_office_map(std::string_view text);
GridOfficeMap read_office_map_file(const std::string& path);

/// Waypoint graph with 4-connected obstacle-avoiding shortest-path lengths.
MetricGraph gen_office(const GridOfficeMap& map);

struct PlantedOptions {
  double margin = 0.05;
};

struct PlantedInstance {
  MetricGraph graph;
  ClusterTree clusters;
  /// Block index of each vertex; blocks of size one are background vertices.
  std::vector<int> block_of;
};

/// Random metric graph with planted clusters of the given sizes, all of which
/// have separation above `gamma` and are the only such clusters. See the
/// README for the weight ranges.
PlantedInstance gen_planted(const std::vector<int>& cluster_sizes, double gamma,
                            std::uint64_t seed, PlantedOptions options = {});

/// Uniform random points in the unit square scaled by `scale`, Euclidean
/// distances (not rounded).
MetricGraph gen_random_euclidean(int n, std::uint64_t seed, double scale = 100.0);

/// Shortest-path (metric) closure of a graph; missing edges stay missing
/// only if unreachable.
MetricGraph metric_closure(const MetricGraph& graph);

}  // namespace gclust

#endif  // GCLUST_INSTANCES_HPP
