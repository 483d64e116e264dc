#ifndef GCLUST_TOURS_HPP
#define GCLUST_TOURS_HPP

#include <string>
#include <vector>

#include "gclust/clustering.hpp"
#include "gclust/graph.hpp"

namespace gclust {

enum class TourKind { kCycle, kOpenPath };

std::string_view to_string(TourKind kind);

struct Tour {
  std::vector<Vertex> order;
  TourKind kind = TourKind::kCycle;

  friend bool operator==(const Tour&, const Tour&) = default;
};

/// Throws unless the tour is non-empty, repeat-free and within [0, n).
void validate_tour(const Tour& tour, std::size_t n);

double tour_cost(const MetricGraph& graph, const Tour& tour);

/// True iff the visited members of `cluster` form one contiguous block,
/// evaluated cyclically for cycles. Vacuously true with no visited member.
bool is_consecutive(const Tour& tour, const VertexSet& cluster);

/// Edges of the tour with exactly one endpoint in `cluster`.
int inter_set_edges(const Tour& tour, const VertexSet& cluster);

struct DeformReport {
  double input_cost = 0.0;
  double output_cost = 0.0;
  /// Blocks of visited cluster members in the input minus one.
  int extra_visits = 0;
  /// Largest weight among visited cluster members.
  double beta = 0.0;
  /// (2 * extra_visits + 1) * beta.
  double bound = 0.0;
  /// False unless the graph is known metric and the cluster separates with
  /// gamma > 1; the bound is only guaranteed when this holds.
  bool bound_applicable = false;
};

struct DeformResult {
  Tour tour;
  DeformReport report;
};

/// Makes `cluster` consecutive: the members are pulled forward to the first
/// member's position, keeping their relative order, and the other vertices
/// follow in their original relative order. A tour that already visits the
/// cluster consecutively is returned unchanged. A cycle whose first vertex
/// is a member is first rotated to start at its first non-member.
Tour deform(const Tour& tour, const VertexSet& cluster);
DeformResult deform(const MetricGraph& graph, const Tour& tour, const VertexSet& cluster);

/// Applies deform for every cluster in `order` (indices into `clustering`;
/// empty means stored order). The result does not depend on `order`. Cycles
/// are cut once at an edge internal to no cluster, deformed as a path and
/// rotated back to the original first vertex.
Tour deform_all(const Tour& tour, const ClusterTree& clustering,
                const std::vector<int>& order = {});

/// Base graph with inter-cluster edges surcharged by 1.5 * max(beta_i, beta_j).
/// Vertices outside every cluster act as singletons with beta 0.
class ModifiedGraph {
 public:
  /// Throws for nested clusterings.
  ModifiedGraph(const MetricGraph& base, const ClusterTree& clustering);

  double weight(Vertex a, Vertex b) const;
  const MetricGraph& base() const { return *base_; }
  /// Cluster index of `v`, or -1.
  int cluster_of(Vertex v) const { return cluster_of_[static_cast<std::size_t>(v)]; }

 private:
  const MetricGraph* base_;
  std::vector<int> cluster_of_;
  std::vector<double> beta_of_;
};

double modified_cost(const ModifiedGraph& mg, const Tour& tour);

/// Preorder walk of the minimum spanning tree on `vertices` (root = smallest
/// vertex, children in ascending order), closed into a cycle.
Tour mst_doubling_tour(const MetricGraph& graph, const VertexSet& vertices);

/// Rotates a cycle to start at its smallest vertex and picks the direction
/// with the smaller second vertex.
Tour normalize_cycle(Tour tour);

}  // namespace gclust

#endif  // GCLUST_TOURS_HPP
