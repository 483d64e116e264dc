#ifndef GCLUST_CLUSTERING_HPP
#define GCLUST_CLUSTERING_HPP

#include <optional>
#include <string>
#include <vector>

#include "gclust/graph.hpp"

namespace gclust {

/// Separation of a cluster: alpha is the cheapest edge leaving it, beta the
/// most expensive edge inside it, gamma their ratio.
struct ClusterMetrics {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Throws for |subset| < 2 (no internal edge) and for subset == V (no
/// leaving edge).
ClusterMetrics cluster_metrics(const MetricGraph& graph, const VertexSet& subset);

struct Cluster {
  VertexSet vertices;
  ClusterMetrics metrics;
  /// Index of the smallest stored strict superset, or -1 for a top-level
  /// cluster.
  int parent = -1;
};

/// Laminar family of non-trivial proper clusters. Singletons and the full
/// vertex set are implicit and never stored. Clusters are kept in canonical
/// order: size descending, then lexicographic.
class ClusterTree {
 public:
  ClusterTree() = default;
  ClusterTree(double gamma_threshold, std::vector<Cluster> clusters);

  /// Builds a tree from bare vertex sets, computing metrics on `graph`.
  static ClusterTree FromSets(const MetricGraph& graph, double gamma_threshold,
                              std::vector<VertexSet> sets);

  double gamma_threshold() const { return gamma_threshold_; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::size_t size() const { return clusters_.size(); }
  bool empty() const { return clusters_.empty(); }
  const Cluster& operator[](std::size_t i) const { return clusters_[i]; }

  std::vector<VertexSet> sets() const;
  /// Indices of clusters whose parent is `parent` (-1 for top level).
  std::vector<int> children_of(int parent) const;
  bool nested() const;

 private:
  double gamma_threshold_ = 0.0;
  std::vector<Cluster> clusters_;
};

/// Sorts by size descending, then lexicographically.
void canonical_sort(std::vector<VertexSet>& sets);

/// MST edge-deletion clustering. Returns the unique maximal clustering whose
/// members all have separation >= gamma. Requires gamma > 1.
ClusterTree gamma_clustering(const MetricGraph& graph, double gamma);

/// Exhaustive oracle over every proper subset of size >= 2. Capped at
/// kBruteForceCap vertices.
std::vector<VertexSet> brute_force_clusters(const MetricGraph& graph, double gamma);
inline constexpr std::size_t kBruteForceCap = 16;

/// Recomputes every metric and checks the ClusterTree invariants. Returns one
/// human-readable line per violation.
std::vector<std::string> verify_clustering(const MetricGraph& graph, const ClusterTree& tree);

}  // namespace gclust

#endif  // GCLUST_CLUSTERING_HPP
