#ifndef GCLUST_GRAPH_HPP
#define GCLUST_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gclust {

/// Base error type for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vertex = std::int32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class MetricStatus { kUnchecked, kMetric, kViolations };

/// Sorted, duplicate-free set of vertex indices.
class VertexSet {
 public:
  VertexSet() = default;
  /// Sorts and deduplicates `members`.
  explicit VertexSet(std::vector<Vertex> members);
  VertexSet(std::initializer_list<Vertex> members)
      : VertexSet(std::vector<Vertex>(members)) {}

  static VertexSet Range(Vertex count);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Vertex v) const;
  bool is_subset_of(const VertexSet& other) const;
  bool intersects(const VertexSet& other) const;

  std::span<const Vertex> members() const { return members_; }
  Vertex operator[](std::size_t i) const { return members_[i]; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> members_;
};

/// Complete undirected weighted graph stored as a dense symmetric matrix.
///
/// An infinite weight marks a missing edge; every other weight must be finite
/// and non-negative. The graph is immutable after construction except for the
/// cached metric status written by check_metric().
class MetricGraph {
 public:
  MetricGraph() = default;

  /// Builds a graph from a row-major `n x n` matrix. Throws if the matrix is
  /// not square, not symmetric, has a non-zero diagonal or a negative entry.
  MetricGraph(std::size_t n, std::vector<double> weights,
              std::vector<std::string> labels = {});

  /// Builds a graph from the symmetric completion of a weight function.
  template <typename WeightFn>
  static MetricGraph FromFunction(std::size_t n, WeightFn&& fn) {
    std::vector<double> w(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double value = fn(static_cast<Vertex>(a), static_cast<Vertex>(b));
        w[a * n + b] = value;
        w[b * n + a] = value;
      }
    }
    return MetricGraph(n, std::move(w));
  }

  std::size_t size() const { return n_; }
  double weight(Vertex a, Vertex b) const {
    return weights_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)];
  }
  std::span<const double> row(Vertex a) const {
    return {weights_.data() + static_cast<std::size_t>(a) * n_, n_};
  }
  std::span<const double> weights() const { return weights_; }

  /// True when every finite weight is an integer representable exactly in a
  /// double. Threshold comparisons are then evaluated exactly.
  bool integral() const { return integral_; }
  double max_weight() const { return max_weight_; }

  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(Vertex v) const;

  /// Original vertex index for each vertex of an induced subgraph; identity
  /// for graphs not produced by induced_subgraph().
  const std::vector<Vertex>& origin() const { return origin_; }

  MetricStatus metric_status() const { return metric_status_; }
  void set_metric_status(MetricStatus status) { metric_status_ = status; }

  friend bool operator==(const MetricGraph& lhs, const MetricGraph& rhs) {
    return lhs.n_ == rhs.n_ && lhs.weights_ == rhs.weights_;
  }

 private:
  friend MetricGraph induced_subgraph(const MetricGraph&, const VertexSet&);

  std::size_t n_ = 0;
  std::vector<double> weights_;
  std::vector<std::string> labels_;
  std::vector<Vertex> origin_;
  bool integral_ = true;
  double max_weight_ = 0.0;
  MetricStatus metric_status_ = MetricStatus::kUnchecked;
};

struct Triple {
  Vertex a, b, c;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Default triangle-inequality tolerance: 1e-9 times the largest finite weight.
double default_metric_tolerance(const MetricGraph& graph);

/// Returns every ordered triple with w(a,c) > w(a,b) + w(b,c) + tol and records
/// the outcome on the graph. Reports rather than rejects.
std::vector<Triple> check_metric(MetricGraph& graph, double tol);
std::vector<Triple> check_metric(MetricGraph& graph);

/// Subgraph induced by `subset`, re-indexed 0..|subset|-1. The returned graph's
/// origin() maps back to the indices of `graph` (composed through earlier
/// extractions) and labels are carried over.
MetricGraph induced_subgraph(const MetricGraph& graph, const VertexSet& subset);

struct TreeEdge {
  Vertex a, b;
  double weight;
  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// Prim's algorithm on the dense matrix, O(n^2). Grows from vertex 0; among
/// equal keys the smallest vertex index is attached first, and a vertex's
/// parent is the smallest-index tree vertex achieving its key. Edges are
/// reported as (parent, child) in attachment order. Missing edges are never
/// used; a disconnected graph throws.
std::vector<TreeEdge> minimum_spanning_tree(const MetricGraph& graph);

double total_weight(std::span<const TreeEdge> edges);

/// Threshold test alpha >= gamma * beta.
///
/// With integral weights the comparison is exact: gamma is decomposed into
/// its binary fraction and both sides are compared in 128-bit integers.
/// Otherwise a relative tolerance of kRelativeTolerance is granted.
bool meets_threshold(double alpha, double beta, double gamma, bool integral);

inline constexpr double kRelativeTolerance = 1e-12;

}  // namespace gclust

#endif  // GCLUST_GRAPH_HPP
