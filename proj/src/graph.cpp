#include "gclust/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gclust {

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSet VertexSet::Range(Vertex count) {
  std::vector<Vertex> all(static_cast<std::size_t>(count));
  std::iota(all.begin(), all.end(), 0);
  return VertexSet(std::move(all));
}

bool VertexSet::contains(Vertex v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

bool VertexSet::is_subset_of(const VertexSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

bool VertexSet::intersects(const VertexSet& other) const {
  auto i = members_.begin();
  auto j = other.members_.begin();
  while (i != members_.end() && j != other.members_.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

MetricGraph::MetricGraph(std::size_t n, std::vector<double> weights,
                         std::vector<std::string> labels)
    : n_(n), weights_(std::move(weights)), labels_(std::move(labels)) {
  if (weights_.size() != n_ * n_) {
    throw Error("weight matrix must have n*n entries");
  }
  if (!labels_.empty() && labels_.size() != n_) {
    throw Error("label count does not match vertex count");
  }
  constexpr double kExactLimit = 9007199254740992.0;  // 2^53
  for (std::size_t a = 0; a < n_; ++a) {
    if (weights_[a * n_ + a] != 0.0) {
      std::ostringstream msg;
      msg << "non-zero diagonal weight at vertex " << a;
      throw Error(msg.str());
    }
    for (std::size_t b = a + 1; b < n_; ++b) {
      const double w = weights_[a * n_ + b];
      if (w != weights_[b * n_ + a]) {
        std::ostringstream msg;
        msg << "asymmetric weights between " << a << " and " << b
            << "; only symmetric graphs are supported";
        throw Error(msg.str());
      }
      if (std::isnan(w) || w < 0.0) {
        std::ostringstream msg;
        msg << "negative or NaN weight between " << a << " and " << b;
        throw Error(msg.str());
      }
      if (std::isinf(w)) continue;
      max_weight_ = std::max(max_weight_, w);
      if (integral_ && (w != std::floor(w) || w >= kExactLimit)) {
        integral_ = false;
      }
    }
  }
  origin_.resize(n_);
  std::iota(origin_.begin(), origin_.end(), 0);
}

std::string MetricGraph::label(Vertex v) const {
  if (!labels_.empty()) return labels_[static_cast<std::size_t>(v)];
  return std::to_string(v);
}

double default_metric_tolerance(const MetricGraph& graph) {
  return 1e-9 * graph.max_weight();
}

std::vector<Triple> check_metric(MetricGraph& graph, double tol) {
  std::vector<Triple> violations;
  const auto n = static_cast<Vertex>(graph.size());
  for (Vertex a = 0; a < n; ++a) {
    const auto row_a = graph.row(a);
    for (Vertex b = 0; b < n; ++b) {
      if (b == a) continue;
      const double ab = row_a[static_cast<std::size_t>(b)];
      const auto row_b = graph.row(b);
      for (Vertex c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        if (row_a[static_cast<std::size_t>(c)] >
            ab + row_b[static_cast<std::size_t>(c)] + tol) {
          violations.push_back({a, b, c});
        }
      }
    }
  }
  graph.set_metric_status(violations.empty() ? MetricStatus::kMetric
                                             : MetricStatus::kViolations);
  return violations;
}

std::vector<Triple> check_metric(MetricGraph& graph) {
  return check_metric(graph, default_metric_tolerance(graph));
}

MetricGraph induced_subgraph(const MetricGraph& graph, const VertexSet& subset) {
  if (subset.empty()) throw Error("empty induced subgraph");
  const std::size_t k = subset.size();
  for (Vertex v : subset) {
    if (v < 0 || static_cast<std::size_t>(v) >= graph.size()) {
      throw Error("induced subgraph vertex out of range: " + std::to_string(v));
    }
  }
  std::vector<double> w(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      w[i * k + j] = graph.weight(subset[i], subset[j]);
    }
  }
  std::vector<std::string> labels;
  if (!graph.labels().empty()) {
    for (Vertex v : subset) labels.push_back(graph.label(v));
  }
  MetricGraph sub(k, std::move(w), std::move(labels));
  for (std::size_t i = 0; i < k; ++i) {
    sub.origin_[i] = graph.origin()[static_cast<std::size_t>(subset[i])];
  }
  if (graph.metric_status() == MetricStatus::kMetric) {
    sub.metric_status_ = MetricStatus::kMetric;
  }
  return sub;
}

std::vector<TreeEdge> minimum_spanning_tree(const MetricGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<TreeEdge> edges;
  if (n <= 1) return edges;
  edges.reserve(n - 1);

  std::vector<double> key(n, kInfinity);
  std::vector<Vertex> parent(n, -1);
  std::vector<bool> in_tree(n, false);
  key[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (next == n || key[v] < key[next])) next = v;
    }
    if (std::isinf(key[next])) throw Error("graph is disconnected");
    in_tree[next] = true;
    if (parent[next] >= 0) {
      edges.push_back({parent[next], static_cast<Vertex>(next), key[next]});
    }
    const auto row = graph.row(static_cast<Vertex>(next));
    for (std::size_t v = 0; v < n; ++v) {
      // Strict comparison keeps the earliest-attached parent; for parents
      // attached at equal key the scan order is by index.
      if (!in_tree[v] && row[v] < key[v]) {
        key[v] = row[v];
        parent[v] = static_cast<Vertex>(next);
      } else if (!in_tree[v] && row[v] == key[v] && !std::isinf(row[v]) &&
                 static_cast<Vertex>(next) < parent[v]) {
        parent[v] = static_cast<Vertex>(next);
      }
    }
  }
  return edges;
}

double total_weight(std::span<const TreeEdge> edges) {
  double sum = 0.0;
  for (const auto& e : edges) sum += e.weight;
  return sum;
}

bool meets_threshold(double alpha, double beta, double gamma, bool integral) {
  // A zero-weight leaving edge never separates, even from a zero-diameter set.
  if (alpha <= 0.0) return false;
  if (beta <= 0.0 || std::isinf(alpha)) return true;
  if (integral && std::isfinite(gamma) && gamma > 0.0) {
    int exponent = 0;
    const double fraction = std::frexp(gamma, &exponent);
    // gamma = mantissa * 2^(exponent - 53) with an exact 53-bit mantissa.
    auto mantissa = static_cast<std::int64_t>(std::ldexp(fraction, 53));
    int shift = 53 - exponent;
    while (shift > 0 && (mantissa & 1) == 0) {
      mantissa >>= 1;
      --shift;
    }
    if (shift >= 0 && shift <= 60) {
      using Wide = __int128;
      const Wide lhs = static_cast<Wide>(static_cast<std::int64_t>(alpha)) << shift;
      const Wide rhs = static_cast<Wide>(mantissa) *
                       static_cast<Wide>(static_cast<std::int64_t>(beta));
      return lhs >= rhs;
    }
  }
  const double rhs = gamma * beta;
  return alpha >= rhs - kRelativeTolerance * rhs;
}

}  // namespace gclust
