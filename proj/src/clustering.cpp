#include "gclust/clustering.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

namespace gclust {

ClusterMetrics cluster_metrics(const MetricGraph& graph, const VertexSet& subset) {
  if (subset.size() < 2) throw Error("beta undefined (empty intra-edge set)");
  if (subset.size() >= graph.size()) throw Error("alpha undefined (no outside vertex)");
  const auto n = static_cast<Vertex>(graph.size());
  std::vector<bool> inside(graph.size(), false);
  for (Vertex v : subset) {
    if (v < 0 || v >= n) throw Error("cluster vertex out of range: " + std::to_string(v));
    inside[static_cast<std::size_t>(v)] = true;
  }
  ClusterMetrics m;
  m.alpha = kInfinity;
  for (Vertex a : subset) {
    const auto row = graph.row(a);
    for (Vertex b = 0; b < n; ++b) {
      const double w = row[static_cast<std::size_t>(b)];
      if (inside[static_cast<std::size_t>(b)]) {
        if (b != a) m.beta = std::max(m.beta, w);
      } else {
        m.alpha = std::min(m.alpha, w);
      }
    }
  }
  m.gamma = m.beta > 0.0 ? m.alpha / m.beta : kInfinity;
  return m;
}

void canonical_sort(std::vector<VertexSet>& sets) {
  std::sort(sets.begin(), sets.end(), [](const VertexSet& a, const VertexSet& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
}

ClusterTree::ClusterTree(double gamma_threshold, std::vector<Cluster> clusters)
    : gamma_threshold_(gamma_threshold), clusters_(std::move(clusters)) {
  std::sort(clusters_.begin(), clusters_.end(), [](const Cluster& a, const Cluster& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() > b.vertices.size();
    return a.vertices < b.vertices;
  });
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    clusters_[i].parent = -1;
    for (std::size_t j = i; j-- > 0;) {
      if (clusters_[j].vertices.size() > clusters_[i].vertices.size() &&
          clusters_[i].vertices.is_subset_of(clusters_[j].vertices)) {
        clusters_[i].parent = static_cast<int>(j);
        break;
      }
    }
  }
}

ClusterTree ClusterTree::FromSets(const MetricGraph& graph, double gamma_threshold,
                                  std::vector<VertexSet> sets) {
  std::vector<Cluster> clusters;
  clusters.reserve(sets.size());
  for (auto& s : sets) {
    const auto metrics = cluster_metrics(graph, s);
    clusters.push_back({std::move(s), metrics, -1});
  }
  return ClusterTree(gamma_threshold, std::move(clusters));
}

std::vector<VertexSet> ClusterTree::sets() const {
  std::vector<VertexSet> out;
  out.reserve(clusters_.size());
  for (const auto& c : clusters_) out.push_back(c.vertices);
  return out;
}

std::vector<int> ClusterTree::children_of(int parent) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    if (clusters_[i].parent == parent) out.push_back(static_cast<int>(i));
  }
  return out;
}

bool ClusterTree::nested() const {
  return std::any_of(clusters_.begin(), clusters_.end(),
                     [](const Cluster& c) { return c.parent >= 0; });
}

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 1.0)) throw Error("uniqueness not guaranteed below Γ = 1");
}

struct Subtree {
  std::vector<Vertex> vertices;
  std::vector<TreeEdge> edges;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void reset(std::size_t v) { parent_[v] = v; }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ClusterTree gamma_clustering(const MetricGraph& graph, double gamma) {
  require_gamma(gamma);
  const std::size_t n = graph.size();
  std::vector<Cluster> found;
  if (n < 3) return ClusterTree(gamma, {});

  std::vector<Subtree> stack;
  stack.push_back({std::vector<Vertex>(n), minimum_spanning_tree(graph)});
  std::iota(stack.back().vertices.begin(), stack.back().vertices.end(), 0);

  DisjointSets components(n);
  std::vector<int> part_of(n, -1);
  while (!stack.empty()) {
    Subtree tree = std::move(stack.back());
    stack.pop_back();

    double alpha = 0.0;
    for (const auto& e : tree.edges) alpha = std::max(alpha, e.weight);

    // Every edge tied at the maximum goes in the same round.
    for (Vertex v : tree.vertices) components.reset(static_cast<std::size_t>(v));
    std::vector<TreeEdge> kept;
    for (const auto& e : tree.edges) {
      if (e.weight < alpha) {
        kept.push_back(e);
        components.unite(static_cast<std::size_t>(e.a), static_cast<std::size_t>(e.b));
      }
    }

    std::vector<Subtree> parts;
    for (Vertex v : tree.vertices) part_of[components.find(static_cast<std::size_t>(v))] = -1;
    for (Vertex v : tree.vertices) {
      const auto root = components.find(static_cast<std::size_t>(v));
      if (part_of[root] < 0) {
        part_of[root] = static_cast<int>(parts.size());
        parts.emplace_back();
      }
      parts[static_cast<std::size_t>(part_of[root])].vertices.push_back(v);
    }
    for (const auto& e : kept) {
      const auto root = components.find(static_cast<std::size_t>(e.a));
      parts[static_cast<std::size_t>(part_of[root])].edges.push_back(e);
    }

    for (auto& part : parts) {
      if (part.vertices.size() < 2) continue;
      double beta = 0.0;
      bool clique = true;
      for (std::size_t i = 0; i < part.vertices.size() && clique; ++i) {
        const auto row = graph.row(part.vertices[i]);
        for (std::size_t j = i + 1; j < part.vertices.size(); ++j) {
          const double w = row[static_cast<std::size_t>(part.vertices[j])];
          if (std::isinf(w)) {
            clique = false;
            break;
          }
          beta = std::max(beta, w);
        }
      }
      if (clique && meets_threshold(alpha, beta, gamma, graph.integral())) {
        found.push_back({VertexSet(part.vertices),
                         {alpha, beta, beta > 0.0 ? alpha / beta : kInfinity}, -1});
      }
      stack.push_back(std::move(part));
    }
  }
  return ClusterTree(gamma, std::move(found));
}

std::vector<VertexSet> brute_force_clusters(const MetricGraph& graph, double gamma) {
  require_gamma(gamma);
  const std::size_t n = graph.size();
  if (n > kBruteForceCap) throw Error("oracle size cap");
  std::vector<VertexSet> out;
  const std::uint32_t full = (n == 0) ? 0u : ((1u << n) - 1u);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const int count = std::popcount(mask);
    if (count < 2) continue;
    double alpha = kInfinity;
    double beta = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (!(mask >> a & 1u)) continue;
      const auto row = graph.row(static_cast<Vertex>(a));
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a) continue;
        if (mask >> b & 1u) {
          beta = std::max(beta, row[b]);
        } else {
          alpha = std::min(alpha, row[b]);
        }
      }
    }
    if (meets_threshold(alpha, beta, gamma, graph.integral())) {
      std::vector<Vertex> members;
      for (std::size_t v = 0; v < n; ++v) {
        if (mask >> v & 1u) members.push_back(static_cast<Vertex>(v));
      }
      out.emplace_back(std::move(members));
    }
  }
  canonical_sort(out);
  return out;
}

std::vector<std::string> verify_clustering(const MetricGraph& graph, const ClusterTree& tree) {
  std::vector<std::string> issues;
  const auto& clusters = tree.clusters();
  const std::size_t n = graph.size();
  auto name = [](std::size_t i) { return "cluster " + std::to_string(i); };

  std::vector<bool> valid(clusters.size(), true);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const auto& c = clusters[i];
    const std::size_t size = c.vertices.size();
    if (size < 2 || size + 1 > n) {
      issues.push_back(name(i) + ": size " + std::to_string(size) +
                       " outside [2, " + std::to_string(n > 0 ? n - 1 : 0) + "]");
      valid[i] = false;
      continue;
    }
    if (c.vertices[0] < 0 || static_cast<std::size_t>(c.vertices[size - 1]) >= n) {
      issues.push_back(name(i) + ": vertex index out of range");
      valid[i] = false;
      continue;
    }
    const auto m = cluster_metrics(graph, c.vertices);
    if (!meets_threshold(m.alpha, m.beta, tree.gamma_threshold(), graph.integral())) {
      std::ostringstream msg;
      msg << name(i) << ": gamma " << m.gamma << " below threshold "
          << tree.gamma_threshold();
      issues.push_back(msg.str());
    }
    if (m.alpha != c.metrics.alpha || m.beta != c.metrics.beta) {
      std::ostringstream msg;
      msg << name(i) << ": stored (alpha " << c.metrics.alpha << ", beta " << c.metrics.beta
          << ") differs from recomputed (alpha " << m.alpha << ", beta " << m.beta << ")";
      issues.push_back(msg.str());
    }
  }

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      const auto& a = clusters[i].vertices;
      const auto& b = clusters[j].vertices;
      if (a == b) {
        issues.push_back(name(i) + " and " + name(j) + ": duplicate");
      } else if (a.intersects(b) && !a.is_subset_of(b) && !b.is_subset_of(a)) {
        issues.push_back(name(i) + " and " + name(j) + ": overlap without nesting");
      }
    }
  }

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    int expected = -1;
    std::size_t best = 0;
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      if (j == i) continue;
      const auto& sup = clusters[j].vertices;
      if (sup.size() > clusters[i].vertices.size() && clusters[i].vertices.is_subset_of(sup) &&
          (expected < 0 || sup.size() < best)) {
        expected = static_cast<int>(j);
        best = sup.size();
      }
    }
    if (clusters[i].parent != expected) {
      issues.push_back(name(i) + ": parent " + std::to_string(clusters[i].parent) +
                       ", expected " + std::to_string(expected));
    }
  }
  return issues;
}

}  // namespace gclust
