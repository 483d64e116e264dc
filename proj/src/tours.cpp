#include "gclust/tours.hpp"

#include <algorithm>
#include <cmath>

namespace gclust {

std::string_view to_string(TourKind kind) {
  return kind == TourKind::kCycle ? "cycle" : "open_path";
}

void validate_tour(const Tour& tour, std::size_t n) {
  if (tour.order.empty()) throw Error("tour is empty");
  std::vector<bool> seen(n, false);
  for (Vertex v : tour.order) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      throw Error("tour vertex out of range: " + std::to_string(v));
    }
    if (seen[static_cast<std::size_t>(v)]) {
      throw Error("tour repeats vertex " + std::to_string(v));
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

double tour_cost(const MetricGraph& graph, const Tour& tour) {
  const auto& o = tour.order;
  double cost = 0.0;
  for (std::size_t i = 1; i < o.size(); ++i) cost += graph.weight(o[i - 1], o[i]);
  if (tour.kind == TourKind::kCycle && o.size() > 1) cost += graph.weight(o.back(), o.front());
  return cost;
}

namespace {

std::vector<bool> membership(const Tour& tour, const VertexSet& cluster) {
  std::vector<bool> in(tour.order.size());
  for (std::size_t i = 0; i < tour.order.size(); ++i) in[i] = cluster.contains(tour.order[i]);
  return in;
}

// Maximal runs of members; for cycles a run may wrap around the end.
int count_blocks(const std::vector<bool>& in, bool cyclic) {
  const std::size_t k = in.size();
  int blocks = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!in[i]) continue;
    const bool prev_in = i > 0 ? in[i - 1] : (cyclic && in[k - 1]);
    if (!prev_in) ++blocks;
  }
  // Every position is a member: one block even though no run has a start.
  if (blocks == 0 && k > 0 && in[0]) blocks = 1;
  return blocks;
}

// Members move to the first member's slot; the rest keeps its order.
std::vector<Vertex> pull_forward(const std::vector<Vertex>& order, const VertexSet& cluster) {
  std::vector<Vertex> out;
  out.reserve(order.size());
  std::size_t first = 0;
  while (first < order.size() && !cluster.contains(order[first])) out.push_back(order[first++]);
  for (std::size_t i = first; i < order.size(); ++i) {
    if (cluster.contains(order[i])) out.push_back(order[i]);
  }
  for (std::size_t i = first; i < order.size(); ++i) {
    if (!cluster.contains(order[i])) out.push_back(order[i]);
  }
  return out;
}

}  // namespace

bool is_consecutive(const Tour& tour, const VertexSet& cluster) {
  return count_blocks(membership(tour, cluster), tour.kind == TourKind::kCycle) <= 1;
}

int inter_set_edges(const Tour& tour, const VertexSet& cluster) {
  const auto in = membership(tour, cluster);
  int count = 0;
  for (std::size_t i = 1; i < in.size(); ++i) count += in[i] != in[i - 1];
  if (tour.kind == TourKind::kCycle && in.size() > 1) count += in.back() != in.front();
  return count;
}

Tour deform(const Tour& tour, const VertexSet& cluster) {
  if (is_consecutive(tour, cluster)) return tour;
  Tour out = tour;
  if (tour.kind == TourKind::kCycle && cluster.contains(tour.order.front())) {
    // Not consecutive, so a non-member exists.
    const auto it = std::find_if(tour.order.begin(), tour.order.end(),
                                 [&](Vertex v) { return !cluster.contains(v); });
    std::rotate(out.order.begin(), out.order.begin() + (it - tour.order.begin()),
                out.order.end());
  }
  out.order = pull_forward(out.order, cluster);
  return out;
}

DeformResult deform(const MetricGraph& graph, const Tour& tour, const VertexSet& cluster) {
  DeformResult result;
  result.tour = deform(tour, cluster);
  auto& r = result.report;
  r.input_cost = tour_cost(graph, tour);
  r.output_cost = tour_cost(graph, result.tour);
  const int blocks = count_blocks(membership(tour, cluster), tour.kind == TourKind::kCycle);
  r.extra_visits = std::max(0, blocks - 1);

  std::vector<Vertex> visited;
  for (Vertex v : tour.order) {
    if (cluster.contains(v)) visited.push_back(v);
  }
  for (std::size_t i = 0; i < visited.size(); ++i) {
    for (std::size_t j = i + 1; j < visited.size(); ++j) {
      r.beta = std::max(r.beta, graph.weight(visited[i], visited[j]));
    }
  }
  r.bound = (2.0 * r.extra_visits + 1.0) * r.beta;
  if (graph.metric_status() == MetricStatus::kMetric && cluster.size() >= 2 &&
      cluster.size() < graph.size()) {
    const auto m = cluster_metrics(graph, cluster);
    r.bound_applicable = m.alpha > m.beta;
  }
  return result;
}

Tour deform_all(const Tour& tour, const ClusterTree& clustering, const std::vector<int>& order) {
  std::vector<int> sequence = order;
  if (sequence.empty()) {
    for (std::size_t i = 0; i < clustering.size(); ++i) sequence.push_back(static_cast<int>(i));
  }
  for (int c : sequence) {
    if (c < 0 || static_cast<std::size_t>(c) >= clustering.size()) {
      throw Error("cluster index out of range: " + std::to_string(c));
    }
  }
  Tour out = tour;
  if (out.order.size() <= 1) return out;

  std::size_t cut = 0;
  if (tour.kind == TourKind::kCycle) {
    // Start after an edge that no cluster contains; an edge leaving a
    // top-level cluster always qualifies.
    const std::size_t k = tour.order.size();
    for (std::size_t i = 0; i < k; ++i) {
      const Vertex a = tour.order[(i + k - 1) % k];
      const Vertex b = tour.order[i];
      const bool internal = std::any_of(
          clustering.clusters().begin(), clustering.clusters().end(),
          [&](const Cluster& c) { return c.vertices.contains(a) && c.vertices.contains(b); });
      if (!internal) {
        cut = i;
        break;
      }
    }
    std::rotate(out.order.begin(), out.order.begin() + static_cast<std::ptrdiff_t>(cut),
                out.order.end());
  }
  for (int c : sequence) {
    const auto& members = clustering[static_cast<std::size_t>(c)].vertices;
    Tour path{out.order, TourKind::kOpenPath};
    if (!is_consecutive(path, members)) out.order = pull_forward(out.order, members);
  }
  if (tour.kind == TourKind::kCycle) {
    const auto it = std::find(out.order.begin(), out.order.end(), tour.order.front());
    std::rotate(out.order.begin(), it, out.order.end());
  }
  return out;
}

ModifiedGraph::ModifiedGraph(const MetricGraph& base, const ClusterTree& clustering)
    : base_(&base), cluster_of_(base.size(), -1) {
  if (clustering.nested()) throw Error("Ĝ ambiguous under nesting");
  for (std::size_t i = 0; i < clustering.size(); ++i) {
    const auto& c = clustering[i];
    for (Vertex v : c.vertices) {
      if (v < 0 || static_cast<std::size_t>(v) >= base.size()) {
        throw Error("cluster vertex out of range: " + std::to_string(v));
      }
      cluster_of_[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
    beta_of_.push_back(c.metrics.beta);
  }
}

double ModifiedGraph::weight(Vertex a, Vertex b) const {
  const double w = base_->weight(a, b);
  const int ca = cluster_of(a);
  const int cb = cluster_of(b);
  if (a == b || (ca == cb && ca >= 0)) return w;
  const double ba = ca >= 0 ? beta_of_[static_cast<std::size_t>(ca)] : 0.0;
  const double bb = cb >= 0 ? beta_of_[static_cast<std::size_t>(cb)] : 0.0;
  return w + 1.5 * std::max(ba, bb);
}

double modified_cost(const ModifiedGraph& mg, const Tour& tour) {
  const auto& o = tour.order;
  double cost = 0.0;
  for (std::size_t i = 1; i < o.size(); ++i) cost += mg.weight(o[i - 1], o[i]);
  if (tour.kind == TourKind::kCycle && o.size() > 1) cost += mg.weight(o.back(), o.front());
  return cost;
}

Tour mst_doubling_tour(const MetricGraph& graph, const VertexSet& vertices) {
  if (vertices.empty()) throw Error("MST tour needs at least one vertex");
  const auto sub = induced_subgraph(graph, vertices);
  const std::size_t k = sub.size();
  std::vector<std::vector<Vertex>> children(k);
  for (const auto& e : minimum_spanning_tree(sub)) {
    children[static_cast<std::size_t>(e.a)].push_back(e.b);
  }
  for (auto& c : children) std::sort(c.begin(), c.end());

  // Shortcutting the doubled tree's Euler tour keeps first appearances,
  // which is exactly the preorder.
  Tour tour;
  std::vector<Vertex> stack{0};
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    tour.order.push_back(vertices[static_cast<std::size_t>(v)]);
    const auto& c = children[static_cast<std::size_t>(v)];
    for (auto it = c.rbegin(); it != c.rend(); ++it) stack.push_back(*it);
  }
  return tour;
}

Tour normalize_cycle(Tour tour) {
  if (tour.kind != TourKind::kCycle || tour.order.size() < 3) {
    if (tour.kind == TourKind::kCycle && !tour.order.empty()) {
      const auto it = std::min_element(tour.order.begin(), tour.order.end());
      std::rotate(tour.order.begin(), it, tour.order.end());
    }
    return tour;
  }
  auto& o = tour.order;
  std::rotate(o.begin(), std::min_element(o.begin(), o.end()), o.end());
  if (o.back() < o[1]) std::reverse(o.begin() + 1, o.end());
  return tour;
}

}  // namespace gclust
