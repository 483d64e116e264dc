#include "gclust/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "gclust/random.hpp"

namespace gclust {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kFeasible:
      return "feasible";
    case SolveStatus::kFeasibleTimeout:
      return "feasible_timeout";
    case SolveStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

bool is_feasible(const Tour& tour, const ClusterTree& clustering) {
  return std::all_of(clustering.clusters().begin(), clustering.clusters().end(),
                     [&](const Cluster& c) { return is_consecutive(tour, c.vertices); });
}

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
 public:
  explicit Deadline(std::chrono::duration<double> budget) : start_(Clock::now()), budget_(budget) {}
  bool expired() const { return Clock::now() - start_ >= budget_; }
  std::chrono::duration<double> elapsed() const { return Clock::now() - start_; }
  bool zero() const { return budget_.count() <= 0.0; }

 private:
  Clock::time_point start_;
  std::chrono::duration<double> budget_;
};

struct Timeout {};

double tie_tolerance(const MetricGraph& graph) {
  return graph.integral() ? 0.0 : 1e-9 * std::max(1.0, graph.max_weight());
}

void require_vertices(const MetricGraph& graph) {
  if (graph.size() == 0) throw Error("cannot solve an empty graph");
}

SolveReport trivial_report(const MetricGraph& graph, std::string name) {
  SolveReport r;
  r.tour.order.resize(graph.size());
  std::iota(r.tour.order.begin(), r.tour.order.end(), 0);
  r.cost = tour_cost(graph, r.tour);
  r.status = SolveStatus::kOptimal;
  r.solver_name = std::move(name);
  return r;
}

SolveReport finish(const MetricGraph& graph, Tour tour, SolveStatus status, std::uint64_t nodes,
                   const Deadline& deadline, std::string name) {
  SolveReport r;
  r.tour = normalize_cycle(std::move(tour));
  r.cost = tour_cost(graph, r.tour);
  r.status = status;
  r.nodes_expanded = nodes;
  r.elapsed = deadline.elapsed();
  r.solver_name = std::move(name);
  return r;
}

// Consecutiveness bookkeeping for a path grown from vertex 0. A cluster
// without the root may be entered once and left only when complete. A
// cluster holding the root may be left once and re-entered only after every
// outside vertex is on the path; the closing edge then never breaks a rule.
class ClusterGuard {
 public:
  ClusterGuard(const MetricGraph& graph, const ClusterTree* clustering) {
    if (clustering == nullptr) return;
    const std::size_t n = graph.size();
    member_.assign(n, {});
    for (std::size_t c = 0; c < clustering->size(); ++c) {
      const auto& set = (*clustering)[c].vertices;
      for (Vertex v : set) member_[static_cast<std::size_t>(v)].push_back(static_cast<int>(c));
      State s;
      s.size = static_cast<int>(set.size());
      s.outside = static_cast<int>(n - set.size());
      s.has_root = set.contains(0);
      s.count = s.has_root ? 1 : 0;
      states_.push_back(s);
    }
    in_.assign(states_.size(), 0);
  }

  bool active() const { return !states_.empty(); }

  bool allowed(Vertex u, Vertex v) {
    if (states_.empty()) return true;
    mark(u, v);
    bool ok = true;
    for (std::size_t c = 0; c < states_.size() && ok; ++c) {
      const auto& s = states_[c];
      const bool in_u = in_[c] & 1;
      const bool in_v = in_[c] & 2;
      if (!in_u && in_v) {
        ok = s.has_root ? s.seen_outside == s.outside : s.count == 0;
      } else if (in_u && !in_v) {
        ok = s.has_root ? !s.left : s.count == s.size;
      }
    }
    unmark(u, v);
    return ok;
  }

  void push(Vertex u, Vertex v) {
    if (states_.empty()) return;
    mark(u, v);
    for (std::size_t c = 0; c < states_.size(); ++c) {
      auto& s = states_[c];
      const bool in_u = in_[c] & 1;
      const bool in_v = in_[c] & 2;
      if (in_v) ++s.count;
      if (s.has_root && !in_v) ++s.seen_outside;
      if (s.has_root && in_u && !in_v) s.left = true;
    }
    unmark(u, v);
  }

  void pop(Vertex u, Vertex v) {
    if (states_.empty()) return;
    mark(u, v);
    for (std::size_t c = 0; c < states_.size(); ++c) {
      auto& s = states_[c];
      const bool in_u = in_[c] & 1;
      const bool in_v = in_[c] & 2;
      if (in_v) --s.count;
      if (s.has_root && !in_v) --s.seen_outside;
      if (s.has_root && in_u && !in_v) s.left = false;
    }
    unmark(u, v);
  }

 private:
  struct State {
    int size = 0;
    int outside = 0;
    int count = 0;
    int seen_outside = 0;
    bool has_root = false;
    bool left = false;
  };

  void mark(Vertex u, Vertex v) {
    for (int c : member_[static_cast<std::size_t>(u)]) in_[static_cast<std::size_t>(c)] |= 1;
    for (int c : member_[static_cast<std::size_t>(v)]) in_[static_cast<std::size_t>(c)] |= 2;
  }
  void unmark(Vertex u, Vertex v) {
    for (int c : member_[static_cast<std::size_t>(u)]) in_[static_cast<std::size_t>(c)] = 0;
    for (int c : member_[static_cast<std::size_t>(v)]) in_[static_cast<std::size_t>(c)] = 0;
  }

  std::vector<std::vector<int>> member_;
  std::vector<State> states_;
  std::vector<unsigned char> in_;
};

class BranchAndBound {
 public:
  BranchAndBound(const MetricGraph& graph, const ClusterTree* clustering,
                 const SolveOptions& options, const Deadline& deadline)
      : graph_(graph),
        n_(graph.size()),
        guard_(graph, clustering),
        options_(options),
        deadline_(deadline),
        tol_(tie_tolerance(graph)),
        integral_(graph.integral()),
        visited_(n_, false),
        key_(n_),
        in_tree_(n_),
        parent_(n_),
        mask_(n_, 0) {
    if (clustering != nullptr) {
      for (const auto& c : clustering->clusters()) {
        if (groups_ == 64) break;
        for (Vertex v : c.vertices) mask_[static_cast<std::size_t>(v)] |= std::uint64_t{1} << groups_;
        ++groups_;
      }
    }
  }

  void seed(const Tour& tour) {
    best_ = normalize_cycle(tour).order;
    best_cost_ = tour_cost(graph_, Tour{best_, TourKind::kCycle});
    if (options_.on_improvement) options_.on_improvement(deadline_.elapsed().count(), best_cost_);
  }

  bool run() {
    pis_.assign(n_ + 1, compute_penalties(true));
    // With clusters the plain bound runs alongside; either may be the
    // tighter one at a given node.
    if (groups_ > 0) plain_pis_.assign(n_ + 1, compute_penalties(false));
    path_.assign(1, 0);
    visited_[0] = true;
    totals_.assign(n_ + 1, -kInfinity);
    try {
      dfs(0.0);
    } catch (const Timeout&) {
      return false;
    }
    return true;
  }

  const std::vector<Vertex>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  void dfs(double cost) {
    ++nodes_;
    if (deadline_.expired()) throw Timeout{};
    const Vertex last = path_.back();
    if (path_.size() == n_) {
      consider(cost + graph_.weight(last, 0));
      return;
    }
    const std::size_t depth = path_.size();
    // Past the incumbent in lexicographic order only strict gains count.
    const bool after = prefix_after_best();
    double limit;
    if (integral_) {
      limit = best_cost_ + (after ? -0.5 : 0.5);
    } else {
      // Penalised bounds carry rounding noise, so ties get a little slack.
      const double slack = std::max(tol_, 1e-9 * std::max(1.0, std::abs(best_cost_)));
      limit = after ? best_cost_ - tol_ + slack - slack * 1e-3 : best_cost_ + slack;
    }
    if (depth > 1) {
      pis_[depth] = pis_[depth - 1];
      // Completions of this prefix are completions of its parent as well.
      totals_[depth] =
          std::max(totals_[depth - 1], cost + path_bound(last, cost, limit, pis_[depth], true));
      if (groups_ > 0 && totals_[depth] <= limit) {
        plain_pis_[depth] = plain_pis_[depth - 1];
        totals_[depth] = std::max(
            totals_[depth], cost + path_bound(last, cost, limit, plain_pis_[depth], false));
      }
      if (totals_[depth] > limit) return;
    }

    // Increasing ids, so the first optimum met is the lexicographic least.
    for (std::size_t v = 1; v < n_; ++v) {
      if (visited_[v]) continue;
      const auto vv = static_cast<Vertex>(v);
      if (!guard_.allowed(last, vv)) continue;
      guard_.push(last, vv);
      visited_[v] = true;
      path_.push_back(vv);
      dfs(cost + graph_.weight(last, vv));
      path_.pop_back();
      visited_[v] = false;
      guard_.pop(last, vv);
    }
  }

  bool prefix_after_best() const {
    if (best_.empty()) return false;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (path_[i] != best_[i]) return path_[i] > best_[i];
    }
    return false;
  }

  void consider(double total) {
    const bool better = total < best_cost_ - tol_;
    const bool tie_but_smaller = !better && total <= best_cost_ + tol_ && path_ < best_;
    if (!better && !tie_but_smaller) return;
    best_ = path_;
    best_cost_ = total;
    if (options_.on_improvement) options_.on_improvement(deadline_.elapsed().count(), total);
  }

  // Any completion is a Hamiltonian path from `last` through the unvisited
  // vertices to 0, hence a spanning tree with both ends of degree one. It
  // also crosses the boundary of every untouched cluster twice and of the
  // open cluster once, clusters holding 0 aside. Penalising vertex degrees and boundary crossings
  // leaves the path cost unchanged up to a constant, and the penalised MST
  // bounds it. A few subgradient steps per node, warm-started from the
  // parent, tighten the bound.
  double path_bound(Vertex last, double cost, double limit, std::vector<double>& pi,
                    bool with_groups) {
    auto& nodes = scratch_;
    nodes.clear();
    nodes.push_back(last);
    nodes.push_back(0);
    const std::uint64_t open = mask_[static_cast<std::size_t>(last)];
    const std::uint64_t rooted = mask_[0];
    std::uint64_t present = open | rooted;
    std::uint64_t everywhere = open & rooted;
    for (std::size_t v = 1; v < n_; ++v) {
      if (!visited_[v]) {
        nodes.push_back(static_cast<Vertex>(v));
        present |= mask_[v];
        everywhere &= mask_[v];
      }
    }
    const std::size_t k = nodes.size();
    if (k == 2) return graph_.weight(last, 0);
    // A cluster holding 0 is crossed twice if the walk has not left it yet
    // and once if it has; with nothing outside it there is no constraint.
    present &= with_groups ? ~everywhere : 0;
    target_.assign(k + groups_, 0);
    for (std::size_t i = 0; i < k; ++i) target_[i] = i < 2 ? 1 : 2;
    for (std::size_t g = 0; g < groups_; ++g) {
      if (!(present >> g & 1)) continue;
      const bool in_open = open >> g & 1;
      target_[k + g] = (rooted >> g & 1) ? (in_open ? 2 : 1) : (in_open ? 1 : 2);
    }
    double best = -kInfinity;
    constexpr int kSteps = 12;
    for (int it = 0; it < kSteps; ++it) {
      double lower = penalised_tree(nodes, pi);
      degrees(nodes);
      double norm = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        lower -= target_[i] * pi[static_cast<std::size_t>(nodes[i])];
        norm += static_cast<double>((degree_[i] - target_[i]) * (degree_[i] - target_[i]));
      }
      for (std::size_t g = 0; g < groups_; ++g) {
        if (!(present >> g & 1)) continue;
        const int d = degree_[k + g] - target_[k + g];
        lower -= target_[k + g] * pi[n_ + g];
        norm += static_cast<double>(d * d);
      }
      // Integral weights make every completion cost integral too.
      best = std::max(best, integral_ ? std::ceil(lower - 1e-6) : lower);
      if (cost + best > limit || norm == 0.0 || !std::isfinite(limit)) break;
      const double step = (limit - cost - lower) / norm;
      for (std::size_t i = 0; i < k; ++i) {
        pi[static_cast<std::size_t>(nodes[i])] += step * (degree_[i] - target_[i]);
      }
      for (std::size_t g = 0; g < groups_; ++g) {
        if (present >> g & 1) pi[n_ + g] += step * (degree_[k + g] - target_[k + g]);
      }
    }
    return best;
  }

  double penalised(Vertex a, Vertex b, const std::vector<double>& pi) const {
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    double w = graph_.weight(a, b) + pi[ua] + pi[ub];
    for (std::uint64_t cross = mask_[ua] ^ mask_[ub]; cross != 0; cross &= cross - 1) {
      w += pi[n_ + static_cast<std::size_t>(std::countr_zero(cross))];
    }
    return w;
  }

  // Prim over `nodes`; tree edges land in edges_ as pairs of node indices.
  double penalised_tree(const std::vector<Vertex>& nodes, const std::vector<double>& pi) {
    const std::size_t k = nodes.size();
    for (std::size_t i = 0; i < k; ++i) {
      key_[i] = kInfinity;
      in_tree_[i] = false;
    }
    key_[0] = 0.0;
    edges_.clear();
    double total = 0.0;
    for (std::size_t step = 0; step < k; ++step) {
      std::size_t next = k;
      for (std::size_t i = 0; i < k; ++i) {
        if (!in_tree_[i] && (next == k || key_[i] < key_[next])) next = i;
      }
      in_tree_[next] = true;
      total += key_[next];
      if (step > 0) edges_.emplace_back(parent_[next], next);
      for (std::size_t i = 0; i < k; ++i) {
        if (in_tree_[i]) continue;
        const double w = penalised(nodes[next], nodes[i], pi);
        if (w < key_[i]) {
          key_[i] = w;
          parent_[i] = next;
        }
      }
    }
    return total;
  }

  // Vertex degrees, then per-cluster crossing counts, of edges_.
  void degrees(const std::vector<Vertex>& nodes) {
    const std::size_t k = nodes.size();
    degree_.assign(k + groups_, 0);
    for (const auto& [i, j] : edges_) {
      ++degree_[i];
      ++degree_[j];
      const std::uint64_t cross = mask_[static_cast<std::size_t>(nodes[i])] ^
                                  mask_[static_cast<std::size_t>(nodes[j])];
      for (std::uint64_t c = cross; c != 0; c &= c - 1) {
        ++degree_[k + static_cast<std::size_t>(std::countr_zero(c))];
      }
    }
  }

  // Subgradient ascent on the 1-tree bound of the whole instance. Any
  // penalty vector gives a valid bound; this one just makes it tight.
  std::vector<double> compute_penalties(bool with_groups) {
    pi_.assign(n_ + groups_, 0.0);
    if (n_ < 8) return pi_;
    const std::size_t active = with_groups ? groups_ : 0;
    std::vector<double> best_pi = pi_;
    std::vector<Vertex> rest;
    for (std::size_t v = 1; v < n_; ++v) rest.push_back(static_cast<Vertex>(v));
    const std::size_t k = rest.size();
    double best_bound = -kInfinity;
    double step = 0.01 * graph_.max_weight();
    const int rounds = static_cast<int>(50 * n_);
    for (int it = 0; it < rounds && step > 1e-7 * graph_.max_weight(); ++it) {
      double tree = penalised_tree(rest, pi_);
      // Vertex 0 joins through its two cheapest penalised edges.
      std::size_t e1 = k, e2 = k;
      for (std::size_t i = 0; i < k; ++i) {
        const double w = penalised(0, rest[i], pi_);
        if (e1 == k || w < penalised(0, rest[e1], pi_)) {
          e2 = e1;
          e1 = i;
        } else if (e2 == k || w < penalised(0, rest[e2], pi_)) {
          e2 = i;
        }
      }
      tree += penalised(0, rest[e1], pi_) + penalised(0, rest[e2], pi_);
      // Index k stands for vertex 0 in the degree count.
      rest.push_back(0);
      edges_.emplace_back(e1, k);
      edges_.emplace_back(e2, k);
      degrees(rest);
      rest.pop_back();
      double bound = tree;
      bool tour = true;
      for (std::size_t i = 0; i <= k; ++i) {
        const auto v = i == k ? std::size_t{0} : static_cast<std::size_t>(rest[i]);
        bound -= 2.0 * pi_[v];
        tour = tour && degree_[i] == 2;
      }
      for (std::size_t g = 0; g < active; ++g) {
        bound -= 2.0 * pi_[n_ + g];
        tour = tour && degree_[k + 1 + g] == 2;
      }
      if (bound > best_bound + 1e-12 * std::max(1.0, std::abs(bound))) {
        best_bound = bound;
        best_pi = pi_;
      } else if (it % 10 == 9) {
        step *= 0.7;
      }
      if (tour) break;
      for (std::size_t i = 0; i <= k; ++i) {
        const auto v = i == k ? std::size_t{0} : static_cast<std::size_t>(rest[i]);
        pi_[v] += step * (degree_[i] - 2);
      }
      for (std::size_t g = 0; g < active; ++g) pi_[n_ + g] += step * (degree_[k + 1 + g] - 2);
    }
    return best_pi;
  }

  const MetricGraph& graph_;
  std::size_t n_;
  ClusterGuard guard_;
  const SolveOptions& options_;
  const Deadline& deadline_;
  double tol_;
  bool integral_;
  std::vector<bool> visited_;
  std::vector<Vertex> path_;
  std::vector<Vertex> best_;
  double best_cost_ = kInfinity;
  std::uint64_t nodes_ = 0;
  std::vector<Vertex> scratch_;
  std::vector<double> key_;
  std::vector<char> in_tree_;
  std::vector<std::size_t> parent_;
  std::vector<double> pi_;
  std::vector<std::vector<double>> pis_;
  std::vector<std::vector<double>> plain_pis_;
  std::vector<double> totals_;
  std::vector<int> degree_;
  std::vector<int> target_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  // Bit g of mask_[v] is set when v lies in cluster g.
  std::vector<std::uint64_t> mask_;
  std::size_t groups_ = 0;
};

// ---- heuristic ----

std::vector<Vertex> nearest_neighbour(const MetricGraph& graph, Vertex start) {
  const std::size_t n = graph.size();
  std::vector<bool> used(n, false);
  std::vector<Vertex> order{start};
  used[static_cast<std::size_t>(start)] = true;
  while (order.size() < n) {
    const auto row = graph.row(order.back());
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!used[v] && (best == n || row[v] < row[best])) best = v;
    }
    used[best] = true;
    order.push_back(static_cast<Vertex>(best));
  }
  return order;
}

void two_opt(const MetricGraph& graph, const ClusterTree* clustering, std::vector<Vertex>& order,
             const Deadline& deadline) {
  const std::size_t k = order.size();
  if (k < 4) return;
  const double tol = 1e-12 * std::max(1.0, graph.max_weight());
  bool improved = true;
  while (improved) {
    improved = false;
    if (deadline.expired()) return;
    for (std::size_t i = 0; i + 2 < k && !improved; ++i) {
      for (std::size_t j = i + 2; j < k && !improved; ++j) {
        if (i == 0 && j == k - 1) continue;
        const Vertex a = order[i];
        const Vertex b = order[i + 1];
        const Vertex c = order[j];
        const Vertex d = order[(j + 1) % k];
        const double delta =
            graph.weight(a, c) + graph.weight(b, d) - graph.weight(a, b) - graph.weight(c, d);
        if (delta >= -tol) continue;
        std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i + 1),
                     order.begin() + static_cast<std::ptrdiff_t>(j + 1));
        if (clustering != nullptr && !is_feasible(Tour{order, TourKind::kCycle}, *clustering)) {
          std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i + 1),
                       order.begin() + static_cast<std::ptrdiff_t>(j + 1));
          continue;
        }
        improved = true;
      }
    }
  }
}

// Moves a segment of up to max_len vertices, possibly reversed, to another
// gap of the cycle. Returns true if any move was taken.
bool or_opt(const MetricGraph& graph, const ClusterTree* clustering, std::vector<Vertex>& order,
            std::size_t max_len, const Deadline& deadline) {
  const std::size_t k = order.size();
  if (k < 5) return false;
  const double tol = 1e-12 * std::max(1.0, graph.max_weight());
  bool any = false;
  bool improved = true;
  std::vector<Vertex> next_order;
  while (improved) {
    improved = false;
    if (deadline.expired()) return any;
    for (std::size_t len = 1; len <= std::min(max_len, k - 3) && !improved; ++len) {
      for (std::size_t i = 1; i + len <= k && !improved; ++i) {
        const Vertex prev = order[i - 1];
        const Vertex first = order[i];
        const Vertex last = order[i + len - 1];
        const Vertex after = order[(i + len) % k];
        const double gain =
            graph.weight(prev, first) + graph.weight(last, after) - graph.weight(prev, after);
        for (std::size_t j = 0; j < k && !improved; ++j) {
          if (j + 1 >= i && j < i + len) continue;
          const Vertex a = order[j];
          const Vertex b = order[(j + 1) % k];
          const double base = graph.weight(a, b);
          for (bool reversed : {false, true}) {
            const double add = reversed ? graph.weight(a, last) + graph.weight(first, b) - base
                                        : graph.weight(a, first) + graph.weight(last, b) - base;
            if (add - gain >= -tol) continue;
            next_order.clear();
            for (std::size_t p = 0; p < k; ++p) {
              if (p >= i && p < i + len) continue;
              next_order.push_back(order[p]);
              if (p == j) {
                if (reversed) {
                  for (std::size_t q = i + len; q-- > i;) next_order.push_back(order[q]);
                } else {
                  for (std::size_t q = i; q < i + len; ++q) next_order.push_back(order[q]);
                }
              }
            }
            if (clustering != nullptr &&
                !is_feasible(Tour{next_order, TourKind::kCycle}, *clustering)) {
              continue;
            }
            order.swap(next_order);
            improved = any = true;
            break;
          }
        }
      }
    }
  }
  return any;
}

void local_search(const MetricGraph& graph, const ClusterTree* clustering,
                  std::vector<Vertex>& order, const Deadline& deadline) {
  std::size_t max_len = 3;
  if (clustering != nullptr) {
    for (const auto& c : clustering->clusters()) max_len = std::max(max_len, c.vertices.size());
  }
  do {
    two_opt(graph, clustering, order, deadline);
  } while (or_opt(graph, clustering, order, max_len, deadline));
}

SolveReport heuristic(const MetricGraph& graph, const ClusterTree* clustering,
                      const SolveOptions& options, std::uint64_t seed, const Deadline& deadline) {
  require_vertices(graph);
  constexpr int kRestarts = 4;
  auto repair = [&](std::vector<Vertex> order) {
    Tour t{std::move(order), TourKind::kCycle};
    if (clustering != nullptr) t = deform_all(t, *clustering);
    return t;
  };

  Tour best = repair(nearest_neighbour(graph, 0));
  if (deadline.zero()) {
    return finish(graph, best, SolveStatus::kFeasibleTimeout, 0, deadline, "heuristic");
  }
  std::uint64_t nodes = 1;
  local_search(graph, clustering, best.order, deadline);
  double best_cost = tour_cost(graph, best);
  if (options.on_improvement) options.on_improvement(deadline.elapsed().count(), best_cost);

  Rng rng(seed);
  const int starts = kRestarts + (clustering != nullptr ? 1 : 0);
  for (int r = 0; r < starts && !deadline.expired(); ++r) {
    std::vector<Vertex> order;
    if (r == kRestarts) {
      // Unconstrained local optimum, then repaired.
      order = nearest_neighbour(graph, 0);
      local_search(graph, nullptr, order, deadline);
    } else {
      order.resize(graph.size());
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
    }
    Tour t = repair(std::move(order));
    local_search(graph, clustering, t.order, deadline);
    ++nodes;
    const double cost = tour_cost(graph, t);
    if (cost < best_cost - tie_tolerance(graph)) {
      best = std::move(t);
      best_cost = cost;
      if (options.on_improvement) options.on_improvement(deadline.elapsed().count(), best_cost);
    }
  }
  const auto status = deadline.expired() ? SolveStatus::kFeasibleTimeout : SolveStatus::kFeasible;
  return finish(graph, best, status, nodes, deadline, "heuristic");
}

// ---- hierarchical decomposition ----

// One level of the cluster tree: the child clusters and loose vertices of a
// cluster (or of the whole vertex set) with their path tables.
class Hierarchy {
 public:
  Hierarchy(const MetricGraph& graph, const ClusterTree& clustering, const Deadline& deadline)
      : graph_(graph), clustering_(clustering), deadline_(deadline) {
    const std::size_t m = clustering.size();
    tables_.resize(m);
    local_.assign(m, std::vector<int>(graph.size(), -1));
    for (std::size_t c = 0; c < m; ++c) {
      const auto& set = clustering[c].vertices;
      for (std::size_t i = 0; i < set.size(); ++i) local_[c][static_cast<std::size_t>(set[i])] = static_cast<int>(i);
    }
    for (int level = -1; level < static_cast<int>(m); ++level) {
      const auto items = items_of(level);
      if (items.size() > kHierarchyWidthCap) {
        throw Error("hierarchy level with " + std::to_string(items.size()) +
                    " children exceeds the width cap");
      }
    }
  }

  SolveReport solve(const SolveOptions& options) {
    // Children before parents: canonical order is by decreasing size.
    for (std::size_t c = clustering_.size(); c-- > 0;) build_table(static_cast<int>(c));

    const auto items = items_of(-1);
    const std::size_t k = items.size();
    std::size_t first = 0;
    while (!contains(items[first], 0)) ++first;
    const auto entries = vertices_of(items[first]);

    double best = kInfinity;
    Vertex best_entry = -1;
    Vertex best_last = -1;
    for (Vertex e : entries) {
      const auto f = run_dp(items, first, e);
      const std::size_t full = (std::size_t{1} << k) - 1;
      for (std::size_t z = 0; z < graph_.size(); ++z) {
        const double v = f[full * graph_.size() + z];
        if (std::isinf(v)) continue;
        if (k > 1 && contains(items[first], static_cast<Vertex>(z))) continue;
        const double total = v + graph_.weight(static_cast<Vertex>(z), e);
        if (total < best) {
          best = total;
          best_entry = e;
          best_last = static_cast<Vertex>(z);
        }
      }
    }
    if (best_entry < 0) throw Error("no feasible clustered tour");
    Tour tour;
    expand_level(items, first, best_entry, best_last, tour.order);
    if (options.on_improvement) options.on_improvement(deadline_.elapsed().count(), best);
    return finish(graph_, std::move(tour), SolveStatus::kOptimal, nodes_, deadline_,
                  "hierarchical");
  }

 private:
  // An item is a child cluster (index >= 0) or a loose vertex (-(v + 1)).
  using Item = int;

  std::vector<Item> items_of(int level) const {
    std::vector<Item> items;
    std::vector<bool> covered(graph_.size(), false);
    for (int child : clustering_.children_of(level)) {
      items.push_back(child);
      for (Vertex v : clustering_[static_cast<std::size_t>(child)].vertices) {
        covered[static_cast<std::size_t>(v)] = true;
      }
    }
    auto add_loose = [&](Vertex v) {
      if (!covered[static_cast<std::size_t>(v)]) items.push_back(-(v + 1));
    };
    if (level < 0) {
      for (std::size_t v = 0; v < graph_.size(); ++v) add_loose(static_cast<Vertex>(v));
    } else {
      for (Vertex v : clustering_[static_cast<std::size_t>(level)].vertices) add_loose(v);
    }
    return items;
  }

  bool contains(Item item, Vertex v) const {
    if (item < 0) return -(item + 1) == v;
    return local_[static_cast<std::size_t>(item)][static_cast<std::size_t>(v)] >= 0;
  }

  std::vector<Vertex> vertices_of(Item item) const {
    if (item < 0) return {-(item + 1)};
    const auto m = clustering_[static_cast<std::size_t>(item)].vertices.members();
    return {m.begin(), m.end()};
  }

  double table(Item item, Vertex a, Vertex b) const {
    if (item < 0) return a == b ? 0.0 : kInfinity;
    const auto& set = clustering_[static_cast<std::size_t>(item)].vertices;
    const auto& loc = local_[static_cast<std::size_t>(item)];
    return tables_[static_cast<std::size_t>(item)]
                  [static_cast<std::size_t>(loc[static_cast<std::size_t>(a)]) * set.size() +
                   static_cast<std::size_t>(loc[static_cast<std::size_t>(b)])];
  }

  // f[S][z]: cheapest path starting at `start` (inside items[first]) that
  // covers the items in S, each consecutively, and ends at z.
  std::vector<double> run_dp(const std::vector<Item>& items, std::size_t first, Vertex start) {
    const std::size_t k = items.size();
    const std::size_t n = graph_.size();
    const std::size_t states = std::size_t{1} << k;
    if (states * n > (std::size_t{1} << 26)) throw Error("hierarchy level too large for memory");
    std::vector<double> f(states * n, kInfinity);
    std::vector<std::vector<Vertex>> members(k);
    for (std::size_t i = 0; i < k; ++i) members[i] = vertices_of(items[i]);

    const std::size_t seed = std::size_t{1} << first;
    for (Vertex z : members[first]) {
      f[seed * n + static_cast<std::size_t>(z)] = table(items[first], start, z);
    }
    std::vector<double> g(n);
    for (std::size_t s = 0; s < states; ++s) {
      if (!(s & seed)) continue;
      if ((++nodes_ & 1023) == 0 && deadline_.expired()) throw Timeout{};
      std::fill(g.begin(), g.end(), kInfinity);
      bool any = false;
      for (std::size_t i = 0; i < k; ++i) {
        if (!(s >> i & 1)) continue;
        for (Vertex v : members[i]) {
          const double fv = f[s * n + static_cast<std::size_t>(v)];
          if (std::isinf(fv)) continue;
          any = true;
          const auto row = graph_.row(v);
          for (std::size_t j = 0; j < k; ++j) {
            if (s >> j & 1) continue;
            for (Vertex y : members[j]) {
              const double c = fv + row[static_cast<std::size_t>(y)];
              if (c < g[static_cast<std::size_t>(y)]) g[static_cast<std::size_t>(y)] = c;
            }
          }
        }
      }
      if (!any) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (s >> j & 1) continue;
        const std::size_t t = s | (std::size_t{1} << j);
        for (Vertex y : members[j]) {
          const double gy = g[static_cast<std::size_t>(y)];
          if (std::isinf(gy)) continue;
          for (Vertex z : members[j]) {
            const double c = gy + table(items[j], y, z);
            auto& slot = f[t * n + static_cast<std::size_t>(z)];
            if (c < slot) slot = c;
          }
        }
      }
    }
    return f;
  }

  void build_table(int cluster) {
    const auto items = items_of(cluster);
    const auto& set = clustering_[static_cast<std::size_t>(cluster)].vertices;
    const std::size_t size = set.size();
    const std::size_t n = graph_.size();
    const std::size_t full = (std::size_t{1} << items.size()) - 1;
    auto& t = tables_[static_cast<std::size_t>(cluster)];
    t.assign(size * size, kInfinity);
    for (std::size_t first = 0; first < items.size(); ++first) {
      for (Vertex a : vertices_of(items[first])) {
        const auto f = run_dp(items, first, a);
        const auto la = static_cast<std::size_t>(local_[static_cast<std::size_t>(cluster)][static_cast<std::size_t>(a)]);
        for (std::size_t lb = 0; lb < size; ++lb) {
          t[la * size + lb] = f[full * n + static_cast<std::size_t>(set[lb])];
        }
      }
    }
  }

  // Appends the vertices of the cheapest path from `start` to `end` over
  // `items`, recomputing the DP and walking it backwards.
  void expand_level(const std::vector<Item>& items, std::size_t first, Vertex start, Vertex end,
                    std::vector<Vertex>& out) {
    const std::size_t n = graph_.size();
    const auto f = run_dp(items, first, start);
    std::size_t s = (std::size_t{1} << items.size()) - 1;
    Vertex z = end;
    struct Segment {
      Item item;
      Vertex from, to;
    };
    std::vector<Segment> segments;
    while (true) {
      std::size_t j = 0;
      while (!contains(items[j], z)) ++j;
      const std::size_t prev = s & ~(std::size_t{1} << j);
      if (prev == 0) {
        segments.push_back({items[j], start, z});
        break;
      }
      const double target = f[s * n + static_cast<std::size_t>(z)];
      bool found = false;
      for (Vertex y : vertices_of(items[j])) {
        for (std::size_t i = 0; i < items.size() && !found; ++i) {
          if (!(prev >> i & 1)) continue;
          for (Vertex v : vertices_of(items[i])) {
            const double fv = f[prev * n + static_cast<std::size_t>(v)];
            if (std::isinf(fv)) continue;
            const double c = fv + graph_.weight(v, y);
            if (c + table(items[j], y, z) == target && is_min_into(f, prev, items, y, c)) {
              segments.push_back({items[j], y, z});
              s = prev;
              z = v;
              found = true;
              break;
            }
          }
        }
        if (found) break;
      }
      if (!found) throw Error("hierarchical reconstruction failed");
    }
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
      expand_item(it->item, it->from, it->to, out);
    }
  }

  // Confirms that c equals the relaxed g[prev][y] used by the forward pass.
  bool is_min_into(const std::vector<double>& f, std::size_t prev, const std::vector<Item>& items,
                   Vertex y, double c) const {
    const std::size_t n = graph_.size();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!(prev >> i & 1)) continue;
      for (Vertex v : vertices_of(items[i])) {
        const double fv = f[prev * n + static_cast<std::size_t>(v)];
        if (!std::isinf(fv) && fv + graph_.weight(v, y) < c) return false;
      }
    }
    return true;
  }

  void expand_item(Item item, Vertex from, Vertex to, std::vector<Vertex>& out) {
    if (item < 0) {
      out.push_back(from);
      return;
    }
    const auto items = items_of(item);
    std::size_t first = 0;
    while (!contains(items[first], from)) ++first;
    expand_level(items, first, from, to, out);
  }

  const MetricGraph& graph_;
  const ClusterTree& clustering_;
  const Deadline& deadline_;
  std::vector<std::vector<double>> tables_;
  std::vector<std::vector<int>> local_;
  std::uint64_t nodes_ = 0;
};

SolveReport branch_and_bound(const MetricGraph& graph, const ClusterTree* clustering,
                             const SolveOptions& options, const Deadline& deadline) {
  require_vertices(graph);
  const std::string name =
      clustering != nullptr && !clustering->empty() ? "branch_and_bound_clustered" : "branch_and_bound";
  if (graph.size() > kExactCap) {
    throw Error("exact solving is limited to " + std::to_string(kExactCap) +
                " vertices; use the heuristic solver");
  }
  if (graph.size() <= 2) return trivial_report(graph, name);
  SolveOptions quiet = options;
  quiet.on_improvement = nullptr;
  const auto start = heuristic(graph, clustering, quiet, 0, deadline);
  BranchAndBound bb(graph, clustering, options, deadline);
  bb.seed(start.tour);
  const bool complete = bb.run();
  return finish(graph, Tour{bb.best(), TourKind::kCycle},
                complete ? SolveStatus::kOptimal : SolveStatus::kFeasibleTimeout,
                bb.nodes() + start.nodes_expanded, deadline, name);
}

std::vector<bool> bits_of(std::size_t n, const VertexSet& set) {
  std::vector<bool> in(n, false);
  for (Vertex v : set) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      throw Error("set vertex out of range: " + std::to_string(v));
    }
    in[static_cast<std::size_t>(v)] = true;
  }
  return in;
}

bool consecutive_bits(const std::vector<Vertex>& order, const std::vector<bool>& in, bool cyclic) {
  const std::size_t k = order.size();
  int blocks = 0;
  bool all = true;
  for (std::size_t i = 0; i < k; ++i) {
    const bool here = in[static_cast<std::size_t>(order[i])];
    all = all && here;
    if (!here) continue;
    const bool prev = i > 0 ? in[static_cast<std::size_t>(order[i - 1])]
                            : cyclic && in[static_cast<std::size_t>(order[k - 1])];
    if (!prev) ++blocks;
  }
  return all || blocks <= 1;
}

}  // namespace

SolveReport solve_held_karp(const MetricGraph& graph) {
  require_vertices(graph);
  const Deadline deadline{std::chrono::duration<double>(kInfinity)};
  const std::size_t n = graph.size();
  if (n > kHeldKarpCap) {
    throw Error("Held-Karp is limited to " + std::to_string(kHeldKarpCap) + " vertices");
  }
  if (n <= 2) return trivial_report(graph, "held_karp");

  const std::size_t m = n - 1;
  const std::size_t states = std::size_t{1} << m;
  std::vector<double> f(states * m, kInfinity);
  auto w = [&](std::size_t a, std::size_t b) {
    return graph.weight(static_cast<Vertex>(a), static_cast<Vertex>(b));
  };
  for (std::size_t j = 0; j < m; ++j) f[(std::size_t{1} << j) * m + j] = w(0, j + 1);
  std::uint64_t nodes = 0;
  for (std::size_t s = 1; s < states; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(s >> j & 1)) continue;
      const double fj = f[s * m + j];
      if (std::isinf(fj)) continue;
      ++nodes;
      const auto row = graph.row(static_cast<Vertex>(j + 1));
      for (std::size_t y = 0; y < m; ++y) {
        if (s >> y & 1) continue;
        const double c = fj + row[y + 1];
        auto& slot = f[(s | (std::size_t{1} << y)) * m + y];
        if (c < slot) slot = c;
      }
    }
  }

  // f[U][y] reversed is the cheapest path from y through U back to 0, so
  // the smallest y that keeps the optimum reachable is chosen at each step.
  const std::size_t full = states - 1;
  double remaining = kInfinity;
  for (std::size_t j = 0; j < m; ++j) remaining = std::min(remaining, f[full * m + j] + w(j + 1, 0));
  const double tol = 1e-9 * std::max(1.0, remaining);
  Tour tour;
  tour.order.push_back(0);
  std::size_t unvisited = full;
  std::size_t x = 0;
  while (unvisited != 0) {
    bool advanced = false;
    for (std::size_t y = 0; y < m; ++y) {
      if (!(unvisited >> y & 1)) continue;
      const double c = w(x, y + 1) + f[unvisited * m + y];
      if (std::abs(c - remaining) <= tol) {
        remaining -= w(x, y + 1);
        unvisited &= ~(std::size_t{1} << y);
        x = y + 1;
        tour.order.push_back(static_cast<Vertex>(x));
        advanced = true;
        break;
      }
    }
    if (!advanced) throw Error("Held-Karp reconstruction failed");
  }
  return finish(graph, std::move(tour), SolveStatus::kOptimal, nodes, deadline, "held_karp");
}

SolveReport solve_branch_and_bound(const MetricGraph& graph, const ClusterTree* clustering,
                                   const SolveOptions& options) {
  const Deadline deadline(options.budget);
  return branch_and_bound(graph, clustering, options, deadline);
}

SolveReport solve_exact_tsp(const MetricGraph& graph, const SolveOptions& options) {
  require_vertices(graph);
  if (graph.size() <= kHeldKarpCap) {
    auto r = solve_held_karp(graph);
    if (options.on_improvement) options.on_improvement(r.elapsed.count(), r.cost);
    return r;
  }
  return solve_branch_and_bound(graph, nullptr, options);
}

SolveReport solve_hierarchical(const MetricGraph& graph, const ClusterTree& clustering,
                               const SolveOptions& options) {
  require_vertices(graph);
  const Deadline deadline(options.budget);
  if (graph.size() <= 2) return trivial_report(graph, "hierarchical");
  Hierarchy hierarchy(graph, clustering, deadline);
  try {
    return hierarchy.solve(options);
  } catch (const Timeout&) {
    SolveOptions quiet = options;
    quiet.on_improvement = nullptr;
    const Deadline none{std::chrono::duration<double>(0)};
    auto r = heuristic(graph, &clustering, quiet, 0, none);
    r.status = SolveStatus::kFeasibleTimeout;
    r.elapsed = deadline.elapsed();
    r.solver_name = "hierarchical";
    return r;
  }
}

SolveReport solve_exact_ctsp(const MetricGraph& graph, const ClusterTree& clustering,
                             const SolveOptions& options) {
  require_vertices(graph);
  if (clustering.empty()) return solve_exact_tsp(graph, options);
  const Deadline deadline(options.budget);
  bool fits = true;
  try {
    Hierarchy check(graph, clustering, deadline);
  } catch (const Error&) {
    fits = false;
  }
  if (fits) return solve_hierarchical(graph, clustering, options);
  return solve_branch_and_bound(graph, &clustering, options);
}

SolveReport solve_brute_force(const MetricGraph& graph, const ClusterTree* clustering) {
  require_vertices(graph);
  const std::size_t n = graph.size();
  if (n > kBruteForceSolveCap) {
    throw Error("brute force is limited to " + std::to_string(kBruteForceSolveCap) + " vertices");
  }
  const Deadline deadline{std::chrono::duration<double>(kInfinity)};
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  const double tol = tie_tolerance(graph);
  std::vector<Vertex> best;
  double best_cost = kInfinity;
  std::uint64_t nodes = 0;
  do {
    ++nodes;
    Tour t{order, TourKind::kCycle};
    if (clustering != nullptr && !is_feasible(t, *clustering)) continue;
    const double c = tour_cost(graph, t);
    if (c < best_cost - tol) {
      best_cost = c;
      best = order;
    }
  } while (std::next_permutation(order.begin() + 1, order.end()));
  if (best.empty()) {
    SolveReport r;
    r.status = SolveStatus::kInfeasible;
    r.solver_name = "brute_force";
    r.nodes_expanded = nodes;
    return r;
  }
  return finish(graph, Tour{best, TourKind::kCycle}, SolveStatus::kOptimal, nodes, deadline,
                "brute_force");
}

std::uint64_t enumerate_feasible(std::size_t vertex_count, const std::vector<VertexSet>& sets,
                                 CountConvention convention) {
  if (vertex_count > kEnumerateCap) {
    throw Error("enumeration size cap exceeded (" + std::to_string(vertex_count) + " > " +
                std::to_string(kEnumerateCap) + ")");
  }
  if (vertex_count == 0) return 0;
  std::vector<std::vector<bool>> in;
  for (const auto& s : sets) in.push_back(bits_of(vertex_count, s));
  std::vector<Vertex> order(vertex_count);
  std::iota(order.begin(), order.end(), 0);
  const bool cyclic = convention == CountConvention::kFixedStartCycle;
  const auto from = order.begin() + (cyclic ? 1 : 0);
  std::uint64_t count = 0;
  do {
    const bool ok = std::all_of(in.begin(), in.end(), [&](const std::vector<bool>& bits) {
      return consecutive_bits(order, bits, cyclic);
    });
    if (ok) ++count;
  } while (std::next_permutation(from, order.end()));
  return count;
}

std::uint64_t enumerate_feasible(const MetricGraph& graph, const ClusterTree& clustering,
                                 CountConvention convention) {
  return enumerate_feasible(graph.size(), clustering.sets(), convention);
}

SolveReport solve_heuristic(const MetricGraph& graph, const ClusterTree* clustering,
                            const SolveOptions& options, std::uint64_t seed) {
  const Deadline deadline(options.budget);
  return heuristic(graph, clustering, options, seed, deadline);
}

}  // namespace gclust
