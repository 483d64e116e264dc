#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "gclust/instances.hpp"
#include "gclust/random.hpp"

namespace gclust {

LowerBoundInstance gen_lower_bound(int n, double alpha, double beta) {
  if (n < 0) throw Error("lower-bound family needs n >= 0");
  if (!(beta > 0.0)) throw Error("lower-bound family needs beta > 0");
  if (!(alpha > beta)) throw Error("Γ ≤ 1 family not constructible");

  LowerBoundInstance inst;
  inst.n = n;
  inst.alpha = alpha;
  inst.beta = beta;
  const int triples = n + 1;
  const auto size = static_cast<std::size_t>(3 * triples);

  std::vector<Vertex> top;
  for (int k = 0; k < triples; ++k) {
    const std::array<Vertex, 3> t{3 * k, 3 * k + 1, 3 * k + 2};
    inst.triples.push_back(t);
    top.push_back(t[1]);
    top.push_back(t[2]);
    inst.ring.push_back(t[0]);
    if (k % 2 == 0) {
      inst.ring.push_back(t[1]);
      inst.ring.push_back(t[2]);
    } else {
      inst.ring.push_back(t[2]);
      inst.ring.push_back(t[1]);
    }
  }
  inst.cluster = VertexSet(top);

  auto is_bottom = [](std::size_t v) { return v % 3 == 0; };
  std::vector<double> w(size * size, 0.0);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      if (a == b) continue;
      const int bottoms = static_cast<int>(is_bottom(a)) + static_cast<int>(is_bottom(b));
      w[a * size + b] = bottoms == 0 ? beta : bottoms == 1 ? alpha + beta : 2 * alpha + beta;
    }
  }
  for (std::size_t i = 0; i < size; ++i) {
    const auto a = static_cast<std::size_t>(inst.ring[i]);
    const auto b = static_cast<std::size_t>(inst.ring[(i + 1) % size]);
    if (is_bottom(a) != is_bottom(b)) {
      w[a * size + b] = alpha;
      w[b * size + a] = alpha;
    }
  }
  inst.graph = MetricGraph(size, std::move(w));
  return inst;
}

GridOfficeMap parse_office_map(std::string_view text) {
  GridOfficeMap map;
  std::vector<std::string> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string row(text.substr(start, end - start));
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (!row.empty()) rows.push_back(std::move(row));
    start = end + 1;
  }
  if (rows.empty()) throw Error("office map is empty");
  map.height = static_cast<int>(rows.size());
  map.width = static_cast<int>(rows.front().size());
  map.obstacle.assign(static_cast<std::size_t>(map.width * map.height), false);
  for (int r = 0; r < map.height; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != map.width) {
      throw Error("office map row " + std::to_string(r + 1) + " has width " +
                  std::to_string(row.size()) + ", expected " + std::to_string(map.width));
    }
    for (int c = 0; c < map.width; ++c) {
      switch (row[static_cast<std::size_t>(c)]) {
        case '#':
          map.obstacle[static_cast<std::size_t>(r * map.width + c)] = true;
          break;
        case '.':
          break;
        case 'W':
          map.waypoints.emplace_back(c, r);
          break;
        default:
          throw Error("office map row " + std::to_string(r + 1) + ": unexpected character '" +
                      std::string(1, row[static_cast<std::size_t>(c)]) + "'");
      }
    }
  }
  return map;
}

GridOfficeMap read_office_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_office_map(buffer.str());
}

MetricGraph gen_office(const GridOfficeMap& map) {
  const std::size_t k = map.waypoints.size();
  const auto cells = static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height);
  std::vector<double> w(k * k, 0.0);
  std::vector<int> dist(cells);
  for (std::size_t i = 0; i < k; ++i) {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<std::pair<int, int>> queue;
    const auto [c0, r0] = map.waypoints[i];
    dist[static_cast<std::size_t>(r0 * map.width + c0)] = 0;
    queue.emplace_back(c0, r0);
    while (!queue.empty()) {
      const auto [c, r] = queue.front();
      queue.pop_front();
      const int here = dist[static_cast<std::size_t>(r * map.width + c)];
      constexpr int kDc[] = {1, -1, 0, 0};
      constexpr int kDr[] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int nc = c + kDc[d];
        const int nr = r + kDr[d];
        if (nc < 0 || nr < 0 || nc >= map.width || nr >= map.height) continue;
        if (map.blocked(nc, nr)) continue;
        auto& slot = dist[static_cast<std::size_t>(nr * map.width + nc)];
        if (slot >= 0) continue;
        slot = here + 1;
        queue.emplace_back(nc, nr);
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto [c, r] = map.waypoints[j];
      const int d = dist[static_cast<std::size_t>(r * map.width + c)];
      if (d < 0) {
        throw Error("waypoints " + std::to_string(i) + " and " + std::to_string(j) +
                    " are mutually unreachable");
      }
      w[i * k + j] = d;
    }
  }
  std::vector<std::string> labels;
  for (const auto& [c, r] : map.waypoints) {
    labels.push_back("(" + std::to_string(c) + "," + std::to_string(r) + ")");
  }
  return MetricGraph(k, std::move(w), std::move(labels));
}

MetricGraph metric_closure(const MetricGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<double> d(graph.weights().begin(), graph.weights().end());
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t a = 0; a < n; ++a) {
      const double am = d[a * n + m];
      if (std::isinf(am)) continue;
      for (std::size_t b = 0; b < n; ++b) {
        const double via = am + d[m * n + b];
        if (via < d[a * n + b]) d[a * n + b] = via;
      }
    }
  }
  // Keep exact symmetry against rounding in the two directions.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double v = std::min(d[a * n + b], d[b * n + a]);
      d[a * n + b] = v;
      d[b * n + a] = v;
    }
  }
  return MetricGraph(n, std::move(d), graph.labels());
}

PlantedInstance gen_planted(const std::vector<int>& cluster_sizes, double gamma,
                            std::uint64_t seed, PlantedOptions options) {
  if (!(gamma > 1.0)) throw Error("planted clusters need gamma > 1");
  if (std::any_of(cluster_sizes.begin(), cluster_sizes.end(), [](int s) { return s < 1; })) {
    throw Error("cluster sizes must be positive");
  }
  if (std::none_of(cluster_sizes.begin(), cluster_sizes.end(), [](int s) { return s >= 2; })) {
    throw Error("at least one planted cluster must have two or more vertices");
  }
  if (options.margin < 0.0) throw Error("margin must be non-negative");

  std::vector<int> blocks = cluster_sizes;
  // A single block would be the whole vertex set; give it an outside vertex.
  if (blocks.size() < 2) blocks.push_back(1);

  PlantedInstance out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int i = 0; i < blocks[b]; ++i) out.block_of.push_back(static_cast<int>(b));
  }
  const std::size_t n = out.block_of.size();

  // Intra weights stay below gamma times the smallest intra weight and the
  // inter range is narrower than a factor gamma, so no subset other than a
  // planted block reaches the threshold.
  const double spread = 1.0 + 0.5 * (gamma - 1.0);
  const double beta_max = spread;
  const double inter_lo = gamma * beta_max * (1.0 + options.margin);
  const double inter_hi = inter_lo * spread;

  Rng rng(seed);
  std::vector<double> w(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const bool same = out.block_of[a] == out.block_of[b];
      const double value = same ? rng.uniform(1.0, beta_max) : rng.uniform(inter_lo, inter_hi);
      w[a * n + b] = value;
      w[b * n + a] = value;
    }
  }
  out.graph = metric_closure(MetricGraph(n, std::move(w)));

  std::vector<VertexSet> sets;
  std::size_t first = 0;
  for (int size : blocks) {
    if (size >= 2) {
      std::vector<Vertex> members;
      for (int i = 0; i < size; ++i) members.push_back(static_cast<Vertex>(first + i));
      sets.emplace_back(std::move(members));
    }
    first += static_cast<std::size_t>(size);
  }
  out.clusters = ClusterTree::FromSets(out.graph, gamma, std::move(sets));
  return out;
}

MetricGraph gen_random_euclidean(int n, std::uint64_t seed, double scale) {
  if (n < 1) throw Error("random instance needs at least one vertex");
  Rng rng(seed);
  std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(n));
  for (auto& p : pts) p = {scale * rng.uniform(), scale * rng.uniform()};
  return MetricGraph::FromFunction(static_cast<std::size_t>(n), [&](Vertex a, Vertex b) {
    const auto& pa = pts[static_cast<std::size_t>(a)];
    const auto& pb = pts[static_cast<std::size_t>(b)];
    return std::hypot(pa.first - pb.first, pa.second - pb.second);
  });
}

}  // namespace gclust
