#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gclust/analysis.hpp"
#include "gclust/clustering.hpp"
#include "gclust/instances.hpp"
#include "gclust/solvers.hpp"
#include "gclust/tsplib.hpp"
#include "test_util.hpp"

namespace gclust {
namespace {

using std::chrono::duration;

TEST(ExactTspTest, Triangle) {
  const MetricGraph tri(3, {0, 1, 3, 1, 0, 2, 3, 2, 0});
  const auto r = solve_exact_tsp(tri);
  EXPECT_EQ(r.cost, 6.0);
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
}

TEST(ExactTspTest, UnitSquare) {
  const double d = std::sqrt(2.0);
  const MetricGraph sq(4, {0, 1, d, 1, 1, 0, 1, d, d, 1, 0, 1, 1, d, 1, 0});
  const auto r = solve_exact_tsp(sq);
  EXPECT_EQ(r.cost, 4.0);
  EXPECT_EQ(r.tour.order, (std::vector<Vertex>{0, 1, 2, 3}));
  EXPECT_EQ(solve_branch_and_bound(sq, nullptr).cost, 4.0);
  EXPECT_EQ(solve_brute_force(sq).cost, 4.0);
}

TEST(ExactTspTest, SingleAndPair) {
  EXPECT_EQ(solve_exact_tsp(MetricGraph(1, {0})).cost, 0.0);
  EXPECT_EQ(solve_exact_tsp(MetricGraph(2, {0, 3, 3, 0})).cost, 6.0);
}

TEST(ExactTspTest, SolversAgree) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 4 + static_cast<int>(seed % 7);
    const auto g = seed % 2 ? testing::random_integer_metric(n, seed, 30)
                            : testing::random_grouped_points(n, seed);
    const auto hk = solve_held_karp(g);
    const auto bb = solve_branch_and_bound(g, nullptr);
    const auto bf = solve_brute_force(g);
    EXPECT_NEAR(hk.cost, bf.cost, 1e-9) << seed;
    EXPECT_NEAR(bb.cost, bf.cost, 1e-9) << seed;
    EXPECT_NEAR(hk.cost, tour_cost(g, hk.tour), 1e-9);
    EXPECT_NEAR(bb.cost, tour_cost(g, bb.tour), 1e-9);
    if (g.integral()) {
      EXPECT_EQ(hk.tour, bf.tour) << seed;
      EXPECT_EQ(bb.tour, bf.tour) << seed;
    }
  }
}

TEST(ExactTspTest, Burma14KnownOptimum) {
  const auto g = instance_to_graph(read_tsplib_file(testing::data_path("tsplib/burma14.tsp")));
  const auto hk = solve_held_karp(g);
  const auto bb = solve_branch_and_bound(g, nullptr);
  EXPECT_EQ(hk.cost, 3323.0);
  EXPECT_EQ(bb.cost, hk.cost);
  EXPECT_EQ(bb.tour, hk.tour);
}

TEST(ExactTspTest, SizeCap) {
  const auto g = gen_random_euclidean(29, 1);
  try {
    solve_exact_tsp(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("heuristic"), std::string::npos);
  }
}

TEST(ExactTspTest, BudgetExhaustedReturnsIncumbent) {
  const auto g = gen_random_euclidean(27, 3);
  SolveOptions opt;
  opt.budget = duration<double>(1e-4);
  const auto r = solve_exact_tsp(g, opt);
  EXPECT_EQ(r.status, SolveStatus::kFeasibleTimeout);
  EXPECT_NEAR(r.cost, tour_cost(g, r.tour), 1e-9);
  validate_tour(r.tour, 27);
}

TEST(ExactTspTest, ProgressCallbackSeesImprovements) {
  const auto g = testing::random_grouped_points(22, 5, 4);
  std::vector<double> costs;
  SolveOptions opt;
  opt.on_improvement = [&](double, double c) { costs.push_back(c); };
  const auto r = solve_exact_tsp(g, opt);
  ASSERT_FALSE(costs.empty());
  // Equal-cost tours may replace each other, so allow rounding noise.
  for (std::size_t i = 1; i < costs.size(); ++i) {
    EXPECT_LE(costs[i], costs[i - 1] + 1e-9 * std::max(1.0, g.max_weight())) << i;
  }
  EXPECT_NEAR(costs.back(), r.cost, 1e-9);
}

TEST(ExactCtspTest, EmptyClusteringMatchesTsp) {
  const auto g = testing::random_integer_metric(9, 3);
  const auto a = solve_exact_ctsp(g, ClusterTree());
  const auto b = solve_exact_tsp(g);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.tour, b.tour);
}

TEST(ExactCtspTest, LowerBoundClosedForm) {
  const auto inst = gen_lower_bound(1, 2, 1);
  const auto tree = ClusterTree::FromSets(inst.graph, 1.5, {inst.cluster});
  const auto r = solve_exact_ctsp(inst.graph, tree);
  EXPECT_EQ(r.cost, 12.0);
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_TRUE(is_feasible(r.tour, tree));
  EXPECT_EQ(solve_exact_tsp(inst.graph).cost, 10.0);
}

TEST(ExactCtspTest, PlantedMatchesFilteredBruteForce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = gen_planted({4, 4}, 2, seed);
    ASSERT_LE(inst.graph.size(), 9u);
    const auto exact = solve_exact_ctsp(inst.graph, inst.clusters);
    const auto brute = solve_brute_force(inst.graph, &inst.clusters);
    EXPECT_NEAR(exact.cost, brute.cost, 1e-9) << seed;
    EXPECT_TRUE(is_feasible(exact.tour, inst.clusters));
  }
}

TEST(ExactCtspTest, SolversAgreeWithNesting) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = testing::random_integer_metric(9, 50 + seed, 25);
    const auto tree = ClusterTree::FromSets(
        g, 1.01, {VertexSet{0, 2, 4, 6}, VertexSet{2, 4}, VertexSet{1, 7}});
    const auto brute = solve_brute_force(g, &tree);
    const auto hier = solve_hierarchical(g, tree);
    const auto bb = solve_branch_and_bound(g, &tree);
    EXPECT_EQ(hier.cost, brute.cost) << seed;
    EXPECT_EQ(bb.cost, brute.cost) << seed;
    EXPECT_EQ(bb.tour, brute.tour) << seed;
    EXPECT_TRUE(is_feasible(hier.tour, tree));
    EXPECT_EQ(hier.cost, tour_cost(g, hier.tour));
  }
}

TEST(ExactCtspTest, ClusterContainingStartVertex) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::random_integer_metric(8, 300 + seed, 25);
    const auto tree = ClusterTree::FromSets(g, 1.01, {VertexSet{0, 3, 5}, VertexSet{1, 2}});
    EXPECT_EQ(solve_hierarchical(g, tree).cost, solve_brute_force(g, &tree).cost) << seed;
    EXPECT_EQ(solve_branch_and_bound(g, &tree).cost, solve_brute_force(g, &tree).cost) << seed;
  }
}

TEST(ExactCtspTest, DeformedOptimumIsUpperBound) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = testing::random_grouped_points(10, seed, 3);
    const auto tree = gamma_clustering(g, 1.2);
    if (tree.empty()) continue;
    const auto tsp = solve_exact_tsp(g);
    const auto ctsp = solve_exact_ctsp(g, tree);
    const auto repaired = deform_all(tsp.tour, tree);
    EXPECT_GE(tour_cost(g, repaired) + 1e-9, ctsp.cost);
    EXPECT_GE(ctsp.cost + 1e-9, tsp.cost);
    EXPECT_LE(ctsp.cost, gap_bound(1.2) * tsp.cost + 1e-9);
  }
}

TEST(EnumerateTest, SmallCounts) {
  EXPECT_EQ(enumerate_feasible(6, {}), 120u);
  EXPECT_EQ(enumerate_feasible(6, {VertexSet::Range(6)}), 120u);
  EXPECT_EQ(enumerate_feasible(6, {VertexSet{0, 1, 2}, VertexSet{3, 4, 5}}), 36u);
  EXPECT_EQ(enumerate_feasible(6, {}, CountConvention::kLinearSequence), 720u);
  EXPECT_EQ(enumerate_feasible(6, {VertexSet{0, 1, 2}, VertexSet{3, 4, 5}},
                               CountConvention::kLinearSequence),
            72u);
}

TEST(EnumerateTest, SizeCap) {
  EXPECT_THROW(enumerate_feasible(11, {}), Error);
}

// All partitions of n into parts, as descending lists.
void partitions(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(n - p, p, cur, out);
    cur.pop_back();
  }
}

std::vector<VertexSet> blocks_from(const std::vector<int>& parts) {
  std::vector<VertexSet> sets;
  Vertex next = 0;
  for (int p : parts) {
    std::vector<Vertex> vs;
    for (int i = 0; i < p; ++i) vs.push_back(next++);
    if (p >= 2) sets.emplace_back(vs);
  }
  return sets;
}

TEST(EnumerateTest, MatchesClosedFormOnAllPartitions) {
  for (int n : {6, 8}) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions(n, n, cur, parts);
    for (const auto& p : parts) {
      const auto sets = blocks_from(p);
      for (auto conv : {CountConvention::kFixedStartCycle, CountConvention::kLinearSequence}) {
        EXPECT_EQ(BigInt(enumerate_feasible(static_cast<std::size_t>(n), sets, conv)),
                  clustered_count(n, p, conv))
            << n << " parts " << p.size();
      }
    }
  }
}

TEST(EnumerateTest, GraphOverloadUsesTree) {
  const auto inst = gen_planted({3, 3}, 2, 1);
  const auto n = inst.graph.size();
  std::vector<int> sizes = {3, 3};
  EXPECT_EQ(BigInt(enumerate_feasible(inst.graph, inst.clusters)),
            clustered_count(static_cast<int>(n), sizes, CountConvention::kFixedStartCycle));
}

TEST(HeuristicTest, FeasibleAndNoBetterThanExact) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = gen_planted({3, 2, 3}, 1.5, seed);
    const auto h = solve_heuristic(inst.graph, &inst.clusters, {}, seed);
    EXPECT_TRUE(is_feasible(h.tour, inst.clusters));
    EXPECT_EQ(h.status, SolveStatus::kFeasible);
    const auto exact = solve_exact_ctsp(inst.graph, inst.clusters);
    EXPECT_GE(h.cost + 1e-9, exact.cost);
    EXPECT_NEAR(h.cost, tour_cost(inst.graph, h.tour), 1e-9);
  }
}

TEST(HeuristicTest, DeterministicForSeed) {
  const auto g = gen_random_euclidean(40, 2);
  const auto a = solve_heuristic(g, nullptr, {}, 9);
  const auto b = solve_heuristic(g, nullptr, {}, 9);
  EXPECT_EQ(a.tour, b.tour);
}

TEST(HeuristicTest, ZeroBudgetReturnsConstruction) {
  const auto inst = gen_planted({4, 4, 4}, 2, 3);
  SolveOptions opt;
  opt.budget = duration<double>(0);
  const auto r = solve_heuristic(inst.graph, &inst.clusters, opt, 0);
  EXPECT_EQ(r.status, SolveStatus::kFeasibleTimeout);
  EXPECT_TRUE(is_feasible(r.tour, inst.clusters));
  validate_tour(r.tour, inst.graph.size());
}

TEST(NodeCountTest, ConstraintsOnlyPrune) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = gen_planted({4, 4, 3, 3}, 1.5, seed);
    const auto free = solve_branch_and_bound(inst.graph, nullptr);
    const auto constrained = solve_branch_and_bound(inst.graph, &inst.clusters);
    EXPECT_LE(constrained.nodes_expanded, free.nodes_expanded) << seed;
    EXPECT_EQ(constrained.cost, solve_hierarchical(inst.graph, inst.clusters).cost);
  }
}

TEST(StatusTest, Names) {
  EXPECT_EQ(to_string(SolveStatus::kOptimal), "optimal");
  EXPECT_EQ(to_string(SolveStatus::kFeasibleTimeout), "feasible_timeout");
  EXPECT_EQ(to_string(SolveStatus::kInfeasible), "infeasible");
}

}  // namespace
}  // namespace gclust
