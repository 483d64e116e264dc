#include <gtest/gtest.h>

#include <chrono>

#include "gclust/clustering.hpp"
#include "gclust/instances.hpp"
#include "gclust/tsplib.hpp"
#include "test_util.hpp"

namespace gclust {
namespace {

MetricGraph uniform_graph(std::size_t n, double w) {
  return MetricGraph::FromFunction(n, [w](Vertex, Vertex) { return w; });
}

TEST(ClusterMetricsTest, PairWithUniformCrossing) {
  const auto g = MetricGraph::FromFunction(4, [](Vertex a, Vertex b) {
    return (a == 0 && b == 1) ? 1.0 : (a >= 2 && b >= 2 ? 1.0 : 3.0);
  });
  const auto m = cluster_metrics(g, VertexSet{0, 1});
  EXPECT_EQ(m.alpha, 3.0);
  EXPECT_EQ(m.beta, 1.0);
  EXPECT_EQ(m.gamma, 3.0);
}

TEST(ClusterMetricsTest, LowerBoundTopRow) {
  const auto inst = gen_lower_bound(1, 2, 1);
  const auto m = cluster_metrics(inst.graph, inst.cluster);
  EXPECT_EQ(m.alpha, 2.0);
  EXPECT_EQ(m.beta, 1.0);
  EXPECT_EQ(m.gamma, 2.0);
}

TEST(ClusterMetricsTest, DegenerateSubsets) {
  const auto g = uniform_graph(4, 1);
  try {
    cluster_metrics(g, VertexSet{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "beta undefined (empty intra-edge set)");
  }
  try {
    cluster_metrics(g, VertexSet::Range(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "alpha undefined (no outside vertex)");
  }
}

TEST(GammaClusteringTest, RejectsGammaAtMostOne) {
  try {
    gamma_clustering(uniform_graph(4, 1), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "uniqueness not guaranteed below Γ = 1");
  }
}

TEST(GammaClusteringTest, UniformWeightsHaveNoClusters) {
  EXPECT_TRUE(gamma_clustering(uniform_graph(7, 4), 1.000001).empty());
  EXPECT_TRUE(brute_force_clusters(uniform_graph(7, 4), 3).empty());
}

TEST(GammaClusteringTest, LowerBoundTopRowOnly) {
  const auto inst = gen_lower_bound(2, 2, 1);
  const auto tree = gamma_clustering(inst.graph, 1.5);
  ASSERT_EQ(tree.size(), 1u);
  EXPECT_EQ(tree[0].vertices, inst.cluster);
  EXPECT_EQ(tree[0].metrics.gamma, 2.0);
  EXPECT_EQ(brute_force_clusters(inst.graph, 1.5), tree.sets());
}

TEST(BruteForceClustersTest, ThreeVertices) {
  const auto g = MetricGraph(3, {0, 1, 5, 1, 0, 5, 5, 5, 0});
  EXPECT_EQ(brute_force_clusters(g, 2), (std::vector<VertexSet>{VertexSet{0, 1}}));
}

TEST(BruteForceClustersTest, SizeCap) {
  try {
    brute_force_clusters(uniform_graph(17, 1), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "oracle size cap");
  }
}

TEST(GammaClusteringTest, MatchesOracleOnRandomGraphs) {
  const double gammas[] = {1.01, 1.5, 2, 5};
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const int n = 4 + static_cast<int>(seed % 6);
    const auto g = seed % 2 == 0 ? testing::random_integer_metric(n, seed, 6)
                                 : testing::random_grouped_points(n, seed);
    for (double gamma : gammas) {
      EXPECT_EQ(gamma_clustering(g, gamma).sets(), brute_force_clusters(g, gamma))
          << "seed " << seed << " gamma " << gamma;
    }
  }
}

TEST(GammaClusteringTest, MatchesOracleWithManyTies) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = testing::random_integer_metric(8, 1000 + seed, 3);
    for (double gamma : {1.01, 1.5, 2.0, 3.0}) {
      EXPECT_EQ(gamma_clustering(g, gamma).sets(), brute_force_clusters(g, gamma))
          << "seed " << seed << " gamma " << gamma;
    }
  }
}

TEST(GammaClusteringTest, MonotoneInGamma) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = testing::random_grouped_points(14, seed, 4);
    const auto lo = gamma_clustering(g, 1.2).sets();
    const auto hi = gamma_clustering(g, 3.0).sets();
    for (const auto& s : hi) EXPECT_NE(std::find(lo.begin(), lo.end(), s), lo.end());
  }
}

TEST(GammaClusteringTest, OutputVerifiesAndIsLaminar) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = testing::random_grouped_points(30, seed, 5);
    const auto tree = gamma_clustering(g, 1.1);
    EXPECT_TRUE(verify_clustering(g, tree).empty()) << "seed " << seed;
  }
}

TEST(GammaClusteringTest, DeterministicAcrossRuns) {
  const auto g = testing::random_grouped_points(40, 9, 6);
  const auto a = gamma_clustering(g, 1.05);
  const auto b = gamma_clustering(g, 1.05);
  EXPECT_EQ(a.sets(), b.sets());
}

TEST(GammaClusteringTest, MissingEdgesFailCliqueCheck) {
  // {0,1} separated by a missing edge to 2 and 3; {2,3} is not a clique.
  const double inf = kInfinity;
  const MetricGraph g(4, {0, 1, 10, 10, 1, 0, 10, 10, 10, 10, 0, inf, 10, 10, inf, 0});
  const auto tree = gamma_clustering(g, 2);
  ASSERT_EQ(tree.size(), 1u);
  EXPECT_EQ(tree[0].vertices, (VertexSet{0, 1}));
}

TEST(VerifyClusteringTest, ReportsOverlap) {
  const auto g = testing::random_integer_metric(6, 2);
  std::vector<Cluster> cs;
  cs.push_back({VertexSet{0, 1, 2}, cluster_metrics(g, VertexSet{0, 1, 2}), -1});
  cs.push_back({VertexSet{2, 3}, cluster_metrics(g, VertexSet{2, 3}), -1});
  const ClusterTree tree(0.01, cs);
  const auto issues = verify_clustering(g, tree);
  EXPECT_EQ(std::count_if(issues.begin(), issues.end(),
                          [](const std::string& s) { return s.find("overlap") != std::string::npos; }),
            1);
}

TEST(VerifyClusteringTest, ReportsThreshold) {
  const auto g = uniform_graph(5, 2);
  const auto tree = ClusterTree::FromSets(g, 1.5, {VertexSet{0, 1}});
  const auto issues = verify_clustering(g, tree);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("below threshold"), std::string::npos);
}

TEST(ClusterTreeTest, CanonicalOrderAndParents) {
  const auto g = testing::random_integer_metric(8, 4);
  const auto tree = ClusterTree::FromSets(
      g, 1.01, {VertexSet{5, 6}, VertexSet{0, 1}, VertexSet{0, 1, 2, 3}, VertexSet{2, 3}});
  ASSERT_EQ(tree.size(), 4u);
  EXPECT_EQ(tree[0].vertices, (VertexSet{0, 1, 2, 3}));
  EXPECT_EQ(tree[1].vertices, (VertexSet{0, 1}));
  EXPECT_EQ(tree[1].parent, 0);
  EXPECT_EQ(tree[2].parent, 0);
  EXPECT_EQ(tree[3].parent, -1);
  EXPECT_EQ(tree.children_of(0), (std::vector<int>{1, 2}));
  EXPECT_TRUE(tree.nested());
}

struct TableRow {
  const char* name;
  std::size_t clusters;
};

class TableCountsTest : public ::testing::TestWithParam<TableRow> {};

TEST_P(TableCountsTest, ClusterCount) {
  const auto& row = GetParam();
  const auto g = instance_to_graph(
      read_tsplib_file(testing::data_path(std::string("tsplib/") + row.name + ".tsp")));
  const auto tree = gamma_clustering(g, 1.000001);
  EXPECT_EQ(tree.size(), row.clusters);
  EXPECT_TRUE(verify_clustering(g, tree).empty());
}

INSTANTIATE_TEST_SUITE_P(Instances, TableCountsTest,
                         ::testing::Values(TableRow{"burma14", 5}, TableRow{"ulysses16", 6},
                                           TableRow{"ulysses22", 10}, TableRow{"eil51", 11},
                                           TableRow{"berlin52", 17}),
                         [](const auto& info) { return std::string(info.param.name); });

TEST(InducedSubgraphClusterTest, Berlin52ClusterWeightsBelowAlpha) {
  const auto g = instance_to_graph(read_tsplib_file(testing::data_path("tsplib/berlin52.tsp")));
  const auto tree = gamma_clustering(g, 1.000001);
  ASSERT_FALSE(tree.empty());
  const auto& c = tree[tree.size() - 1];
  const auto sub = induced_subgraph(g, c.vertices);
  for (Vertex a = 0; a < static_cast<Vertex>(sub.size()); ++a) {
    for (Vertex b = a + 1; b < static_cast<Vertex>(sub.size()); ++b) {
      EXPECT_LT(sub.weight(a, b), c.metrics.alpha);
    }
  }
}

}  // namespace
}  // namespace gclust
