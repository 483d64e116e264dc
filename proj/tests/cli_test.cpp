#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "gclust/instances.hpp"
#include "gclust/serialize.hpp"
#include "gclust/tsplib.hpp"
#include "test_util.hpp"

namespace gclust {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gclust_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string read(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

TEST_F(CliTest, ClusterBurma14) {
  const auto r = run({"cluster", testing::data_path("tsplib/burma14.tsp")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["clusters"].size(), 5u);
  EXPECT_NE(r.err.find("burma14: 5 clusters"), std::string::npos);
}

TEST_F(CliTest, ClusterTextFormat) {
  const auto r = run({"cluster", testing::data_path("tsplib/burma14.tsp"), "--format", "text"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("burma14: 5 clusters", 0), 0u);
}

TEST_F(CliTest, ClusterNothingFound) {
  const auto g = MetricGraph::FromFunction(5, [](Vertex, Vertex) { return 3.0; });
  const auto file = write("flat.tsp", write_tsplib_explicit(g, "flat", ""));
  const auto r = run({"cluster", file});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(Json::parse(r.out)["clusters"].empty());
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"cluster", path("missing.tsp")}).code, 2);
  EXPECT_EQ(run({"cluster", testing::data_path("tsplib/burma14.tsp"), "--gamma", "1"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"solve", testing::data_path("tsplib/burma14.tsp"), "--solver", "x"}).code, 2);
  const auto bad = write("bad.tsp", "NAME: b\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n");
  const auto r = run({"cluster", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, SolveFormats) {
  const auto file = testing::data_path("tsplib/burma14.tsp");
  const auto j = run({"solve", file, "--solver", "tsp"});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_EQ(Json::parse(j.out)["cost"], 3323.0);
  const auto tour = run({"solve", file, "--format", "tour"});
  ASSERT_EQ(tour.code, 0);
  EXPECT_NE(tour.out.find("TOUR_SECTION"), std::string::npos);
  const auto text = run({"solve", file, "--solver", "heuristic", "--format", "text"});
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("heuristic"), std::string::npos);
}

TEST_F(CliTest, SolveProgressLog) {
  const auto log = path("progress.txt");
  const auto r = run({"solve", testing::data_path("tsplib/ulysses22.tsp"), "--solver", "tsp",
                      "--progress", log});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(read(log).empty());
}

TEST_F(CliTest, SolveTimeoutExitCode) {
  const auto file = path("r27.tsp");
  ASSERT_EQ(run({"gen", "random", "--n", "27", "--seed", "4", "--out", file}).code, 0);
  const auto r = run({"solve", file, "--solver", "tsp", "--budget-secs", "0.0001"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["status"], "feasible_timeout");
}

TEST_F(CliTest, GenLowerBoundRoundTrip) {
  const auto file = path("lb.tsp");
  ASSERT_EQ(run({"gen", "lower-bound", "--n", "2", "--alpha", "2", "--beta", "1", "--out", file})
                .code,
            0);
  const auto g = instance_to_graph(read_tsplib_file(file));
  EXPECT_EQ(g, gen_lower_bound(2, 2, 1).graph);
  const auto side = Json::parse(read(file + ".clusters.json"));
  EXPECT_EQ(side["cluster"].size(), 6u);
  const auto r = run({"gap", file, "--gamma", "1.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["ratio"].get<double>(), 19.0 / 15.0, 1e-12);
}

TEST_F(CliTest, GenPlantedSidecarMatchesClustering) {
  const auto file = path("p.tsp");
  ASSERT_EQ(run({"gen", "planted", "--sizes", "4,3,3", "--gamma", "2", "--seed", "5", "--out", file})
                .code,
            0);
  const auto side = cluster_tree_from_json(Json::parse(read(file + ".clusters.json")));
  const auto r = run({"cluster", file, "--gamma", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(cluster_tree_from_json(Json::parse(r.out)).sets(), side.sets());
}

TEST_F(CliTest, GenIsDeterministic) {
  const auto a = run({"gen", "planted", "--sizes", "3,3", "--gamma", "2", "--seed", "1"});
  const auto b = run({"gen", "planted", "--sizes", "3,3", "--gamma", "2", "--seed", "1"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, GenOffice) {
  const auto map = write("floor.map", "W....\n.###.\n....W\n");
  const auto file = path("floor.tsp");
  ASSERT_EQ(run({"gen", "office", "--map", map, "--out", file}).code, 0);
  EXPECT_EQ(instance_to_graph(read_tsplib_file(file)).weight(0, 1), 6.0);
  const auto direct = run({"cluster", map});
  EXPECT_EQ(direct.code, 0);
}

TEST_F(CliTest, BenchRows) {
  const auto flat = write("flat.tsp", write_tsplib_explicit(
                                          MetricGraph::FromFunction(
                                              6, [](Vertex, Vertex) { return 2.0; }),
                                          "flat", ""));
  const auto r = run({"bench", testing::data_path("tsplib/burma14.tsp"), flat,
                      path("missing.tsp"), "--jobs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].rfind("name,vertices,clusters,tsp_cost", 0), 0u);
  EXPECT_EQ(rows[1].rfind("burma14,14,5,3323,optimal", 0), 0u);
  EXPECT_EQ(rows[2].rfind("flat,6,0,", 0), 0u);
  EXPECT_NE(rows[2].find(",1,"), std::string::npos);
  EXPECT_NE(rows[3].find("cannot open"), std::string::npos);
}

TEST_F(CliTest, GapSearchSpaceAndTightness) {
  const auto s = run({"gap", "--search-space", "100", "--sizes", "25,25,25,25"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(Json::parse(s.out)["n1_over_n0_scientific"], "1.49e-56");
  const auto t = run({"gap", "--tightness", "2", "--gamma", "2", "--format", "csv"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("0,5,5,1,1,1.4"), std::string::npos);
}

}  // namespace
}  // namespace gclust
