#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "udgred/exact_solver.hpp"
#include "udgred/graph_json.hpp"
#include "udgred/harness.hpp"

namespace udgred {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("udgred_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(UDGRED_CLI) + " " + args + " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(Cli, GenerateWritesGraphJsonWithMeta) {
  ASSERT_EQ(run("generate --size 20 --density 0.7 --rb-sq 9 --weights 10 --geometry-seed 1 --weight-seed 2 --out " +
                path("g.json")),
            0);
  const json j = read_json_file(path("g.json"));
  EXPECT_EQ(j.at("n"), 280);
  EXPECT_EQ(j.at("coords").size(), 280u);
  EXPECT_EQ(j.at("meta").at("rb_sq"), 9);
  EXPECT_EQ(j.at("meta").at("W"), 10);
  for (const auto& e : j.at("edges")) EXPECT_LT(e[0].get<int>(), e[1].get<int>());

  ASSERT_EQ(run("generate --size 20 --density 0.7 --rb-sq 9 --weights 10 --geometry-seed 1 --weight-seed 2 --out " +
                path("g2.json")),
            0);
  EXPECT_EQ(slurp(path("g.json")), slurp(path("g2.json")));
}

TEST_F(Cli, KernelizeSolveLiftPipeline) {
  ASSERT_EQ(run("generate --size 6 --density 0.8 --rb-sq 5 --weights 10 --geometry-seed 3 --weight-seed 4 --out " +
                path("g.json")),
            0);
  ASSERT_EQ(run("kernelize --in " + path("g.json") + " --rules all --unconfined-cap 16 --out " + path("k.json")), 0);
  const json k = read_json_file(path("k.json"));
  for (const char* field : {"kernel", "offset", "xi", "rule_counts", "trace"}) EXPECT_TRUE(k.contains(field));

  // solve the kernel, then lift back
  write_json_file(path("kernel.json"), k.at("kernel"));
  ASSERT_EQ(run("solve --in " + path("kernel.json") + " --method bnb --budget-nodes 1000000 --out " + path("s.json")),
            0);
  ASSERT_EQ(run("lift --result " + path("k.json") + " --solution " + path("s.json") + " --out " + path("l.json")), 0);

  const GraphDocument g = graph_from_json(read_json_file(path("g.json")));
  const json lifted = read_json_file(path("l.json"));
  const VertexSet set = vertex_set_from_json(lifted.at("set"));
  const Weight truth = solve_branch_and_bound(g.graph).weight;
  EXPECT_TRUE(is_independent(g.graph, set));
  EXPECT_EQ(total_weight(g.graph, set), truth);
  EXPECT_EQ(lifted.at("weight").get<Weight>(), truth);
}

TEST_F(Cli, SolveExhaustiveAndBudget) {
  ASSERT_EQ(run("generate --size 4 --density 1.0 --rb-sq 1 --out " + path("g.json")), 0);
  ASSERT_EQ(run("solve --in " + path("g.json") + " --method exhaustive --out " + path("s.json")), 0);
  EXPECT_EQ(read_json_file(path("s.json")).at("weight"), 8);
  ASSERT_EQ(run("generate --size 10 --density 0.9 --rb-sq 9 --geometry-seed 1 --out " + path("big.json")), 0);
  EXPECT_EQ(run("solve --in " + path("big.json") + " --method exhaustive --out " + path("x.json")), 1);
  EXPECT_EQ(run("solve --in " + path("big.json") + " --method bnb --budget-nodes 2 --out " + path("x.json")), 3);
  EXPECT_EQ(read_json_file(path("x.json")).at("status"), "budget_exceeded");
}

TEST_F(Cli, UsageErrors) {
  EXPECT_NE(run("generate --size 4 --density 0.5"), 0);  // missing --rb-sq
  ASSERT_EQ(run("generate --size 4 --density 1.0 --rb-sq 1 --out " + path("g.json")), 0);
  EXPECT_EQ(run("kernelize --in " + path("g.json") + " --rules isolated,bogus --out " + path("k.json")), 2);
  EXPECT_EQ(run("kernelize --in " + path("missing.json") + " --out " + path("k.json")), 2);
}

TEST_F(Cli, EnsembleWritesReproducibleOutputs) {
  const json config = {{"L", {6}},          {"rho", {0.7, 1.0}},  {"rb_sq", {1, 9}}, {"W", 10},
                       {"num_geometries", 3}, {"weight_realizations", 2}, {"base_seed", 5},
                       {"geometry_mode", "fresh"}};
  write_json_file(path("spec.json"), config);
  ASSERT_EQ(run("ensemble --config " + path("spec.json") + " --out-dir " + path("a") + " --workers 1"), 0);
  ASSERT_EQ(run("ensemble --config " + path("spec.json") + " --out-dir " + path("b") + " --workers 4"), 0);
  EXPECT_EQ(slurp(path("a/records.csv")), slurp(path("b/records.csv")));
  EXPECT_EQ(slurp(path("a/summary.csv")), slurp(path("b/summary.csv")));
  const std::string records = slurp(path("a/records.csv"));
  EXPECT_EQ(records.substr(0, records.find('\n')), kRecordsHeader);
  EXPECT_EQ(records_from_csv(records).size(), 2u * 2u * 3u * 2u);
  const json manifest = read_json_file(path("a/manifest.json"));
  EXPECT_EQ(manifest.at("version"), kVersion);
  EXPECT_EQ(manifest.at("spec").at("W"), 10);
}

}  // namespace
}  // namespace udgred
