#include "cli.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace covkit;
using namespace covkit::testing;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kZ4 = R"({"type":"finite","group":{"cyclic":4},"lattice":[0,2],"generators":[{"name":"s","image":1}]})";
const char* kY = R"({"generators":["s"],"num_vertices":2,
  "edges":[{"src":0,"dst":0,"label":"s"},{"src":0,"dst":1,"label":"s"},{"src":1,"dst":0,"label":"s"}]})";

}  // namespace

TEST(Cli, CyclicFourPipeline) {
  TempDir dir("cli-z4");
  auto model = dir.write("z4.json", kZ4);
  auto r = run({"perturb", "run", "--model", model, "--epsilon", "0.5", "--seed", "7", "--verify-len", "8"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["tool"], "covkit");
  EXPECT_TRUE(j.contains("version"));
  EXPECT_EQ(j["config"]["seed"], 7);
  EXPECT_EQ(j["result"]["subgroup_index"], 2);
  EXPECT_TRUE(j["result"]["is_rose_covering"].get<bool>());
  EXPECT_EQ(j["result"]["virtual_homomorphism"]["max_len"], 8);
  EXPECT_EQ(j["provenance"]["haar_weighting"], "exact");
  EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(Cli, GolodShafarevich) {
  auto r = run({"orb", "gs", "--dp", "9", "--gens", "0", "--rels", "9"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["result"]["verdict"], "infinite");
  EXPECT_EQ(r.json()["result"]["margin"], "9/4");
  auto eight = run({"orb", "gs", "--dp", "8", "--gens", "0", "--rels", "8"});
  EXPECT_EQ(eight.json()["result"]["verdict"], "inconclusive");
}

TEST(Cli, UsageAndInputErrors) {
  EXPECT_EQ(run({"perturb", "run", "--model", "/nonexistent/model.json", "--epsilon", "0.5"}).code, cli::kExitUsage);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"orb", "gs", "--dp", "-1", "--gens", "0", "--rels", "0"}).code, cli::kExitUsage);
  TempDir dir("cli-err");
  auto bad = dir.write("bad.json", "{not json");
  EXPECT_EQ(run({"perturb", "run", "--model", bad, "--epsilon", "0.5"}).code, cli::kExitUsage);
  auto model = dir.write("z4.json", kZ4);
  auto r = run({"perturb", "run", "--model", model, "--epsilon", "2"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_FALSE(r.err.empty());
  auto matrix = dir.write("m.json", R"({"type":"matrix","generators":[{"name":"a","matrix":[2,0,0,0.5]}]})");
  EXPECT_EQ(run({"perturb", "run", "--model", matrix, "--epsilon", "0.1"}).code, cli::kExitUsage);
}

TEST(Cli, WeightSolveAndVerify) {
  TempDir dir("cli-weight");
  auto y = dir.write("y.json", kY);
  auto solved = run({"weight", "solve", "--graph", y});
  ASSERT_EQ(solved.code, 0) << solved.err;
  auto w = dir.write("w.json", solved.json()["result"]["weights"].dump());
  EXPECT_EQ(run({"weight", "verify", "--graph", y, "--weights", w}).code, cli::kExitOk);
  auto bad = dir.write("bad.json", R"({"vertex":[2,1],"edge":[1,2,1]})");
  auto r = run({"weight", "verify", "--graph", y, "--weights", bad});
  EXPECT_EQ(r.code, cli::kExitVerificationFailed);
  EXPECT_FALSE(r.json()["passed"].get<bool>());
  auto infeasible = dir.write("inf.json", R"({"generators":["s"],"num_vertices":2,
      "edges":[{"src":0,"dst":0,"label":"s"},{"src":0,"dst":1,"label":"s"},{"src":1,"dst":1,"label":"s"}]})");
  EXPECT_EQ(run({"weight", "solve", "--graph", infeasible}).code, cli::kExitVerificationFailed);
}

TEST(Cli, CoverExpand) {
  TempDir dir("cli-cover");
  auto y = dir.write("y.json", kY);
  auto w = dir.write("w.json", R"({"vertex":[4,2],"edge":[2,2,2]})");
  auto dot = dir.file("x.dot");
  auto r = run({"cover", "expand", "--graph", y, "--weights", w, "--seed", "5", "--dot", dot});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_TRUE(j["result"]["is_rose_covering"].get<bool>());
  EXPECT_NE(slurp(dot).find("digraph"), std::string::npos);
  EXPECT_EQ(run({"cover", "expand", "--graph", y, "--weights", w, "--seed", "5"}).out, r.out);
  auto unbalanced = dir.write("u.json", R"({"vertex":[4,2],"edge":[1,2,2]})");
  EXPECT_EQ(run({"cover", "expand", "--graph", y, "--weights", unbalanced}).code, cli::kExitUsage);
}

TEST(Cli, OrbifoldCommands) {
  TempDir dir("cli-orb");
  auto pres = dir.write("p.txt", "a b\na^2\nb^4 a\n");
  auto r = run({"orb", "dp", "-p", "2", "--presentation", pres});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["result"]["dp"], 1);
  auto graph = dir.write("g.json", R"({"vertices":[{"group":"dihedral","order":3},{"group":"dihedral","order":3}],
      "edges":[{"u":0,"v":1,"order":2},{"u":0,"v":1,"order":2},{"u":0,"v":1,"order":3}]})");
  auto s = run({"orb", "singp", "-p", "2", "--graph", graph});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.json()["result"]["b1"], 1);
}

TEST(Cli, TriangulationCommands) {
  TempDir dir("cli-tri");
  auto tri = dir.write("t.tri", "1:0123 1:0123 1:0123 1:0123\n0:0123 0:0123 0:0123 0:0123\n");
  auto sk = run({"tri", "skeleton", "--tri", tri});
  ASSERT_EQ(sk.code, 0) << sk.err;
  EXPECT_EQ(sk.json()["result"]["skeleton"]["num_vertices"], 4);
  auto ch = run({"tri", "cheeger", "--tri", tri});
  ASSERT_EQ(ch.code, 0) << ch.err;
  EXPECT_EQ(ch.json()["result"]["exact"]["value"], 2);
  auto set = dir.write("a.json", "[0, 1]");
  auto sf = run({"tri", "surface", "--tri", tri, "--set", set, "--k4", "2"});
  ASSERT_EQ(sf.code, 0) << sf.err;
  EXPECT_EQ(sf.json()["result"]["surface"]["quads"], 2);
  auto open = dir.write("open.tri", "- - - -\n");
  EXPECT_EQ(run({"tri", "skeleton", "--tri", open}).code, cli::kExitUsage);
}

TEST(Cli, ModelCheckAndLambda) {
  TempDir dir("cli-model");
  auto good = dir.write("m.json", R"({"type":"matrix","generators":[{"name":"a","matrix":[2,0,0,0.5]}]})");
  EXPECT_EQ(run({"model", "check", "--model", good}).code, cli::kExitOk);
  auto faulty = dir.write("f.json", R"({"type":"matrix","metric_fault":[3,1,0,0.5],
      "generators":[{"name":"a","matrix":[2,0,0,0.5]}]})");
  EXPECT_EQ(run({"model", "check", "--model", faulty}).code, cli::kExitVerificationFailed);
  auto l = run({"util", "lambda0", "--dimension", "1.5"});
  ASSERT_EQ(l.code, 0);
  EXPECT_DOUBLE_EQ(l.json()["result"]["lambda0"].get<double>(), 0.75);
  EXPECT_EQ(run({"util", "lambda0", "--dimension", "3"}).code, cli::kExitUsage);
}

TEST(Cli, ReportsAreByteIdenticalAndAtomic) {
  TempDir dir("cli-det");
  Rng rng(101);
  auto model = dir.write("m.json", random_finite_model_json(rng).dump());
  auto a = dir.file("a.json"), b = dir.file("b.json");
  ASSERT_EQ(run({"perturb", "run", "--model", model, "--epsilon", "1/2", "--seed", "3", "--out", a}).code, 0);
  ASSERT_EQ(run({"perturb", "run", "--model", model, "--epsilon", "1/2", "--seed", "3", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(std::filesystem::exists(a + ".tmp"));
}

TEST(Cli, SeedFromEnvironment) {
  TempDir dir("cli-env");
  auto y = dir.write("y.json", kY);
  auto w = dir.write("w.json", R"({"vertex":[4,2],"edge":[2,2,2]})");
  ::setenv("COVKIT_SEED", "11", 1);
  auto from_env = run({"cover", "expand", "--graph", y, "--weights", w});
  ::unsetenv("COVKIT_SEED");
  auto explicit_seed = run({"cover", "expand", "--graph", y, "--weights", w, "--seed", "11"});
  ASSERT_EQ(from_env.code, 0);
  EXPECT_EQ(from_env.json()["config"]["seed"], 11);
  EXPECT_EQ(from_env.out, explicit_seed.out);
  ::setenv("COVKIT_SEED", "banana", 1);
  EXPECT_EQ(run({"cover", "expand", "--graph", y, "--weights", w}).code, cli::kExitUsage);
  ::unsetenv("COVKIT_SEED");
}
