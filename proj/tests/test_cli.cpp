#include <nlohmann/json.hpp>
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

// Runs the CLI in `dir` with stderr folded into stdout.
Outcome kdq(const std::string& args, const fs::path& dir = fs::temp_directory_path()) {
  const std::string cmd = "cd '" + dir.string() + "' && '" KDQ_CLI_PATH "' " + args + " 2>&1";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("kdq-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) { return kdq(args, dir_); }
  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
  json read(const std::string& name) { return json::parse(std::ifstream(dir_ / name)); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, EnumerateCounts) {
  auto r = run("--json enumerate --n 2 --m 2");
  ASSERT_EQ(r.status, 0) << r.out;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["count"], 72);
  EXPECT_EQ(j["graphs"].size(), 72u);
  EXPECT_EQ(j["edges"], 4);

  r = run("--json enumerate --n 1 --m 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json::parse(r.out)["graphs"], (json{"1;2;g1,g2", "1;2;g2,g1"}));

  r = run("--json enumerate --n 2 --m 2 --restricted");
  ASSERT_EQ(r.status, 0);
  EXPECT_LT(json::parse(r.out)["count"].get<int>(), 72);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("enumerate --n 0 --m 2").status, 2);
  EXPECT_EQ(run("enumerate --m 2").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("weight 'not a key'").status, 2);
  EXPECT_EQ(run("star --algebra no-such-algebra").status, 2);
  EXPECT_EQ(run("star --algebra so3 --variant sideways").status, 2);
  EXPECT_EQ(run("assoc --table missing.json").status, 2);
}

TEST_F(Cli, WeightOfTheWedge) {
  auto r = run("--json weight '1;2;g1,g2' --samples 4096");
  ASSERT_EQ(r.status, 0) << r.out;
  auto j = json::parse(r.out);
  EXPECT_NEAR(j["weight"].get<double>(), 0.25, 1e-12);
  EXPECT_EQ(j["graph_key"], "1;2;g1,g2");
  EXPECT_EQ(j["angle_map"], "harmonic");
}

TEST_F(Cli, WeightRejectsWrongEdgeCount) {
  auto r = run("weight '1;2;g1'");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.out.find("2n+m-2"), std::string::npos) << r.out;
}

TEST_F(Cli, WeightCacheIsReused) {
  ASSERT_EQ(run("weight '2;2;2,g1;g1,g2' --samples 4096 --cache w.cache").status, 0);
  auto r = run("--json cache --cache w.cache");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("2;2;2,g1;g1,g2"), std::string::npos);
  auto a = run("--json weight '2;2;2,g1;g1,g2' --samples 4096 --cache w.cache");
  auto b = run("--json weight '2;2;2,g1;g1,g2' --samples 4096");
  EXPECT_EQ(json::parse(a.out), json::parse(b.out));
}

TEST_F(Cli, JacobiViolationExitsWithFour) {
  write("broken.json", R"({"dim":3,"name":"broken","brackets":{"1,2":{"3":"1"},"1,3":{"1":"1"}}})");
  auto r = run("star --algebra broken.json --order 1 --samples 1024");
  EXPECT_EQ(r.status, 4);
  EXPECT_NE(r.out.find("Jacobi"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("(1,2,3,3)"), std::string::npos) << r.out;
}

TEST_F(Cli, StarWritesTableAndChecksPass) {
  auto r = run("star --algebra so3 --order 2 --samples 16384");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("x1 * x2"), std::string::npos);
  ASSERT_TRUE(fs::exists(dir_ / "so3-restricted-N2.json"));
  auto t = read("so3-restricted-N2.json");
  EXPECT_EQ(t["variant"], "restricted");
  EXPECT_EQ(t["order"], 2);
  EXPECT_EQ(t["orders"][1]["graphs"].size(), 20u);

  r = run("--json assoc --table so3-restricted-N2.json --max-degree 2");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(json::parse(r.out)["passed"].get<bool>());

  r = run("--json compare --table so3-restricted-N2.json --max-degree 2");
  ASSERT_EQ(r.status, 0) << r.out;
  auto c = json::parse(r.out);
  EXPECT_TRUE(c["passed"].get<bool>());
  EXPECT_TRUE(c["warnings"].empty());
  EXPECT_EQ(run("cbh-compare --table so3-restricted-N2.json --max-degree 1").status, 0);
}

TEST_F(Cli, CorruptedTableFailsTheAssociativityCheck) {
  ASSERT_EQ(run("star --algebra so3 --order 2 --samples 16384 --output t.json").status, 0);
  auto t = read("t.json");
  // Shift one second-order weight by ten times the summed standard error of its order.
  auto& graphs = t["orders"][1]["graphs"];
  double budget = 0.0;
  for (const auto& g : graphs) budget += g["std_error"].get<double>();
  auto& w = graphs[0]["weight"];
  w = w.get<double>() + 10.0 * budget;
  write("bad.json", t.dump());
  auto r = run("assoc --table bad.json --max-degree 2 --tolerance 0");
  EXPECT_EQ(r.status, 5) << r.out;
  EXPECT_EQ(run("compare --table bad.json --max-degree 2 --tolerance 0").status, 5);
  EXPECT_EQ(run("assoc --table t.json --max-degree 2").status, 0);
}

TEST_F(Cli, MalformedTableIsAUsageError) {
  write("junk.json", "{\"algebra\": 3}");
  EXPECT_EQ(run("assoc --table junk.json").status, 2);
  write("notjson.json", "not json");
  EXPECT_EQ(run("assoc --table notjson.json").status, 2);
}

TEST_F(Cli, ListsBundledAlgebras) {
  auto r = run("algebras");
  ASSERT_EQ(r.status, 0);
  for (auto name : {"abelian", "heisenberg", "so3", "sl2"}) EXPECT_NE(r.out.find(name), std::string::npos);
}
