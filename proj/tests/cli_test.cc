#include "cli.h"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fastjl/linalg.h"
#include "fastjl/privacy.h"

namespace fastjl::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fastjl");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fastjl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    unsetenv("FASTJL_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("FASTJL_SEED");
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run_cli({}).code, kUsage);
  EXPECT_EQ(run_cli({"nonsense"}).code, kUsage);
  EXPECT_EQ(run_cli({"gen", "--kind", "nope", "--n", "16", "--r", "2"}).code, kUsage);
  EXPECT_EQ(run_cli({"gen", "--n", "16"}).code, kUsage);
  EXPECT_EQ(run_cli({"bench", "--reps", "5"}).code, kUsage);
  EXPECT_EQ(run_cli({"jlp", "--check", "bogus", "--trials", "1"}).code, kUsage);
}

TEST_F(CliTest, HelpAndVersionExitZero) {
  EXPECT_EQ(run_cli({"--help"}).code, kOk);
  const Result v = run_cli({"--version"});
  EXPECT_EQ(v.code, kOk);
  EXPECT_NE(v.out.find(kVersion), std::string::npos);
}

TEST_F(CliTest, GenRealizesCsv) {
  const std::string csv = path("phi.csv");
  const Result r = run_cli({"gen", "--kind", "new-rademacher", "--n", "16", "--r", "4", "--seed", "3",
                            "--realize", csv, "--deterministic"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const Matrix m = read_matrix_csv(csv);
  EXPECT_EQ(m.rows(), 4u);
  EXPECT_EQ(m.cols(), 16u);
  EXPECT_NE(r.err.find("--allow-large-r implied"), std::string::npos);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["command"], "gen");
  EXPECT_EQ(j["seed"], 3);
  EXPECT_FALSE(j.contains("timestamp"));
  EXPECT_EQ(j["report"]["bits_used"].get<int>() - j["report"]["permutation_bits"].get<int>(), 32);
}

TEST_F(CliTest, DeterministicOutputIsByteIdentical) {
  const std::vector<std::string> args{"jlp", "--kind", "new-rademacher", "--n", "256", "--r", "8",
                                      "--trials", "200", "--seed", "5", "--deterministic"};
  const Result a = run_cli(args), b = run_cli(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--workers", "2"});
  const Json ja = Json::parse(a.out), jb = Json::parse(run_cli(threaded).out);
  EXPECT_EQ(ja["report"], jb["report"]);
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  setenv("FASTJL_SEED", "77", 1);
  const Result r = run_cli({"gen", "--kind", "dense-gaussian", "--n", "8", "--r", "2", "--deterministic"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["seed"], 77);
  const Result explicit_seed =
      run_cli({"gen", "--kind", "dense-gaussian", "--n", "8", "--r", "2", "--seed", "4", "--deterministic"});
  EXPECT_EQ(Json::parse(explicit_seed.out)["seed"], 4);
  setenv("FASTJL_SEED", "abc", 1);
  EXPECT_EQ(run_cli({"gen", "--kind", "dense-gaussian", "--n", "8", "--r", "2"}).code, kUsage);
}

TEST_F(CliTest, MissingFilesExitThree) {
  EXPECT_EQ(run_cli({"dp", "publish", "--matrix", path("missing.csv")}).code, kResource);
  EXPECT_EQ(run_cli({"dp", "threshold", "--out", path("no/such/dir/x.json")}).code, kResource);
  EXPECT_EQ(run_cli({"dp", "cut", "--graph", path("missing.csv")}).code, kResource);
}

TEST_F(CliTest, PrivacyPreconditionExitsTwo) {
  std::ostringstream csv;
  write_matrix_csv(Matrix::Identity(8), csv);
  const std::string m = write("id.csv", csv.str());
  const Result r = run_cli({"dp", "publish", "--matrix", m, "--r", "8", "--kind", "dense-gaussian"});
  EXPECT_EQ(r.code, kPrecondition);
  EXPECT_NE(r.err.find("threshold"), std::string::npos);
}

TEST_F(CliTest, PublishWithLiftWritesSketchAndReport) {
  std::ostringstream csv;
  write_matrix_csv(Matrix::Identity(4), csv);
  const std::string m = write("id.csv", csv.str());
  const std::string out = path("sketch.csv"), rep = path("report.json");
  const Result r = run_cli({"dp", "publish", "--matrix", m, "--r", "8", "--kind", "dense-gaussian", "--lift",
                            "--w", "1500", "--out", out, "--report", rep, "--deterministic"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const Matrix s = read_matrix_csv(out);
  EXPECT_EQ(s.rows(), 8u);
  EXPECT_EQ(s.cols(), 4u);
  std::ifstream f(rep);
  const Json j = Json::parse(f);
  EXPECT_TRUE(j["report"]["lifted"].get<bool>());
}

TEST_F(CliTest, ThresholdAndCompose) {
  const Result t = run_cli({"dp", "threshold", "--r", "8"});
  ASSERT_EQ(t.code, kOk);
  EXPECT_NEAR(Json::parse(t.out)["report"]["value"].get<double>(), w_threshold(1.0, 0.1, 8), 1e-9);
  const Result c = run_cli({"dp", "compose", "--alpha0", "0.1", "--beta0", "0.01", "--ell", "1",
                            "--beta-prime", "0.01"});
  ASSERT_EQ(c.code, kOk);
  EXPECT_NEAR(Json::parse(c.out)["report"]["alpha"].get<double>(), 0.32348542587702927017, 1e-12);
}

TEST_F(CliTest, CutQueries) {
  const std::string g = write("tri.csv", "0,1\n1,2\n0,2,1.0\n");
  const Result r = run_cli({"dp", "cut", "--graph", g, "--r", "8", "--kind", "dense-gaussian", "--set", "0",
                            "--set", "0,1", "--with-exact"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const Json q = Json::parse(r.out)["report"]["queries"];
  ASSERT_EQ(q.size(), 2u);
  EXPECT_EQ(q[0]["exact"], 2.0);
  const std::string loop = write("loop.csv", "1,1\n");
  EXPECT_EQ(run_cli({"dp", "cut", "--graph", loop}).code, kPrecondition);
}

TEST_F(CliTest, StreamScript) {
  const std::string s = write("s.csv", "A,0,1,0\nA,1,0,1\nb,3,4\nquery\n");
  const Result r = run_cli({"dp", "stream", "--script", s, "--sketch", "lr", "--rows", "2", "--m", "2", "--r",
                            "16", "--kind", "dense-gaussian", "--non-private"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const Json q = Json::parse(r.out)["report"]["queries"][0];
  EXPECT_NEAR(q[0].get<double>(), 3.0, 1e-6);
  EXPECT_NEAR(q[1].get<double>(), 4.0, 1e-6);
  const std::string bad = write("bad.csv", "Z,0,1\n");
  EXPECT_EQ(run_cli({"dp", "stream", "--script", bad, "--sketch", "lr", "--rows", "2", "--m", "2", "--r", "16",
                     "--kind", "dense-gaussian", "--non-private"})
                .code,
            kResource);
}

TEST_F(CliTest, AttackAndControl) {
  const Result a = run_cli({"attack", "--target", "hash-sparse", "--n", "64", "--r", "8", "--w", "10",
                            "--trials", "200", "--pair", "hadamard"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_GT(Json::parse(a.out)["report"]["success_rate"].get<double>(), 0.2);
  const Result c = run_cli({"attack", "--target", "hash-sparse", "--n", "64", "--r", "8", "--trials", "100",
                            "--pair", "hadamard", "--control", "gaussian", "--mechanism", "new-gaussian"});
  ASSERT_EQ(c.code, kOk) << c.err;
  EXPECT_EQ(Json::parse(c.out)["report"]["event_fires"], 0);
}

TEST_F(CliTest, RipAndBench) {
  const Result r = run_cli({"rip", "--kind", "dense-gaussian", "--n", "16", "--r", "8", "--k", "2", "--seeds", "3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["report"]["deltas"].size(), 3u);
  const Result b = run_cli({"bench", "--kind", "new-rademacher", "--n-range", "256:512", "--r", "4"});
  ASSERT_EQ(b.code, kOk) << b.err;
  EXPECT_EQ(Json::parse(b.out)["report"]["sizes"].size(), 2u);
}

TEST_F(CliTest, SelftestPasses) {
  const Result r = run_cli({"selftest"});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(run_cli({"selftest", "--acceptance", "13"}).code, kUsage);
}

int system_exit(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, InstalledBinaryExitCodes) {
  const std::string bin = FASTJL_BINARY;
  const std::string out = path("gen.json");
  EXPECT_EQ(system_exit(bin + " gen --kind hash-sparse --n 16 --r 4 --deterministic > " + out + " 2>/dev/null"), 0);
  std::ifstream f(out);
  EXPECT_EQ(Json::parse(f)["report"]["r"], 4);
  EXPECT_EQ(system_exit(bin + " > /dev/null 2>&1"), 1);
  EXPECT_EQ(system_exit(bin + " dp publish --matrix " + path("none.csv") + " > /dev/null 2>&1"), 3);
  EXPECT_EQ(system_exit("FASTJL_SEED=9 " + bin + " dp threshold --deterministic --out " + out), 0);
  std::ifstream g(out);
  EXPECT_EQ(Json::parse(g)["seed"], 9);
}

}  // namespace
}  // namespace fastjl::cli
