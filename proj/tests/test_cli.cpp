#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "tas_cli.hpp"

namespace fs = std::filesystem;
using tas::cli::run_cli;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("tas_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::size_t file_count() const {
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& e : fs::recursive_directory_iterator(dir)) ++n;
    return n;
  }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, SimulateWritesPatternAndSidecars) {
  const CliRun r = cli({"simulate", "--alpha", "0.6", "--lambda", "0.2", "--mu0", "uniform:1", "--window", "0:200",
                     "--seed", "3", "--stream", "2", "--out", path("p.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("p.window.json")));
  const auto meta = tas::read_json_file(path("p.meta.json"));
  EXPECT_EQ(meta.at("seed"), 3);
  EXPECT_EQ(meta.at("stream"), 2);
  const std::string first = tas::read_text_file(path("p.csv"));
  ASSERT_EQ(cli({"simulate", "--alpha", "0.6", "--lambda", "0.2", "--mu0", "uniform:1", "--window", "0:200",
                 "--seed", "3", "--stream", "2", "--out", path("q.csv")}).code, 0);
  EXPECT_EQ(tas::read_text_file(path("q.csv")), first);
}

TEST_F(Cli, InvalidFlagsExitTwoWithoutFiles) {
  EXPECT_EQ(cli({"simulate", "--alpha", "1.2", "--lambda", "0.2", "--mu0", "uniform:1", "--window", "0:10",
                 "--out", path("a.csv")}).code, 2);
  EXPECT_EQ(cli({"simulate", "--alpha", "0.5", "--lambda", "0.2", "--mu0", "gauss:2:1", "--window", "0:10",
                 "--out", path("b.csv")}).code, 2);
  EXPECT_EQ(cli({"simulate", "--bogus", "1"}).code, 2);
  EXPECT_EQ(cli({"replicate", "table2", "--out", path("t")}).code, 2);
  EXPECT_EQ(cli({"replicate", "table1", "--method", "cluster-sizes", "--out", path("t")}).code, 2);
  EXPECT_EQ(cli({"replicate", "table1", "--p", "0.5:0.1:0.1", "--out", path("t")}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(file_count(), 0u);
}

TEST_F(Cli, InputErrorsExitThree) {
  tas::write_text_file(path("bad.csv"), "x\n0.5\nnope\n");
  tas::write_text_file(path("bad.window.json"), "{\"lower\": [0], \"upper\": [1]}\n");
  const CliRun r = cli({"fit", "--in", path("bad.csv"), "--method", "cluster-sizes", "--out", path("f.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
  EXPECT_EQ(cli({"fit", "--in", path("missing.csv"), "--window", "0:1", "--method", "cluster-sizes", "--out",
                 path("f.json")}).code, 3);
  EXPECT_FALSE(fs::exists(path("f.json")));
}

TEST_F(Cli, FitMethods) {
  ASSERT_EQ(cli({"simulate", "--alpha", "0.7", "--lambda", "0.4", "--mu0", "uniform:1", "--window", "0:500",
                 "--seed", "9", "--out", path("p.csv")}).code, 0);
  for (const std::string m : {"void", "void-thinned", "pgf", "cluster-sizes"}) {
    std::vector<std::string> a{"fit", "--in", path("p.csv"), "--method", m, "--out", path(m + ".json")};
    if (m != "cluster-sizes") a.insert(a.end(), {"--mu0", "uniform:1"});
    const CliRun r = cli(a);
    ASSERT_EQ(r.code, 0) << m << ": " << r.err;
    const auto j = tas::read_json_file(path(m + ".json"));
    EXPECT_EQ(j.at("method"), m);
    EXPECT_GT(j.at("alpha_hat").get<double>(), 0.3);
  }
  const auto vt = tas::read_json_file(path("void-thinned.json"));
  EXPECT_EQ(vt.at("p_values").size(), 8u);
  ASSERT_EQ(cli({"fit", "--in", path("p.csv"), "--method", "void-thinned", "--mu0", "uniform:1", "--p",
                 "0.3:1:0.1", "--out", path("range.json")}).code, 0);
  EXPECT_EQ(tas::read_json_file(path("range.json")).at("p_values"), vt.at("p_values"));
  EXPECT_EQ(cli({"fit", "--in", path("p.csv"), "--method", "void", "--out", path("x.json")}).code, 2);
  EXPECT_EQ(cli({"fit", "--in", path("p.csv"), "--method", "void", "--mu0", "uniform:1", "--p", "0.5",
                 "--out", path("x.json")}).code, 2);
}

TEST_F(Cli, ClusterSizesOfSingletons) {
  tas::write_text_file(path("s.csv"), "x,cluster\n0.1,a\n0.2,b\n0.3,c\n0.4,d\n");
  ASSERT_EQ(cli({"fit", "--in", path("s.csv"), "--window", "0:1", "--method", "cluster-sizes", "--out",
                 path("s.json")}).code, 0);
  EXPECT_EQ(tas::read_json_file(path("s.json")).at("alpha_hat"), 1.0);
}

TEST_F(Cli, GcurveWritesBothCurves) {
  ASSERT_EQ(cli({"simulate", "--alpha", "0.7", "--lambda", "0.4", "--mu0", "uniform:1", "--window", "0:300",
                 "--out", path("p.csv")}).code, 0);
  ASSERT_EQ(cli({"gcurve", "--alpha", "0.7", "--lambda", "0.4", "--mu0", "uniform:1", "--in", path("p.csv"),
                 "--radii", "0.5:2:0.5", "--out", path("g")}).code, 0);
  std::istringstream a(tas::read_text_file(path("g/analytic.csv")));
  std::istringstream e(tas::read_text_file(path("g/empirical.csv")));
  EXPECT_EQ(tas::read_curve(a).size(), 4u);
  EXPECT_EQ(tas::read_curve(e).size(), 4u);
}

TEST_F(Cli, ReplicateTable1Layout) {
  const CliRun r = cli({"replicate", "table1", "--reps", "2", "--method", "pgf", "--jobs", "2", "--test-points",
                     "grid:100", "--out", path("t1")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* s : {"alpha0.6_lambda0.02", "alpha0.6_lambda0.4", "alpha0.8_lambda0.02", "alpha0.8_lambda0.4"}) {
    const fs::path d = dir / "t1" / s;
    EXPECT_TRUE(fs::exists(d / "report.json"));
    EXPECT_TRUE(fs::exists(d / "report.csv"));
    EXPECT_TRUE(fs::exists(d / "fit_000.json"));
    EXPECT_TRUE(fs::exists(d / "fit_001.json"));
  }
  EXPECT_TRUE(fs::exists(dir / "t1" / "table1.csv"));
}

TEST_F(Cli, HelpListsFlags) {
  const CliRun top = cli({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const char* s : {"simulate", "fit", "gcurve", "replicate"}) EXPECT_NE(top.out.find(s), std::string::npos);
  const CliRun fit = cli({"fit", "--help"});
  for (const char* f : {"--mu0", "--window", "--seed", "--stream", "--method", "--p", "--test-points", "--out"})
    EXPECT_NE(fit.out.find(f), std::string::npos) << f;
  const CliRun rep = cli({"replicate", "--help"});
  for (const char* f : {"--seed", "--reps", "--jobs", "--method", "--p", "--out"})
    EXPECT_NE(rep.out.find(f), std::string::npos) << f;
  const CliRun sim = cli({"simulate", "--help"});
  for (const char* f : {"--alpha", "--lambda", "--mu0", "--window", "--seed", "--stream", "--out"})
    EXPECT_NE(sim.out.find(f), std::string::npos) << f;
}

TEST_F(Cli, BinaryExitCodes) {
  const char* bin = std::getenv("TAS_CLI");
  if (!bin) GTEST_SKIP() << "TAS_CLI not set";
  const auto run = [&](const std::string& args) {
    const int s = std::system((std::string(bin) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("simulate --alpha 0 --lambda 1 --mu0 uniform:1 --window 0:1 --out " + path("a.csv")), 2);
  EXPECT_EQ(run("fit --in " + path("none.csv") + " --window 0:1 --method cluster-sizes --out " + path("b.json")), 3);
  EXPECT_EQ(run("simulate --alpha 0.5 --lambda 1 --mu0 uniform:1 --window 0:10 --out " + path("c.csv")), 0);
  EXPECT_EQ(file_count(), 3u);
}
