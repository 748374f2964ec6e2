// Runs the radsob binary end to end. RADSOB_CLI is the path of the built tool.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "radsob/io.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("radsob_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("euclid.json", R"({"n": 3, "warp": {"kind": "euclidean"}, "label": "flat"})");
    write("hyper.json", R"({"n": 3, "warp": {"kind": "hyperbolic", "k": 1}, "label": "H3"})");
    write("sine.json", R"j({"n": 3, "warp": {"kind": "expression", "formula": "sin(r)"}, "label": "sphere"})j");
    write("broken.json", R"({"n": 3, "warp": )");
    write("trunc.json", R"({"kind": "truncated", "b": 1, "eps": 2})");
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(RADSOB_CLI) + " " + args + " > " + path("stdout.txt") + " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string stderr_text() const { return radsob::read_text(path("stderr.txt")); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ValidateExitCodes) {
  EXPECT_EQ(run("validate --manifold " + path("euclid.json")), 0);
  EXPECT_EQ(run("validate --manifold " + path("sine.json") + " --grid 0.01:3:50"), 1);
  EXPECT_NE(stderr_text().find("convexity"), std::string::npos);
  EXPECT_EQ(run("validate --manifold " + path("broken.json")), 2);
  EXPECT_EQ(run("validate --manifold " + path("missing.json")), 2);
}

TEST_F(Cli, RigidityVerdictsAndUsage) {
  EXPECT_EQ(run("rigidity --manifold " + path("euclid.json") + " --b-sweep 1,10 --out " + path("e.json")), 0);
  EXPECT_NE(radsob::read_text(path("e.json")).find("euclidean_within_tol"), std::string::npos);
  EXPECT_EQ(run("rigidity --manifold " + path("hyper.json") + " --b-sweep 1,10 --out " + path("h.json")), 0);
  EXPECT_NE(radsob::read_text(path("h.json")).find("strictly_non_euclidean"), std::string::npos);
  EXPECT_EQ(run("rigidity --manifold " + path("hyper.json") + " --b-sweep ''"), 64);
  EXPECT_EQ(run("rigidity --manifold " + path("hyper.json")), 64);
  EXPECT_EQ(run("frobnicate"), 64);
}

TEST_F(Cli, NumericalFailureNamesCurve) {
  EXPECT_EQ(run("rigidity --manifold " + path("sine.json") + " --b-sweep 1 --out " + path("s.json")), 3);
  EXPECT_NE(stderr_text().find("curve rho"), std::string::npos);
  EXPECT_EQ(run("transform --manifold " + path("sine.json")), 3);
}

TEST_F(Cli, TransformCsvOnEuclideanSpace) {
  EXPECT_EQ(run("transform --manifold " + path("euclid.json") + " --format csv --grid 0.01:10:30log --out " + path("t.csv")), 0);
  const radsob::CsvTable t = radsob::parse_csv(radsob::read_text(path("t.csv")));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"r", "s", "rho", "varrho", "v", "Sigma", "Sigma_E"}));
  ASSERT_EQ(t.rows.size(), 30u);
  for (double rho : t.column("rho")) EXPECT_EQ(rho, 1.0);
}

TEST_F(Cli, ShootMatchesBubble) {
  EXPECT_EQ(run("shoot --manifold " + path("euclid.json") + " --c 1 --r-max 10 --format csv --out " + path("u.csv")), 0);
  const radsob::CsvTable t = radsob::parse_csv(radsob::read_text(path("u.csv")));
  const auto r = t.column("r"), u = t.column("u"), ref = t.column("u_euclidean_reference");
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_NEAR(ref[i], oracle::bubble(3, 1.0, r[i]), 1e-15);
    EXPECT_NEAR(u[i] / ref[i], 1.0, 1e-6);
  }
}

TEST_F(Cli, QuotientSweepIsScaleInvariant) {
  EXPECT_EQ(run("quotient --manifold " + path("euclid.json") + " --b-sweep 0.5,1,2 --format csv --out " + path("q.csv")), 0);
  const auto q = radsob::parse_csv(radsob::read_text(path("q.csv"))).column("quotient");
  ASSERT_EQ(q.size(), 3u);
  EXPECT_NEAR(q[0] / q[1], 1.0, 1e-10);
  EXPECT_NEAR(q[2] / q[1], 1.0, 1e-10);
  EXPECT_NEAR(q[1] * oracle::talenti(3), 1.0, 1e-8);
}

TEST_F(Cli, SymmetrizeAndDeterminism) {
  const std::string args = "symmetrize --manifold " + path("hyper.json") + " --profile " + path("trunc.json") +
                           " --format csv --out ";
  EXPECT_EQ(run(args + path("a.csv")), 0);
  EXPECT_EQ(run(args + path("b.csv")), 0);
  EXPECT_EQ(radsob::read_text(path("a.csv")), radsob::read_text(path("b.csv")));
  const std::string rig = "rigidity --manifold " + path("hyper.json") + " --b-sweep 1,10,100 --out ";
  EXPECT_EQ(run(rig + path("r1.json")), 0);
  EXPECT_EQ(run(rig + path("r2.json")), 0);
  EXPECT_EQ(radsob::read_text(path("r1.json")), radsob::read_text(path("r2.json")));
}

TEST_F(Cli, RigidityCsvWritesOneFilePerCurve) {
  EXPECT_EQ(run("rigidity --manifold " + path("hyper.json") + " --b-sweep 1,10 --format csv --out " + path("rep")), 0);
  for (const char* curve : {"quotient", "rho", "isoperimetric"}) {
    EXPECT_TRUE(fs::exists(path(std::string("rep.") + curve + ".csv"))) << curve;
  }
}
