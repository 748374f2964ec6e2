#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "radsob/io.hpp"
#include "test_support.hpp"

using namespace radsob;
using testing_support::kind_of;

namespace {

std::string parse_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "expected a parse error";
  return {};
}

}  // namespace

TEST(ManifoldSpec, Kinds) {
  const ModelManifold e = parse_manifold(R"({"n": 4, "warp": {"kind": "euclidean"}})");
  EXPECT_EQ(e.n, 4);
  EXPECT_TRUE(e.is_euclidean());
  const ModelManifold h = parse_manifold(R"({"n": 3, "label": "H", "warp": {"kind": "hyperbolic", "k": 4}})");
  EXPECT_EQ(h.label, "H");
  EXPECT_DOUBLE_EQ(h.psi.curvature_parameter(), 4.0);
  const ModelManifold x = parse_manifold(R"j({"n": 3, "warp": {"kind": "expression", "formula": "sinh(r)"}})j");
  EXPECT_NEAR(x.psi.value(1.0), std::sinh(1.0), 1e-15);
  const ModelManifold g = parse_manifold(R"({"n": 3, "warp": {"kind": "grid", "samples": [[0,0],[1,1],[2,2]]}})");
  EXPECT_NEAR(g.psi.value(1.5), 1.5, 1e-14);
}

TEST(ManifoldSpec, ErrorsNameTheKey) {
  EXPECT_NE(parse_message([] { (void)parse_manifold("{"); }).find("malformed"), std::string::npos);
  EXPECT_NE(parse_message([] { (void)parse_manifold(R"({"warp": {"kind": "euclidean"}})"); }).find("manifold.n"),
            std::string::npos);
  EXPECT_NE(parse_message([] { (void)parse_manifold(R"({"n": 2, "warp": {"kind": "euclidean"}})"); }).find("manifold.n"),
            std::string::npos);
  EXPECT_NE(parse_message([] { (void)parse_manifold(R"({"n": 3, "warp": {"kind": "hyperbolic", "k": -1}})"); })
                .find("manifold.warp.k"),
            std::string::npos);
  EXPECT_NE(parse_message([] { (void)parse_manifold(R"({"n": 3, "warp": {"kind": "torus"}})"); })
                .find("manifold.warp.kind"),
            std::string::npos);
  EXPECT_NE(parse_message([] { (void)parse_manifold(R"({"n": 3, "warp": {"kind": "expression", "formula": "sinh("}})"); })
                .find("manifold.warp.formula"),
            std::string::npos);
  EXPECT_NE(parse_message([] { (void)parse_manifold(R"({"n": 3, "warp": {"kind": "grid", "samples": [[0, 0], [1]]}})"); })
                .find("manifold.warp.samples[1]"),
            std::string::npos);
}

TEST(ProfileSpec, KindsAndErrors) {
  EXPECT_DOUBLE_EQ(parse_profile(R"({"kind": "aubin_talenti", "b": 2})", 3).b, 2.0);
  const RadialProfile t = parse_profile(R"({"kind": "truncated", "b": 1, "eps": 0.5})", 3);
  EXPECT_DOUBLE_EQ(t.support_radius, 0.5);
  EXPECT_NEAR(parse_profile(R"({"kind": "gaussian", "a": 1})", 3)(1.0), std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(parse_profile(R"({"kind": "grid", "samples": [[0, 1], [1, 0]]})", 3).support_radius, 1.0);
  EXPECT_NE(parse_message([] { (void)parse_profile(R"({"kind": "truncated", "b": 1})", 3); }).find("profile.eps"),
            std::string::npos);
  EXPECT_NE(parse_message([] { (void)parse_profile(R"({"kind": "truncated", "b": 1, "eps": -1})", 3); }).find("profile.eps"),
            std::string::npos);
  EXPECT_NE(parse_message([] { (void)parse_profile(R"({"kind": "aubin_talenti", "b": "x"})", 3); }).find("profile.b"),
            std::string::npos);
  EXPECT_EQ(kind_of([] { (void)read_text("/nonexistent/file.json"); }), ErrorKind::parse);
}

// Property: CSV round-trips arbitrary doubles bit for bit.
TEST(Csv, RoundTripIsExact) {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<std::uint64_t> bits;
  CsvTable t;
  t.metadata = {"radsob test", "seed 2718"};
  t.columns = {"a", "b", "c"};
  for (int i = 0; i < 500; ++i) {
    std::vector<double> row;
    for (int j = 0; j < 3; ++j) {
      double x;
      do {
        const std::uint64_t u = bits(rng);
        std::memcpy(&x, &u, sizeof x);
      } while (!std::isfinite(x));
      row.push_back(x);
    }
    t.rows.push_back(row);
  }
  t.rows.push_back({kInf, -kInf, 0.1});
  const CsvTable back = parse_csv(to_csv(t));
  EXPECT_EQ(back.metadata, t.metadata);
  EXPECT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(back.rows[i][j], t.rows[i][j]);
  }
  EXPECT_EQ(back.column("c").back(), 0.1);
  EXPECT_EQ(kind_of([&] { (void)back.column("zz"); }), ErrorKind::range);
}

TEST(Csv, MalformedInput) {
  EXPECT_EQ(kind_of([] { (void)parse_csv("# only metadata\n"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { (void)parse_csv("a,b\n1,2,3\n"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { (void)parse_csv("a,b\n1,x\n"); }), ErrorKind::parse);
}

TEST(Csv, AtomicWriteReplacesFile) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "radsob_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "table.csv").string();
  write_atomic(path, "old\n");
  write_atomic(path, "new\n");
  EXPECT_EQ(read_text(path), "new\n");
  for (const auto& entry : fs::directory_iterator(dir)) EXPECT_EQ(entry.path().filename(), "table.csv");
  fs::remove_all(dir);
}

TEST(Reports, RigidityJsonAndCsv) {
  RigidityReport r;
  r.label = "test";
  r.c_e = 0.5;
  r.b = {1.0};
  r.quotient = {kInf};
  r.truncated_quotient = {2.5};
  r.s = {1.0};
  r.rho = {0.75};
  r.v = {1.0};
  r.sigma = {3.0};
  r.sigma_e = {2.0};
  const std::string j = to_json(r);
  EXPECT_NE(j.find("\"verdict\": \"strictly_non_euclidean\""), std::string::npos);
  EXPECT_NE(j.find("null"), std::string::npos);
  const auto tables = to_csv_tables(r);
  ASSERT_EQ(tables.size(), 3u);
  EXPECT_TRUE(std::isinf(parse_csv(to_csv(tables.at("quotient"))).column("quotient")[0]));
  EXPECT_EQ(parse_csv(to_csv(tables.at("isoperimetric"))).column("sigma_e")[0], 2.0);
}
