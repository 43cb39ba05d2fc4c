#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "liewe/cli.hpp"

using namespace liewe;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(LIEWE_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("liewe_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST(Cli, WeylSolveHyperbolic) {
  const auto r = run({"weyl-solve", data("hyperbolic.mla"), "--format", "records"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto recs = parse_records(r.out);
  EXPECT_EQ(std::get<long long>(recs.at("weyl.root_count")), 2);
  EXPECT_LT(std::get<double>(recs.at("weyl.residuals[0]")), 1e-8);
  EXPECT_LT(std::get<double>(recs.at("weyl.residuals[1]")), 1e-8);
  EXPECT_TRUE(std::get<bool>(recs.at("weyl.closed[1]")));
}

TEST(Cli, AaClassifySol) {
  const auto r = run({"aa-classify", data("sol.mla"), "--format", "records"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("aa.case = NoWE\n"), std::string::npos);
}

TEST(Cli, AaClassifyWitnessReportsNonFlat) {
  const auto r = run({"--format", "records", "aa-classify", data("rff_nonflat.mla")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("aa.case = TraceCase\n"), std::string::npos);
  EXPECT_NE(r.out.find("aa.rff.flat[0] = false\n"), std::string::npos);
  EXPECT_NE(r.out.find("aa.rff.ricci_flat[0] = true\n"), std::string::npos);
}

TEST(Cli, AaClassifyWithIdeal) {
  const auto r = run({"aa-classify", data("heisenberg.mla"), "--ideal", "0:1:0,0:0:1", "--format", "records"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("aa.b = [1.0000000000000000 0.0000000000000000 0.0000000000000000]"), std::string::npos);
  const auto bad = run({"aa-classify", data("heisenberg.mla"), "--ideal", "1:0:0,0:1:0"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("E_HINT"), std::string::npos);
}

TEST(Cli, Catalog3dG0) {
  const auto r = run({"catalog3d", "--family", "g0", "--metric", "m", "--nu", "1", "--format", "records"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# cl3.admits = true\n"), std::string::npos);
  EXPECT_NE(r.out.find("# buv.case = DirForm\n"), std::string::npos);
  // the output is itself a document
  const auto doc = parse_mla(r.out);
  EXPECT_EQ(doc.dim, 3);
  EXPECT_EQ(doc.metric(0, 1), 0.5);
  const auto pos = r.out.find("# buv.alpha = ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(r.out.substr(pos + 14)), 2.0, 1e-9);
}

TEST(Cli, Catalog3dInputErrors) {
  EXPECT_EQ(run({"catalog3d", "--family", "so2r2", "--metric", "gmunu", "--mu", "2"}).code, 2);
  EXPECT_EQ(run({"catalog3d", "--family", "gt", "--metric", "hmunu"}).code, 2);
  EXPECT_EQ(run({"catalog3d", "--family", "nope", "--metric", "std"}).code, 2);
}

TEST(Cli, CurvatureReport) {
  const auto r = run({"curvature", data("hyperbolic.mla"), "--format", "records"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ricci.scalar = -6.0000000000000000\n"), std::string::npos);
  EXPECT_NE(r.out.find("einstein.is_einstein = true\n"), std::string::npos);
}

TEST(Cli, ValidateAndReport) {
  const auto v = run({"validate", data("sol.mla")});
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_NE(v.out.find("flags.solvable"), std::string::npos);
  const auto r = run({"report", data("heisenberg.mla"), "--format", "records"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("weyl.root_count = 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("aa.case = NoWE\n"), std::string::npos);
}

TEST(Cli, ReportOnNonAlmostAbelian) {
  const auto f = temp_file("so3.mla",
                           "mla 1\ndim 3\nbracket 1 2 = 0 0 1\nbracket 2 3 = 1 0 0\nbracket 1 3 = 0 -1 0\n"
                           "metric\n1 0 0\n0 1 0\n0 0 1\n");
  const auto r = run({"report", f, "--format", "records"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("aa.case = NotAlmostAbelian\n"), std::string::npos);
  const auto a = run({"aa-classify", f});
  EXPECT_EQ(a.code, 1);
  EXPECT_NE(a.err.find("E_NOT_ALMOST_ABELIAN"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto missing = run({"validate", data("does_not_exist.mla")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("E_IO"), std::string::npos);

  const auto bad = temp_file("bad.mla", "mla 1\ndim 3\nbracket 1 1 = 0 0 0\nmetric\n1 0 0\n0 1 0\n0 0 1\n");
  const auto p = run({"curvature", bad});
  EXPECT_EQ(p.code, 2);
  EXPECT_NE(p.err.find("E_PARSE_SELF_BRACKET line 3"), std::string::npos);

  const auto jac = temp_file("jacobi.mla",
                             "mla 1\ndim 3\nbracket 1 2 = 0 0 1\nbracket 2 3 = 1 0 0\nbracket 1 3 = 1 0 0\n"
                             "metric\n1 0 0\n0 1 0\n0 0 1\n");
  const auto j = run({"validate", jac, "--format", "records"});
  EXPECT_EQ(j.code, 2);
  EXPECT_NE(j.out.find("algebra.valid = false"), std::string::npos);
  EXPECT_NE(j.err.find("E_PARSE_JACOBI line 5"), std::string::npos);

  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"weyl-solve", data("sol.mla"), "--starts", "0"}).code, 2);
  EXPECT_EQ(run({"report", data("sol.mla"), "--format", "yaml"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"weyl-solve", "--help"}).code, 0);
}

TEST(Cli, ByteDeterminism) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"report", data("example_s0.mla"), "--format", "records"},
           {"weyl-solve", data("filiform4.mla"), "--seed", "7"},
           {"catalog3d", "--family", "gt", "--t", "2", "--metric", "hmunu", "--mu", "2"}}) {
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}
