#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "k3lat/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "k3lat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = k3lat::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, LatticeInfoE8) {
  auto r = run({"--format", "json", "lattice", "info", "E8"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["determinant"], "1");
  EXPECT_EQ(j["signature"], nlohmann::json({0, 0, 8}));
  EXPECT_EQ(j["even"], true);
  EXPECT_EQ(j["discriminant"]["order"], 1);
}

TEST(Cli, LatticeInfoText) {
  auto r = run({"lattice", "info", "K3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("signature: (3,0,19)"), std::string::npos) << r.out;
}

TEST(Cli, LatticeFromJsonFile) {
  const std::string path = testing::TempDir() + "k3lat_cli_a2.json";
  {
    std::ofstream f(path);
    f << R"({"gram": [[-2, 1], [1, -2]]})";
  }
  auto r = run({"--format", "json", "lattice", "roots", path});
  std::remove(path.c_str());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["count"], 6);
}

TEST(Cli, DiscrAndExtend) {
  auto d = run({"discr", "8A2"});
  ASSERT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("order: 6561"), std::string::npos) << d.out;
  auto e = run({"--format", "json", "extend", "3A2", "--kernel", "1,1,1"});
  ASSERT_EQ(e.code, 0) << e.err;
  auto j = nlohmann::json::parse(e.out);
  EXPECT_EQ(j["determinant"], "3");
  EXPECT_EQ(j["quasi_primitive"], false);
  EXPECT_EQ(j["roots"], 72);
  EXPECT_EQ(run({"extend", "3A2", "--kernel", "1,1,0"}).code, 2);
}

TEST(Cli, VerifyThreeA2Claim) {
  auto r = run({"--format", "json", "verify", "lemma31"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "verified");
}

TEST(Cli, CasesDegreeFour) {
  auto r = run({"cases", "--degree", "4", "--genus", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("(1,1): real-structure"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("(2,2): excluded-by-count"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("(4,4): reduces-to-cusp-curve, k = 8"), std::string::npos) << r.out;
  auto j = nlohmann::json::parse(run({"--format", "json", "cases", "--degree", "4", "--genus", "1"}).out);
  EXPECT_EQ(j["verdicts"].size(), 3u);
  EXPECT_EQ(j["verdicts"][2]["verdict"], "reduces-to-cusp-curve");
  EXPECT_EQ(run({"cases", "--degree", "6", "--genus", "1"}).code, 2);
}

TEST(Cli, WronskianCommands) {
  auto c = run({"--format", "json", "wronskian", "--curve", "1; t; t^3"});
  ASSERT_EQ(c.code, 0) << c.err;
  auto jc = nlohmann::json::parse(c.out);
  EXPECT_EQ(jc["wronskian"], "6*t");
  EXPECT_EQ(jc["flattening_points_all_real"], true);
  auto m = run({"--format", "json", "wronskian", "--map", "(t^2-1)/t"});
  ASSERT_EQ(m.code, 0) << m.err;
  auto jm = nlohmann::json::parse(m.out);
  EXPECT_EQ(jm["critical_polynomial"], "t^2 + 1");
  EXPECT_EQ(jm["critical_points_all_real"], false);
  EXPECT_EQ(jm["realifiable"], true);
  EXPECT_EQ(jm["delta"], 1);
  EXPECT_EQ(run({"wronskian"}).code, 2);
  EXPECT_EQ(run({"wronskian", "--map", "t^^2"}).code, 2);
}

TEST(Cli, UsageErrors) {
  auto r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"verify", "lemma99"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "lattice", "info", "E8"}).code, 2);
  EXPECT_EQ(run({"lattice", "info", "Q9"}).code, 2);
}

TEST(Cli, ResourceBound) {
  auto r = run({"--max-root-rank", "4", "lattice", "roots", "E8"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("resource bound"), std::string::npos);
}

TEST(Cli, JsonOutputIsByteDeterministic) {
  const std::vector<std::string> args{"--format", "json", "--seed", "3", "verify", "prop33"};
  auto a = run(args);
  auto b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}
