#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "crosscov/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "crosscov");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = crosscov::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(CROSSCOV_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "crosscov_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, EvalUnitSquares) {
  const auto r = run({"eval", data("unit_square.json"), data("unit_square.json"), "--x", "1/2,0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1/2\n");
  const auto d = run({"--decimal", "3", "eval", data("unit_square.json"), data("unit_square.json"), "--x", "0.25,0"});
  EXPECT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(d.out, "0.750\n");
}

TEST(Cli, VerifyFamilies) {
  const auto r = run({"verify", data("family1.json"), data("family2.json"), "--probes", "1000", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "EQUAL\n");
  const auto s = run({"verify", data("family3.json"), data("family4.json"), "--probes", "200"});
  EXPECT_EQ(s.out, "EQUAL\n");
  const auto d = run({"verify", data("family1.json"), data("family3.json"), "--probes", "50"});
  EXPECT_EQ(d.code, 1);
  EXPECT_EQ(d.out.rfind("DIFFERENT at ", 0), 0u) << d.out;
}

TEST(Cli, MissingFileIsDomainError) {
  const auto r = run({"eval", "/nonexistent/missing.json", data("unit_square.json"), "--x", "0,0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("FileError"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  const auto missing = run({"eval", data("unit_square.json")});
  EXPECT_EQ(missing.code, 2);
  const auto probes = run({"verify", data("family1.json"), data("family2.json"), "--probes", "0"});
  EXPECT_EQ(probes.code, 2);
  EXPECT_NE(probes.err.find("--probes"), std::string::npos) << probes.err;
  const auto res = run({"grid", data("unit_square.json"), data("triangle.json"), "--resolution", "1"});
  EXPECT_EQ(res.code, 2);
  EXPECT_NE(res.err.find("--resolution"), std::string::npos) << res.err;
  EXPECT_EQ(run({"catalog", "--family", "7"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DomainErrorsCarryModuleName) {
  const fs::path bad = scratch("bowtie.json");
  std::ofstream(bad) << R"({"vertices": [["0","0"],["1","1"],["1","0"],["0","1"]]})";
  const auto r = run({"eval", bad.string(), data("unit_square.json"), "--x", "0,0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("NotConvex"), std::string::npos) << r.err;
  const fs::path garbage = scratch("garbage.json");
  std::ofstream(garbage) << "{not json";
  const auto g = run({"support", garbage.string(), data("unit_square.json")});
  EXPECT_EQ(g.code, 1);
  EXPECT_NE(g.err.find("ParseError"), std::string::npos) << g.err;
}

TEST(Cli, SupportAndSingularSet) {
  const auto s = run({"support", data("unit_square.json"), data("unit_square.json")});
  ASSERT_EQ(s.code, 0) << s.err;
  const json j = json::parse(s.out);
  EXPECT_EQ(j["vertices"], json::parse(R"([["-1","-1"],["1","-1"],["1","1"],["-1","1"]])"));
  const auto ss = run({"ssets", data("unit_square.json"), data("unit_square.json")});
  ASSERT_EQ(ss.code, 0) << ss.err;
  const json k = json::parse(ss.out);
  EXPECT_EQ(k["segments"].size(), 6u);
  EXPECT_EQ(k["raw_count"], 32);
}

TEST(Cli, GridCsv) {
  const fs::path out = scratch("grid.csv");
  const auto r = run({"grid", data("unit_square.json"), data("unit_square.json"), "--resolution", "3", "-o", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(slurp(out));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "x,y,value,x_exact,y_exact,value_exact");
  int rows = 0;
  bool centre = false;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.find(",0,0,1") != std::string::npos) centre = true;
  }
  EXPECT_EQ(rows, 9);
  EXPECT_TRUE(centre);
}

TEST(Cli, ConeCommands) {
  const fs::path first = scratch("cones_first.json");
  std::ofstream(first) << json::parse(slurp(data("cones_counterexample.json")))["first"].dump();
  const auto e = run({"cone-eval", first.string(), "--x", "1,2"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(e.out, "7/4\n");
  EXPECT_EQ(run({"cone-eval", data("cones_counterexample.json"), "--x", "1,2"}).code, 1);
  const auto r = run({"cone-recover", "--oracle-pair", data("cones_case3.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json k = json::parse(r.out);
  EXPECT_EQ(k["kind"], "unique");
  EXPECT_EQ(k["case"], "case-3");
  EXPECT_EQ(k["solutions"].size(), 1u);
}

TEST(Cli, ReconstructAndCatalog) {
  const auto r = run({"reconstruct", "--hidden", data("family1.json"), "--probes", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["kind"], "exceptional_family_12");
  EXPECT_EQ(j["pairs"].size(), 2u);
  const auto c = run({"catalog", "--family", "1"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(json::parse(c.out), json::parse(slurp(data("family1.json"))));
  const auto cones = run({"catalog", "--family", "cones"});
  ASSERT_EQ(cones.code, 0) << cones.err;
  EXPECT_TRUE(json::parse(cones.out).contains("first"));
}

TEST(Cli, SymmetryCheck) {
  const auto r = run({"symcheck", data("unit_square.json"), data("unit_square.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["found"].get<bool>());
  const auto t = run({"symcheck", data("unit_square.json"), data("triangle.json")});
  EXPECT_FALSE(json::parse(t.out)["found"].get<bool>());
}

TEST(Cli, RenderRecipes) {
  for (const std::string recipe : {"heatmap", "cones", "parall", "parall_due"}) {
    std::vector<std::string> args{"render", "--recipe", recipe, "-o", scratch(recipe + ".svg").string()};
    if (recipe == "heatmap") {
      args.insert(args.begin() + 1, data("triangle.json"));
      args.insert(args.begin() + 1, data("unit_square.json"));
    }
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << recipe << ": " << r.err;
    const std::string svg = slurp(scratch(recipe + ".svg"));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u) << recipe;
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
  }
  const fs::path cfg = scratch("bad.cfg");
  std::ofstream(cfg) << "colour = red\n";
  EXPECT_EQ(run({"render", "--recipe", "cones", "--config", cfg.string(), "-o", scratch("x.svg").string()}).code, 1);
}

TEST(Cli, ByteIdenticalAcrossRuns) {
  const std::vector<std::vector<std::string>> cmds{
      {"reconstruct", "--hidden", data("family3.json"), "--probes", "50", "--seed", "4"},
      {"verify", data("family1.json"), data("family2.json"), "--probes", "100", "--seed", "9"},
      {"ssets", data("unit_square.json"), data("triangle.json")},
      {"grid", data("unit_square.json"), data("triangle.json"), "--resolution", "7"},
  };
  for (const auto& c : cmds) {
    const auto a = run(c), b = run(c);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
  const fs::path p = scratch("a.svg"), q = scratch("b.svg");
  run({"render", "--recipe", "parall", "-o", p.string()});
  run({"render", "--recipe", "parall", "-o", q.string()});
  EXPECT_EQ(slurp(p), slurp(q));
}
