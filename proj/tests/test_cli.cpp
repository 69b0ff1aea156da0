#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(CORRGEN_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (const std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public testing::Test {
 protected:
  void SetUp() override {
    const auto* info = testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("corrgen_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string at(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpListsEveryFlag) {
  const auto top = run("--help");
  EXPECT_EQ(top.exit_code, 0);
  for (const char* sub : {"graph", "generate", "solve", "validate", "experiment"})
    EXPECT_NE(top.output.find(sub), std::string::npos) << sub;
  const auto gen = run("generate --help");
  for (const char* flag : {"--method", "--graph-model", "--graph", "--p", "--density", "--b",
                           "--seed", "--tol", "--max-iter", "--epsilon", "--numerics",
                           "--perturb", "--out", "--report"})
    EXPECT_NE(gen.output.find(flag), std::string::npos) << flag;
  const auto solve = run("solve --help");
  for (const char* flag : {"--graph", "--seed-matrix", "--b", "--tol", "--max-iter", "--epsilon",
                           "--out", "--report"})
    EXPECT_NE(solve.output.find(flag), std::string::npos) << flag;
  const auto exp = run("experiment --help");
  for (const char* flag : {"--quick", "--config", "--out-dir", "--p", "--runs", "--seed",
                           "--threads", "--density", "--b", "--matrix"})
    EXPECT_NE(exp.output.find(flag), std::string::npos) << flag;
}

TEST_F(Cli, UnknownFlagsAndBadValuesExitTwo) {
  EXPECT_EQ(run("generate --method convex --graph-model er --frobnicate").exit_code, 2);
  EXPECT_EQ(run("generate --method magic --graph-model er").exit_code, 2);
  EXPECT_EQ(run("generate --method convex").exit_code, 2);
  EXPECT_EQ(run("generate --method convex --graph-model er --density 1.5").exit_code, 2);
  EXPECT_EQ(run("experiment figure9").exit_code, 2);
  EXPECT_EQ(run("").exit_code, 2);
}

TEST_F(Cli, GenerateConvexSmoke) {
  const auto r = run("generate --method convex --graph-model er --p 10 --density 0.5 --b -1 "
                     "--seed 7 --out " + at("m.csv") + " --report " + at("r.json"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(fs::exists(at("m.csv")));
  const auto report = slurp(at("r.json"));
  EXPECT_NE(report.find("\"status\": \"Converged\""), std::string::npos);
  EXPECT_NE(report.find("\"validation\""), std::string::npos);
}

TEST_F(Cli, GenerateChordalTriangulatesWithWarning) {
  // ER at this density is essentially never chordal.
  const auto r = run("generate --method chordal --graph-model er --p 20 --density 0.3 --seed 3 "
                     "--out " + at("m.csv") + " --report " + at("r.json"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("WARN"), std::string::npos);
  EXPECT_NE(slurp(at("r.json")).find("\"triangulated\": true"), std::string::npos);
}

TEST_F(Cli, GenerateInfeasibleExitsThree) {
  const auto r = run("generate --method convex --graph-model er --p 20 --density 0.1 --b 1.0 "
                     "--seed 2 --out " + at("m.csv") + " --report " + at("r.json"));
  EXPECT_EQ(r.exit_code, 3) << r.output;
  EXPECT_FALSE(fs::exists(at("m.csv")));
  EXPECT_NE(slurp(at("r.json")).find("InfeasibleSuspected"), std::string::npos);
}

TEST_F(Cli, IterationCapExitsFour) {
  const auto r = run("generate --method convex --graph-model er --p 20 --density 0.5 --max-iter 2 "
                     "--seed 2 --out " + at("m.csv") + " --report " + at("r.json"));
  EXPECT_EQ(r.exit_code, 4) << r.output;
}

TEST_F(Cli, BaselineMethods) {
  for (const char* method : {"diagdom", "partial-orth"}) {
    const auto r = run(std::string("generate --method ") + method +
                       " --graph-model ba --p 25 --density 0.3 --seed 4 --perturb --out " +
                       at("m.csv") + " --report " + at("r.json"));
    EXPECT_EQ(r.exit_code, 0) << method << r.output;
  }
}

TEST_F(Cli, GraphSolveValidatePipeline) {
  ASSERT_EQ(run("graph --graph-model ws --p 30 --density 0.2 --out " + at("g.txt")).exit_code, 0);
  const auto info = run("graph --graph " + at("g.txt"));
  EXPECT_NE(info.output.find("edges=90"), std::string::npos);
  EXPECT_NE(info.output.find("chordal="), std::string::npos);

  const auto s = run("solve --graph " + at("g.txt") + " --seed-matrix uniform:5 --b 0.2 --out " +
                     at("s.csv") + " --report " + at("s.json"));
  ASSERT_EQ(s.exit_code, 0) << s.output;
  const auto v = run("validate --matrix " + at("s.csv") + " --graph " + at("g.txt") + " --b 0.2");
  EXPECT_EQ(v.exit_code, 0) << v.output;
  EXPECT_NE(v.output.find("PASS mean_bound"), std::string::npos);

  // The solution reused as a seed matrix file is its own projection.
  const auto again = run("solve --graph " + at("g.txt") + " --seed-matrix " + at("s.csv") +
                         " --b 0.2 --out " + at("s2.csv") + " --report " + at("s2.json"));
  EXPECT_EQ(again.exit_code, 0) << again.output;
  EXPECT_EQ(run("solve --graph " + at("g.txt") + " --seed-matrix uniform:x").exit_code, 2);
}

TEST_F(Cli, ValidateIdentityAndPatternViolation) {
  {
    std::ofstream g(at("empty.txt"));
    g << "p=3\n";
    std::ofstream m(at("id.csv"));
    m << "1,0,0\n0,1,0\n0,0,1\n";
    std::ofstream bad(at("bad.csv"));
    bad << "1,0.001,0\n0.001,1,0\n0,0,1\n";
  }
  const auto ok = run("validate --matrix " + at("id.csv") + " --graph " + at("empty.txt"));
  EXPECT_EQ(ok.exit_code, 0) << ok.output;
  const auto bad = run("validate --matrix " + at("bad.csv") + " --graph " + at("empty.txt"));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.output.find("FAIL zero_pattern"), std::string::npos);
  EXPECT_EQ(run("validate --matrix " + at("missing.csv") + " --graph " + at("empty.txt")).exit_code,
            2);
  {
    std::ofstream ragged(at("ragged.csv"));
    ragged << "1,0\n0\n";
  }
  EXPECT_EQ(run("validate --matrix " + at("ragged.csv") + " --graph " + at("empty.txt")).exit_code,
            2);
}

TEST_F(Cli, ExperimentFeasibilityQuickWritesMetadata) {
  const auto r = run("experiment feasibility --quick --p 10 --runs 2 --out-dir " + dir_.string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  const auto csv = slurp(dir_ / "feasibility.csv");
  EXPECT_NE(csv.find("# density_grid="), std::string::npos);
  EXPECT_NE(csv.find("# b_grid="), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "feasibility_summary.json"));
}

TEST_F(Cli, ExperimentComparisonHasThreeGroupsAndIsDeterministic) {
  const std::string args = "experiment comparison --quick --runs 3 --seed 11 --out-dir ";
  ASSERT_EQ(run(args + at("a")).exit_code, 0);
  ASSERT_EQ(run(args + at("b") + " --threads 1").exit_code, 0);
  const auto csv = slurp(dir_ / "a" / "comparison.csv");
  for (const char* m : {"\ndiagdom,", "\npartial-orth,", "\nconvex,"})
    EXPECT_NE(csv.find(m), std::string::npos) << m;

  auto strip = [](const std::string& text) {
    // Drop the wall_time_s column (index 11).
    std::istringstream in(text);
    std::string out, line;
    while (std::getline(in, line)) {
      if (line.rfind("#", 0) != 0) {
        std::size_t pos = 0;
        for (int k = 0; k < 11; ++k) pos = line.find(',', pos) + 1;
        const std::size_t end = line.find(',', pos);
        line.erase(pos, end == std::string::npos ? std::string::npos : end - pos);
      }
      out += line + "\n";
    }
    return out;
  };
  EXPECT_EQ(strip(csv), strip(slurp(dir_ / "b" / "comparison.csv")));
}

TEST_F(Cli, ExperimentConfigFileAndRealData) {
  {
    std::ofstream cfg(at("cfg.json"));
    cfg << R"({"p": 6, "runs": 2, "methods": ["diagdom", "convex"]})";
    std::ofstream m(at("emp.csv"));
    m << "1,0.5,0.1,0\n0.5,1,0.3,-0.2\n0.1,0.3,1,0.4\n0,-0.2,0.4,1\n";
  }
  EXPECT_EQ(run("experiment comparison --config " + at("cfg.json") + " --out-dir " + at("o"))
                .exit_code,
            0);
  const auto r = run("experiment realdata --density 0.5 --matrix " + at("emp.csv") +
                     " --out-dir " + at("o"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  const auto csv = slurp(dir_ / "o" / "realdata.csv");
  EXPECT_NE(csv.find("source,i,j,value"), std::string::npos);
  EXPECT_NE(csv.find("\nempirical,0,1,0.5"), std::string::npos);
  EXPECT_EQ(run("experiment realdata --out-dir " + at("o")).exit_code, 2);
  {
    std::ofstream cfg(at("bad.json"));
    cfg << R"({"pp": 6})";
  }
  EXPECT_EQ(run("experiment comparison --config " + at("bad.json")).exit_code, 2);
}

TEST_F(Cli, ReadmeExamples) {
  ASSERT_EQ(run("graph --graph-model ws --p 30 --density 0.2 --out " + at("g.txt")).exit_code, 0);
  EXPECT_EQ(run("generate --method convex --graph-model er --p 51 --density 0.5 --b 0.2 --seed 7 "
                "--out " + at("m.csv") + " --report " + at("r.json"))
                .exit_code,
            0);
  EXPECT_EQ(run("generate --method chordal --graph " + at("g.txt") + " --out " + at("c.csv") +
                " --report " + at("c.json"))
                .exit_code,
            0);
  EXPECT_EQ(run("validate --matrix " + at("m.csv") + " --graph-model er").exit_code, 2);
}
