#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr merged into the captured output.
Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + BELLTASKS_CLI_PATH + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "belltasks-cli-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, ListGraphs) {
  const auto r = run("list-graphs");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("tetrahedron (explicit-definition)"), std::string::npos);
  EXPECT_NE(r.out.find("clamp (figure-derived, verified)"), std::string::npos);
  EXPECT_NE(r.out.find("N-gon"), std::string::npos);
}

TEST(Cli, EvalTriangleJson) {
  const auto out = scratch("triangle.json");
  const auto r = run("eval --graph triangle --task rendezvous --start any --restarts 10 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j.at("R").at("fraction"), "1/3");
  EXPECT_EQ(j.at("C").at("fraction"), "5/9");
  EXPECT_NEAR(j.at("npa").at("value").get<double>(), 0.583333, 1e-6);
  EXPECT_EQ(j.at("status"), "advantage");
}

TEST(Cli, EvalCsvFormat) {
  const auto r = run("eval --graph pentagon --restarts 5 --format csv");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("graph,task,agents,start,symmetric,R,C,seesaw,npa,level,advantage_pct,status\n", 0), 0u);
  EXPECT_NE(r.out.find(",1/5,9/25,"), std::string::npos);
}

TEST(Cli, SquareCurlyDominationHasNoAdvantage) {
  const auto r = run("eval --graph square-curly --task domination --start any --restarts 10 --format table");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("status     no-advantage"), std::string::npos) << r.out;
}

TEST(Cli, InconclusiveExitsWithTwo) {
  // Without the see-saw a positive NPA gap stays undecided.
  const auto r = run("eval --graph triangle --no-seesaw --format csv");
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_NE(r.out.find("inconclusive"), std::string::npos);
}

TEST(Cli, ExportOnlyWritesSdpa) {
  const auto file = scratch("tetra2.dat-s");
  std::filesystem::remove(file);
  const auto r = run("eval --graph tetrahedron --start distinct --npa-level 2 --export-sdpa " + file.string() +
                     " --export-sdpa-only --format csv");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("export-only"), std::string::npos);
  ASSERT_TRUE(std::filesystem::exists(file));
  const std::string first = slurp(file);
  run("eval --graph tetrahedron --start distinct --npa-level 2 --export-sdpa " + file.string() + " --export-only");
  EXPECT_EQ(slurp(file), first);
}

TEST(Cli, EnvironmentOverridesSolver) {
  const auto r = run("eval --graph triangle --no-seesaw --solver embedded",
                     "BELLTASKS_SOLVER=external BELLTASKS_SDPA_COMMAND=/nonexistent/sdpa");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("external solver"), std::string::npos) << r.out;
}

TEST(Cli, GraphFileInput) {
  const auto file = scratch("square.txt");
  std::ofstream(file) << "# square\n4 4\n1 2\n2 3\n3 4\n4 1\n";
  const auto r = run("eval --graph " + file.string() + " --restarts 5 --format csv");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("no-advantage"), std::string::npos) << r.out;
}

TEST(Cli, Errors) {
  auto r = run("eval --graph dodecahedron");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("available:"), std::string::npos);
  r = run("eval --graph triangle --task chase");
  EXPECT_EQ(r.code, 1);
  r = run("eval --graph triangle --npa-level 3");
  EXPECT_EQ(r.code, 1);
  r = run("eval --graph triangle --agents 3 --start distinct --task rendezvous --npa-level 2 --no-seesaw "
          "--export-only --format csv");
  EXPECT_EQ(r.code, 0) << r.out;
  r = run("eval");
  EXPECT_EQ(r.code, 1);
  r = run("reproduce 9");
  EXPECT_EQ(r.code, 1);
  r = run("--help");
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, DumpGame) {
  const auto r = run("dump-game --graph triangle --task domination");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("n"), 3);
}

TEST(Cli, VerifyCatalog) {
  const auto r = run("verify-catalog");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("[known misprint]"), std::string::npos);
  EXPECT_EQ(r.out.find("[MISMATCH]"), std::string::npos);
}
