#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string &args, const std::string &env = "", bool merge_stderr = true) {
  const std::string cmd =
      env + (env.empty() ? "" : " ") + "\"" STIELTJES_CLI_PATH "\" " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE *p = popen(cmd.c_str(), "r");
  if (!p)
    return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0)
    r.out.append(buf, got);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

bool contains(const std::string &s, const std::string &needle) { return s.find(needle) != std::string::npos; }

} // namespace

TEST(Cli, CriteriaSummary) {
  const auto r = run("criteria --seq tm1:r=1");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "overall   Unique")) << r.out;
  const auto nu = run("criteria --seq tm2:r=2");
  EXPECT_EQ(nu.status, 0);
  EXPECT_TRUE(contains(nu.out, "overall   NonUnique")) << nu.out;
}

TEST(Cli, CriteriaJson) {
  const auto r = run("criteria --seq tm1:r=2 --json", "", false);
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "\"kind\": \"criterion_report\"")) << r.out;
  EXPECT_TRUE(contains(r.out, "\"overall\": \"NonUnique\""));
}

TEST(Cli, MomentsTable) {
  const auto r = run("moments --seq tm1:r=2 --n 0..6 --table", "", false);
  EXPECT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,log_integral,log_target,rel_error,nodes_used");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string f;
    for (int i = 0; i < 4; ++i)
      std::getline(fields, f, ',');
    EXPECT_LE(std::stod(f), 1e-6) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 7);
}

TEST(Cli, AmplitudeConstraintIsUsageError) {
  const auto r = run("class --seq tm1:r=2 --k 1 --eps 1.5");
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(contains(r.out, "|eps| < 1")) << r.out;
}

TEST(Cli, IndexConstraintMessage) {
  const auto r = run("class --seq tm2:r=4 --k 2 --gamma 0.1");
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(contains(r.out, "r > 2|k|")) << r.out;
}

TEST(Cli, BadSequenceIsUsageError) {
  EXPECT_EQ(run("eval --seq tm9:r=1 --x 1").status, 1);
  EXPECT_EQ(run("moments").status, 1);
}

TEST(Cli, FindGammaMax) {
  const auto r = run("class --seq tm2:r=3 --k 1 --find-gamma-max", "", false);
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "\"kind\": \"gamma_bound\"")) << r.out;
  EXPECT_TRUE(contains(r.out, "\"gamma_max\""));
}

TEST(Cli, Eval) {
  const auto r = run("eval --seq tm2:r=1 --x 0.25 1", "", false);
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "\"representation\": \"closed_form\"")) << r.out;
  // 2 K0(1)
  EXPECT_TRUE(contains(r.out, "0.84204887648141")) << r.out;
}

TEST(Cli, ClassCsv) {
  const auto r = run("class --seq tm1:r=2 --k 1 --eps 0.5 --points 20", "", false);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("x,base,member,omega\n", 0), 0u) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 21);
}

TEST(Cli, OutputIndependentOfThreadCount) {
  for (const char *args : {"moments --seq tm4:r=1 --n 0..3", "class --seq tm2:r=3 --k 1 --gamma 0.3 --points 50"}) {
    const auto one = run(args, "STIELTJES_THREADS=1", false);
    const auto two = run(args, "STIELTJES_THREADS=2", false);
    EXPECT_EQ(one.status, 0);
    EXPECT_EQ(one.out, two.out) << args;
  }
}
