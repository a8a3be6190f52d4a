#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "json.hpp"

namespace {

struct CliResult {
  int rc = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  std::string cmd = std::string(BRUHAT_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  int st = pclose(f);
  r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

nlohmann::json parse(const CliResult& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").rc, 2);
  EXPECT_EQ(run("tree --bogus").rc, 2);
  EXPECT_EQ(run("type --p 4 --chi n=1").rc, 2);
  EXPECT_EQ(run("type --p 5 --chi gen=1").rc, 2);
  EXPECT_EQ(run("verify --suite nope").rc, 2);
  EXPECT_EQ(run("tree --p 3 --distance \"1,0;0,1\" \"1,0;0,0\"").rc, 2);
  EXPECT_EQ(run("k0 --p 2 --truncated 9").rc, 2);
}

TEST(Cli, TreeBallAndDistance) {
  CliResult dot = run("tree --p 2 --ball v0:1 --dot");
  ASSERT_EQ(dot.rc, 0);
  EXPECT_EQ(dot.out.rfind("graph", 0), 0u);
  size_t labels = 0;
  for (size_t pos = 0; (pos = dot.out.find("label=", pos)) != std::string::npos; ++pos) ++labels;
  EXPECT_EQ(labels, 4u);

  CliResult js = run("tree --p 3 --ball v0:2");
  ASSERT_EQ(js.rc, 0);
  auto j = parse(js);
  EXPECT_EQ(j["schema"], "bruhat/1");
  EXPECT_EQ(j["vertices"].size(), 1u + 4u + 12u);

  CliResult d = run("tree --p 3 --distance \"1,0;0,1\" \"9,0;0,1\"");
  ASSERT_EQ(d.rc, 0);
  EXPECT_EQ(std::stoi(d.out), 2);
}

TEST(Cli, TypeAndIntertwine) {
  CliResult t = run("type --p 5 --chi n=2,gen=1");
  ASSERT_EQ(t.rc, 0);
  EXPECT_NE(t.out.find("\"schema\": \"bruhat/1\""), std::string::npos);
  CliResult w = run("intertwine --p 5 --chi n=1,gen=2 --chi2 n=1,gen=2 --g \"0,1;-1,0\"");
  ASSERT_EQ(w.rc, 0);
  EXPECT_TRUE(parse(w)["intertwines"].get<bool>());
  CliResult v = run("intertwine --p 5 --chi n=1,gen=1 --chi2 n=1,gen=1 --g \"0,1;-1,0\"");
  ASSERT_EQ(v.rc, 0);
  EXPECT_FALSE(parse(v)["intertwines"].get<bool>());
}

TEST(Cli, MackeyCsv) {
  CliResult r = run("mackey --p 5 --chi n=1,gen=2 --target v0 --csv");
  ASSERT_EQ(r.rc, 0);
  EXPECT_EQ(r.out.rfind("edge,", 0), 0u);
}

TEST(Cli, K0Reports) {
  CliResult q = run("k0 --p 5 --chi n=1,gen=2");
  ASSERT_EQ(q.rc, 0);
  auto j = parse(q);
  EXPECT_EQ(j["coker"], "Z^3");
  EXPECT_TRUE(j["oracle_ok"].get<bool>());
  CliResult t = run("k0 --p 2 --truncated 1");
  ASSERT_EQ(t.rc, 0);
  EXPECT_EQ(parse(t)["coker"], "Z^4");
}

TEST(Cli, VerifyIsDeterministic) {
  CliResult a = run("verify --suite all --seed 7");
  CliResult b = run("verify --suite all --seed 7");
  ASSERT_EQ(a.rc, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = parse(a);
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["failed"], 0);
  EXPECT_GT(j["total"].get<int>(), 500);
}
