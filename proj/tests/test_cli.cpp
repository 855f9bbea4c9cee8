#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "support.hpp"

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  std::string cmd = std::string(PLFC_CLI) + " " + args + " 2>&1";
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string fx(const char* name) { return plfc::testing::fixture_path(name); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "plfc_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Cli, CheckExitCodes) {
  Outcome ok = run("check " + fx("merging.plfc"));
  EXPECT_EQ(ok.status, 0) << ok.out;
  EXPECT_NE(ok.out.find("result: proved, beta = 1"), std::string::npos) << ok.out;
  Outcome off = run("check " + fx("merging.plfc") + " --disable-merging");
  EXPECT_EQ(off.status, 1) << off.out;
  EXPECT_NE(off.out.find("best (bot, 0)"), std::string::npos) << off.out;
  Outcome temp = run("check " + fx("temperature.plfc") + " --quiet");
  EXPECT_EQ(temp.status, 0);
  EXPECT_EQ(temp.out, "proved, beta = 4/5\n");
  EXPECT_EQ(run("check " + fx("temperature.plfc") + " --alpha 5/6 --quiet").status, 1);
  EXPECT_EQ(run("check /nonexistent/kb.plfc").status, 2);
  EXPECT_EQ(run("check " + fx("temperature.plfc") + " --alpha 0").status, 2);
  EXPECT_EQ(run("check " + fx("temperature.plfc") + " --alpha 3/2").status, 2);
  EXPECT_EQ(run("bogus").status, 2);
}

TEST(Cli, QueryOverride) {
  Outcome r = run("check " + fx("prices.plfc") + " --query '(price(prod1, about_35), 1/2)' --quiet");
  EXPECT_EQ(r.status, 0) << r.out;
  Outcome bad = run("check " + fx("prices.plfc") + " --query '(price(prod1, x), 1/2)'");
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.out.find("unsupported query form"), std::string::npos) << bad.out;
  Outcome none = run("check " + fx("prices.plfc"));
  EXPECT_EQ(none.status, 2);
}

TEST(Cli, ParseErrorsCarryPositions) {
  auto path = scratch("broken.plfc");
  std::ofstream(path) << "sort s = {a}\npred p(s)\n(w(a), 1)\n";
  Outcome r = run("check " + path.string() + " --query '(p(a), 1)'");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find(path.string() + ":3:"), std::string::npos) << r.out;
  Outcome j = run("fmt " + path.string() + " --diagnostics-json");
  EXPECT_EQ(j.status, 2);
  auto diag = nlohmann::json::parse(j.out);
  EXPECT_EQ(diag["line"], 3);
  EXPECT_EQ(diag["severity"], "error");
}

TEST(Cli, Oracle) {
  Outcome at = run("oracle " + fx("temperature.plfc"));
  EXPECT_EQ(at.status, 0) << at.out;
  auto j = nlohmann::json::parse(at.out);
  EXPECT_EQ(j["verdict"], "entailed");
  EXPECT_EQ(j["degree"], "4/5");
  EXPECT_EQ(run("oracle " + fx("temperature.plfc") + " --alpha 1/2").status, 0);
  EXPECT_EQ(run("oracle " + fx("temperature.plfc") + " --alpha 5/6").status, 1);
  Outcome goedel = run("oracle " + fx("temperature.plfc") + " --reciprocal-goedel");
  EXPECT_EQ(goedel.status, 1);
  EXPECT_EQ(nlohmann::json::parse(goedel.out)["degree"], "0");
  EXPECT_EQ(run("oracle " + fx("temperature.plfc") + " --limit 16").status, 2);

  auto empty = scratch("empty.plfc");
  std::ofstream(empty) << "sort s = {a, b}\npred p(s)\nquery (p(a), 1/2)\n";
  Outcome e = run("oracle " + empty.string());
  EXPECT_EQ(e.status, 1) << e.out;
  EXPECT_EQ(run("check " + empty.string()).status, 1);
}

TEST(Cli, FmtIsIdempotent) {
  for (const char* name : {"merging.plfc", "temperature.plfc", "prices.plfc"}) {
    Outcome once = run("fmt " + fx(name));
    ASSERT_EQ(once.status, 0) << once.out;
    auto path = scratch(std::string("fmt_") + name);
    std::ofstream(path) << once.out;
    Outcome twice = run("fmt " + path.string());
    EXPECT_EQ(twice.out, once.out) << name;
  }
  EXPECT_NE(run("fmt " + fx("temperature.plfc")).out.find("4/9"), std::string::npos);
}

TEST(Cli, TraceRoundTrip) {
  auto path = scratch("merging.jsonl");
  Outcome w = run("check " + fx("merging.plfc") + " --trace jsonl --trace-out " + path.string());
  ASSERT_EQ(w.status, 0) << w.out;
  Outcome r = run("trace " + path.string());
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("verified: yes"), std::string::npos) << r.out;

  std::string text = plfc::testing::read_text(path.string());
  auto pos = text.find("max(A(y), B(y))");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 15, "max(A(y), C(y))");
  auto bad = scratch("tampered.jsonl");
  std::ofstream(bad) << text;
  Outcome t = run("trace " + bad.string());
  EXPECT_EQ(t.status, 1) << t.out;
  EXPECT_NE(t.out.find("verified: no"), std::string::npos);
}

TEST(Cli, BudgetsFromEnvironment) {
  Outcome r = run("check " + fx("temperature.plfc") + " --quiet --max-steps 1");
  EXPECT_EQ(r.status, 0) << r.out;
  std::string cmd = "env PLFC_MAX_STEPS=1 " + std::string(PLFC_CLI) + " check " + fx("merging.plfc") +
                    " --disable-merging --quiet";
  FILE* p = popen(cmd.c_str(), "r");
  char buf[256] = {};
  std::size_t n = fread(buf, 1, sizeof buf - 1, p);
  pclose(p);
  EXPECT_NE(std::string(buf, n).find("budget exhausted"), std::string::npos) << std::string(buf, n);
}

}  // namespace
