#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

using nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(const std::string& args) {
  const std::string err_path = ::testing::TempDir() + "kweights_stderr.txt";
  const std::string cmd = std::string(KWEIGHTS_PATH) + " " + args + " 2>" + err_path;
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) { return std::string(KW_FIXTURE_DIR) + "/" + name; }

void expect_input_error(const std::string& args, const std::string& needle) {
  const CliRun r = run(args);
  EXPECT_EQ(r.code, 2) << args << "\n" << r.out << r.err;
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  EXPECT_NE(r.err.find(needle), std::string::npos) << r.err;
}

}  // namespace

TEST(CliWeight, Examples) {
  CliRun r = run("weight --family gamma --n 5");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("= 1/2688 ~"), std::string::npos) << r.out;

  r = run("weight --family lambda --n 0 --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["value"], "1");

  r = run("weight --family upsilon --n 7 --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["value"], "0");
  EXPECT_EQ(json::parse(run("weight --family gamma --n 1 --format json").out)["decimal"], "0.0416666666667");
}

TEST(CliTable, GoldenFiles) {
  for (const char* family : {"gamma", "upsilon"}) {
    const CliRun r = run(std::string("table --family ") + family + " --max-n 9");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(std::string(KW_GOLDEN_DIR) + "/table_" + family + "_9.txt")) << family;
  }
  const CliRun r = run("table --family lambda --max-n 4 --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["values"], json({"1", "1/2", "1/4", "1/8", "1/16"}));
}

TEST(CliTable, GoldenTranscribesTables) {
  EXPECT_EQ(slurp(std::string(KW_GOLDEN_DIR) + "/table_gamma_9.txt"),
            "n\tw_gamma(n)\n0\t0\n1\t1/24\n2\t0\n3\t1/320\n4\t0\n5\t1/2688\n6\t0\n7\t1/18432\n8\t0\n9\t1/112640\n");
  EXPECT_EQ(slurp(std::string(KW_GOLDEN_DIR) + "/table_upsilon_9.txt"),
            "n\tw_upsilon(n)\n0\t1\n1\t0\n2\t1/12\n3\t0\n4\t1/80\n5\t0\n6\t1/448\n7\t0\n8\t1/2304\n9\t0\n");
}

TEST(CliMc, Examples) {
  CliRun r = run("mc --family gamma --n 1 --mode reduced --samples 1000000 --seed 42 --chunks 8 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_LE(std::abs(j["z"].get<double>()), 4.0);
  EXPECT_EQ(j["exact"], "1/24");
  for (const char* key : {"estimate", "std_error", "exact", "z"}) EXPECT_TRUE(j.contains(key)) << key;

  r = run("mc --family lambda --n 1 --samples 100000 --seed 7 --chunks 4 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  j = json::parse(r.out);
  EXPECT_EQ(j["exact"], "1/2");
  EXPECT_LE(std::abs(j["z"].get<double>()), 5.0);

  r = run("mc --family upsilon --n 0 --samples 10000 --seed 1 --chunks 1 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["exact"], "1");
}

TEST(CliMc, DeterministicAcrossRunsAndThreads) {
  const std::string args = "mc --family gamma --n 1 --samples 200000 --seed 9 --chunks 6 --format json";
  const CliRun a = run(args + " --threads 1");
  const CliRun b = run(args + " --threads 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, run(args + " --threads 1").out);
}

TEST(CliMc, UnsupportedInputs) {
  expect_input_error("mc --family upsilon --n 1 --mode reduced --samples 100 --seed 1 --chunks 1", "reduced");
  expect_input_error("mc --family gamma --n 9 --samples 100 --seed 1 --chunks 1", "n <= 3");
  expect_input_error("mc --family gamma --n 1 --samples 100 --chunks 1", "seed");
  expect_input_error("mc --family gamma --n 1 --samples 100 --seed 1", "chunks");
  expect_input_error("mc --family delta --n 1 --samples 100 --seed 1 --chunks 1", "delta");
}

TEST(CliQuad, Examples) {
  CliRun r = run("quad --family upsilon --n 2 --points 256 --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_LE(json::parse(r.out)["abs_error"].get<double>(), 1e-10);
  r = run("quad --n 0 --points 8 --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 1.0, 1e-14);
  r = run("quad --n 6 --points 512 --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_LE(json::parse(r.out)["abs_error"].get<double>(), 1e-9);
  expect_input_error("quad --n 2 --points 1", "points");
  expect_input_error("quad --family gamma --n 2 --points 10", "upsilon");
}

TEST(CliSeries, StarFixture) {
  const CliRun r = run("series star --jets " + fixture("affine_2d.json") + " --sigma y1 --tau y2");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "y1*y2 + (1/4)ℏ\n");
}

TEST(CliSeries, FlatnessAllZero) {
  for (const char* name : {"affine_2d.json", "quadratic.json"}) {
    const CliRun r = run("series flatness --jets " + fixture(name) + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["flat"].get<bool>());
    for (const auto& c : j["components"]) EXPECT_EQ(c["text"], "0");
  }
}

TEST(CliSeries, CotangentSingleTermWithPrefactor) {
  const CliRun r = run("series cotangent --jets " + fixture("cotangent.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("F_12 = (1/48)ℏ*(", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("vanishes beyond hbar^2: yes"), std::string::npos);
  const json j = json::parse(run("series cotangent --jets " + fixture("cotangent.json") + " --format json").out);
  ASSERT_EQ(j["components"].size(), 1u);
  EXPECT_EQ(j["components"][0]["prefactor"], "1/48");
  EXPECT_NE(j["components"][0]["contraction"], "0");
}

TEST(CliSeries, OtherOperatorsRun) {
  const std::string q = fixture("quadratic.json");
  for (const char* args :
       {"connection --sigma y1", "curvature", "bullet --f x1 --g x2", "residual", "residual --gamma 'y1;y2'"}) {
    const CliRun r = run(std::string("series ") + args + " --jets " + q + " --order 3");
    EXPECT_EQ(r.code, 0) << args << "\n" << r.err;
    EXPECT_FALSE(r.out.empty());
  }
}

TEST(CliSeries, JsonStableAcrossRuns) {
  const std::string q = fixture("quadratic.json");
  for (const char* args : {"star --sigma 'y1^2' --tau 'y2 + dx1*y1'", "connection --sigma y1y2", "curvature",
                                  "bullet --f 'x1^2' --g x2"}) {
    const std::string cmd = std::string("series ") + args + " --jets " + q + " --format json";
    const CliRun a = run(cmd);
    ASSERT_EQ(a.code, 0) << args << "\n" << a.err;
    EXPECT_EQ(a.out, run(cmd).out) << args;
    EXPECT_TRUE(json::accept(a.out));
  }
}

TEST(CliSeries, InputErrors) {
  expect_input_error("series star --jets " + fixture("bad_linear.json") + " --sigma y1 --tau y2", "fiber-linear");
  expect_input_error("series star --jets /nonexistent.json --sigma y1 --tau y2", "nonexistent");
  expect_input_error("series star --jets " + fixture("affine_2d.json") + " --sigma 0.5 --tau y2", "floating");
  expect_input_error("series star --jets " + fixture("affine_2d.json") + " --sigma y1", "--tau");
  expect_input_error("series cotangent --jets " + fixture("affine_2d.json"), "split");
  expect_input_error("series curvature --jets " + fixture("affine_2d.json") + " --order 99", "order");
}

TEST(CliErrors, MalformedArguments) {
  expect_input_error("weight --family gamma", "--n");
  expect_input_error("weight --family omega --n 1", "omega");
  expect_input_error("weight --family gamma --n -1", "--n");
  expect_input_error("table --family gamma --max-n 9 --format xml", "format");
  expect_input_error("frobnicate", "frobnicate");
}
