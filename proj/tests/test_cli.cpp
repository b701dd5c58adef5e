// Copyright 2026 The zrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <json.hpp>
#include <zrace/cli.hpp>

#include "oracles.hpp"

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "zrace");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  zrace::RunConfig cfg;
  Outcome o;
  if (auto stop = zrace::parse_command_line(static_cast<int>(argv.size()), argv.data(), cfg, out, err))
    o.code = *stop;
  else
    o.code = zrace::run(cfg, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string small_zeros() { return oracle::data_path("zeros_300.txt"); }

std::string temp_file(const std::string& name) { return ::testing::TempDir() + name; }

}  // namespace

TEST(Cli, HelpExitsCleanly) {
  auto o = run_args({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("eta2"), std::string::npos);
}

TEST(Cli, MissingSubcommandIsConfigError) { EXPECT_EQ(run_args({}).code, zrace::kExitConfig); }

TEST(Cli, UnknownOptionIsConfigError) {
  EXPECT_EQ(run_args({"eta2", "--bogus", "1"}).code, zrace::kExitConfig);
}

TEST(Cli, BadNumberIsConfigError) {
  auto o = run_args({"eta1", "--zeros", small_zeros(), "--epsilon", "abc"});
  EXPECT_EQ(o.code, zrace::kExitConfig);
  EXPECT_NE(o.err.find("epsilon"), std::string::npos);
}

TEST(Cli, PreconditionViolationExitCode) {
  auto o = run_args({"eta2", "--zeros", small_zeros(), "--epsilon", "20"});
  EXPECT_EQ(o.code, zrace::kExitPrecondition);
}

TEST(Cli, NegativeEpsilonNamesTheConstraint) {
  auto o = run_args({"eta2", "--zeros", small_zeros(), "--epsilon", "-1"});
  EXPECT_EQ(o.code, zrace::kExitPrecondition);
  EXPECT_NE(o.err.find("0 < ε ≤ 13"), std::string::npos);
}

TEST(Cli, CatalogErrorExitCode) {
  auto o = run_args({"eta2", "--zeros", temp_file("does_not_exist.txt")});
  EXPECT_EQ(o.code, zrace::kExitCatalog);
}

TEST(Cli, Eta1JsonIsDeterministicAndSelfDescribing) {
  std::vector<std::string> args = {"eta1", "--zeros", small_zeros(), "--sigma", "0.5", "--height", "500",
                                   "--epsilon", "0.5", "--c", "20"};
  auto a = run_args(args);
  auto b = run_args(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["command"], "eta1");
  EXPECT_EQ(j["params"]["sigma"], 0.5);
  EXPECT_EQ(j["catalog"]["count"], 300);
  EXPECT_EQ(j["catalog"]["fingerprint"].get<std::string>().size(), 16u);
  EXPECT_TRUE(j["result"].contains("rigorous_halfwidth"));
  EXPECT_FALSE(j["params"].contains("threads"));
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  std::vector<std::string> args = {"sample", "--zeros", small_zeros(), "--kind", "v2", "--n", "20000",
                                   "--zeros-used", "50", "--seed", "9"};
  auto one = args;
  one.insert(one.end(), {"--threads", "1"});
  auto three = args;
  three.insert(three.end(), {"--threads", "3"});
  auto a = run_args(one);
  auto b = run_args(three);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ConfigFileIsOverriddenByFlags) {
  std::string cfg = temp_file("zrace_test.ini");
  {
    std::ofstream f(cfg);
    f << "# comment\nzeros = " << small_zeros() << "\n[eta1]\nsigma = 0.25\nepsilon = 0.5\nc = 20\nheight = 500\n"
      << "[eta2]\nsigma = 9\n";
  }
  auto a = run_args({"eta1", "--config", cfg});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(nlohmann::json::parse(a.out)["params"]["sigma"], 0.25);
  auto b = run_args({"eta1", "--config", cfg, "--sigma", "0.75"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(nlohmann::json::parse(b.out)["params"]["sigma"], 0.75);
}

TEST(Cli, MalformedConfigFileIsConfigError) {
  std::string cfg = temp_file("zrace_bad.ini");
  {
    std::ofstream f(cfg);
    f << "this line has no equals sign\n";
  }
  EXPECT_EQ(run_args({"eta1", "--config", cfg}).code, zrace::kExitConfig);
}

TEST(Cli, EnvironmentSuppliesZerosPath) {
  ::setenv("ZEROS_PATH", small_zeros().c_str(), 1);
  auto o = run_args({"eta1", "--sigma", "0", "--height", "100", "--c", "5"});
  ::unsetenv("ZEROS_PATH");
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(nlohmann::json::parse(o.out)["result"]["value"], 0.5);
}

TEST(Cli, FetchZerosWritesLoadableCache) {
  std::string cache = temp_file("zrace_cli_cache.bin");
  auto o = run_args({"fetch-zeros", "--zeros", small_zeros(), "--cache", cache});
  ASSERT_EQ(o.code, 0) << o.err;
  auto cat = zrace::load_zeros_file(cache);
  EXPECT_EQ(cat.fingerprint(), oracle::small_catalog().fingerprint());
  auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["catalog"]["fingerprint"], zrace::cli::hex64(cat.fingerprint()));
}

TEST(Cli, RaceWritesCsvAndSvg) {
  std::string csv = temp_file("zrace_race.csv");
  std::string svg = temp_file("zrace_race.svg");
  auto o = run_args({"race", "--f", "pi", "--g", "pi_r", "--xmin", "100", "--xmax", "1e6", "--points", "20",
                     "--prime-limit", "1000000", "--out", csv, "--plot", svg});
  ASSERT_EQ(o.code, 0) << o.err;
  std::ifstream in(csv);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "x,ef,eg");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 20);
  std::ifstream s(svg);
  std::string text((std::istreambuf_iterator<char>(s)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("</svg>"), std::string::npos);
}

TEST(Cli, RaceRejectsUnknownFunction) {
  EXPECT_EQ(run_args({"race", "--f", "zeta"}).code, zrace::kExitPrecondition);
}

TEST(Cli, ConstantsReportProvenance) {
  auto o = run_args({"constants", "--prime-limit", "1000000"});
  ASSERT_EQ(o.code, 0) << o.err;
  auto j = nlohmann::json::parse(o.out);
  EXPECT_NEAR(j["result"]["w"]["value"].get<double>(), 0.0461914, 5e-8);
  for (const char* k : {"w", "B1", "B2", "B4", "C0", "C1", "C2"})
    EXPECT_TRUE(j["result"][k].contains("provenance")) << k;
}

TEST(Cli, BinaryRunsEndToEnd) {
  std::string cmd = std::string(ZRACE_CLI_PATH) + " eta1 --zeros " + small_zeros() +
                    " --sigma 0 --height 100 --c 5 > " + temp_file("zrace_bin.json");
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}
