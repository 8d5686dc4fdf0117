// Copyright 2026 The Authors.
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


#include "incset/cli.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "incset/layout.h"
#include "incset/workload.h"

namespace incset {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("incset_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    ::unsetenv("ROUTER_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  int Run(std::vector<std::string> args) {
    args.insert(args.begin(), "incset");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return RunCli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, GenPlacementWritesALoadableFile) {
  ASSERT_EQ(Run({"gen-placement", "--items", "1000", "--machines", "50", "--replication", "3",
                 "--seed", "7", "--out", Path("p.txt")}),
            kExitOk);
  const DataLayout layout = LoadPlacement(Path("p.txt"));
  EXPECT_EQ(layout.universe_size(), 1000u);
  EXPECT_EQ(layout.machine_count(), 50u);
  EXPECT_EQ(layout, GeneratePlacement({.universe_size = 1000, .machine_count = 50,
                                       .replication = 3, .seed = 7}));
}

TEST_F(CliTest, BenchWritesOneRowPerStrategy) {
  ASSERT_EQ(Run({"gen-placement", "--items", "1000", "--seed", "2", "--out", Path("p.txt")}), 0);
  ASSERT_EQ(Run({"gen-queries", "--items", "1000", "--np", "0.99", "--count", "300", "--out",
                 Path("q.txt")}),
            0);
  ASSERT_EQ(Run({"bench", "--placement", Path("p.txt"), "--queries", Path("q.txt"),
                 "--strategies", "baseline,ngreedy,gcpa-bg", "--pretrain-frac", "0.4",
                 "--repetitions", "1", "--out", Path("bench.csv")}),
            kExitOk)
      << err_.str();
  std::istringstream in(Slurp(Path("bench.csv")));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "#schema bench v1");
  EXPECT_EQ(lines[2].substr(0, 9), "baseline,");
  EXPECT_EQ(lines[3].substr(0, 8), "ngreedy,");
  EXPECT_EQ(lines[4].substr(0, 8), "gcpa-bg,");
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(Run({}), kExitUsage);
  EXPECT_EQ(Run({"gen-placement", "--bogus", "--out", Path("x")}), kExitUsage);
  EXPECT_NE(err_.str().find("--bogus"), std::string::npos);
  EXPECT_EQ(Run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(Run({"bench", "--strategies", "nope", "--repetitions", "1"}), kExitUsage);
  EXPECT_EQ(Run({"gen-placement", "--replication", "99", "--out", Path("x")}), kExitUsage);
  EXPECT_EQ(Run({"bench", "--config", Path("missing.cfg")}), kExitUsage);
}

TEST_F(CliTest, RuntimeErrorsExitTwo) {
  EXPECT_EQ(Run({"cluster", "--queries", Path("missing.txt")}), kExitRuntime);
  std::ofstream(Path("bad.txt")) << "1 2\n3 x\n";
  EXPECT_EQ(Run({"cluster", "--queries", Path("bad.txt")}), kExitRuntime);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos);
}

TEST_F(CliTest, HelpListsEveryFlag) {
  EXPECT_EQ(Run({"bench", "--help"}), kExitOk);
  for (const char* flag : {"--placement", "--queries", "--pretrain-frac", "--strategies",
                           "--theta1", "--theta2", "--assign", "--reuse", "--repetitions",
                           "--seed", "--out", "--records-out", "--pairwise-out", "--mask-timing",
                           "--config"}) {
    EXPECT_NE(out_.str().find(flag), std::string::npos) << flag;
  }
  EXPECT_EQ(Run({"--help"}), kExitOk);
  for (const char* sub : {"gen-placement", "gen-queries", "cluster", "bench", "pairwise",
                          "analyze", "route"}) {
    EXPECT_NE(out_.str().find(sub), std::string::npos) << sub;
  }
}

TEST_F(CliTest, ConfigFileFillsUnsetFlagsOnly) {
  std::ofstream(Path("run.cfg")) << "# defaults\ncount = 40\nmin-len=3\nmax-len=4\nseed=11\n";
  ASSERT_EQ(Run({"gen-queries", "--items", "500", "--config", Path("run.cfg"), "--seed", "12",
                 "--out", Path("q.txt")}),
            0)
      << err_.str();
  const Workload w = LoadQueryLog(Path("q.txt"));
  ASSERT_EQ(w.queries.size(), 40u);
  for (const Query& q : w.queries) EXPECT_LE(q.items.size(), 4u);
  ASSERT_EQ(Run({"gen-queries", "--items", "500", "--count", "40", "--min-len", "3",
                 "--max-len", "4", "--seed", "12", "--out", Path("q2.txt")}),
            0);
  EXPECT_EQ(Slurp(Path("q.txt")), Slurp(Path("q2.txt")));

  std::ofstream(Path("broken.cfg")) << "no equals sign\n";
  EXPECT_EQ(Run({"gen-queries", "--config", Path("broken.cfg"), "--out", Path("z")}), kExitUsage);
}

TEST_F(CliTest, RouterSeedEnvironmentIsTheDefaultSeed) {
  ::setenv("ROUTER_SEED", "21", 1);
  ASSERT_EQ(Run({"gen-placement", "--items", "100", "--machines", "5", "--out", Path("a.txt")}), 0);
  ::unsetenv("ROUTER_SEED");
  ASSERT_EQ(Run({"gen-placement", "--items", "100", "--machines", "5", "--seed", "21", "--out",
                 Path("b.txt")}),
            0);
  EXPECT_EQ(Slurp(Path("a.txt")), Slurp(Path("b.txt")));
  ::setenv("ROUTER_SEED", "21", 1);
  ASSERT_EQ(Run({"gen-placement", "--items", "100", "--machines", "5", "--seed", "3", "--out",
                 Path("c.txt")}),
            0);
  ::unsetenv("ROUTER_SEED");
  EXPECT_NE(Slurp(Path("a.txt")), Slurp(Path("c.txt")));
}

TEST_F(CliTest, RouteSnapshotResumesTheStream) {
  ASSERT_EQ(Run({"gen-placement", "--items", "1000", "--out", Path("p.txt")}), 0);
  ASSERT_EQ(Run({"gen-queries", "--items", "1000", "--count", "200", "--out", Path("q.txt")}), 0);
  ASSERT_EQ(Run({"route", "--placement", Path("p.txt"), "--pretrain", Path("q.txt"), "--queries",
                 Path("q.txt"), "--out", Path("r1.csv"), "--snapshot-out", Path("s.json")}),
            0)
      << err_.str();
  ASSERT_EQ(Run({"route", "--placement", Path("p.txt"), "--snapshot-in", Path("s.json"),
                 "--queries", Path("q.txt"), "--out", Path("r2.csv")}),
            0)
      << err_.str();
  const std::string r2 = Slurp(Path("r2.csv"));
  EXPECT_EQ(r2.substr(0, r2.find('\n')), "#schema route v1");
  std::istringstream rows(r2);
  std::string row;
  std::getline(rows, row);
  std::getline(rows, row);
  int routed = 0;
  while (std::getline(rows, row)) {
    std::istringstream cells(row);
    std::string cell;
    for (int i = 0; i < 5; ++i) std::getline(cells, cell, ',');
    EXPECT_EQ(cell, "1") << row;
    ++routed;
  }
  EXPECT_EQ(routed, 200);
  EXPECT_EQ(Run({"route", "--placement", Path("p.txt"), "--snapshot-in", Path("s.json"),
                 "--pretrain", Path("q.txt"), "--queries", Path("q.txt")}),
            kExitUsage);
}

TEST_F(CliTest, AnalyzeSubcommandsEmitSchemas) {
  ASSERT_EQ(Run({"analyze", "landscape-single", "--steps", "10"}), 0);
  EXPECT_EQ(out_.str().substr(0, 26), "#schema landscape-single v");
  ASSERT_EQ(Run({"analyze", "landscape-multi", "--steps", "10", "--m", "4"}), 0);
  EXPECT_EQ(out_.str().substr(0, 25), "#schema landscape-multi v");
  ASSERT_EQ(Run({"analyze", "workload", "--items", "800", "--count", "100"}), 0);
  EXPECT_NE(out_.str().find("mean_pairwise_intersection,"), std::string::npos);
  ASSERT_EQ(Run({"gen-queries", "--items", "800", "--count", "100", "--out", Path("q.txt")}), 0);
  ASSERT_EQ(Run({"analyze", "quality", "--queries", Path("q.txt")}), 0);
  EXPECT_EQ(out_.str().substr(0, 19), "#schema quality v1\n");
  EXPECT_EQ(Run({"analyze"}), kExitUsage);
}

}  // namespace
}  // namespace incset
