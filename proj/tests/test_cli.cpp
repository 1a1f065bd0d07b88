// Copyright 2026 The scenefp Authors
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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Runs the built command-line tool; paths come from the build system.

namespace fs = std::filesystem;

namespace
{
struct Run
{
  int code;
  std::string out;
};

Run run(const std::string & args)
{
  const fs::path log = fs::temp_directory_path() / "scenefp_cli_log.txt";
  const std::string cmd = std::string(SCENEFP_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("scenefp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out(const std::string & sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
  const std::string sample_ = SCENEFP_SAMPLE;
};
}  // namespace

TEST_F(Cli, EvaluateWritesReports)
{
  const auto r = run("evaluate -i " + sample_ + " --from 1 --to 2 -o " + out("a"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "a" / "effective_config.ini"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "scene_t1.500.json"));
  std::size_t json = 0;
  for (const auto & e : fs::directory_iterator(dir_ / "a")) {
    json += e.path().extension() == ".json";
  }
  EXPECT_EQ(json, 11u);
}

TEST_F(Cli, Deterministic)
{
  ASSERT_EQ(run("evaluate -i " + sample_ + " --formats json,csv,svg -o " + out("a")).code, 0);
  ASSERT_EQ(run("evaluate -i " + sample_ + " --formats json,csv,svg -o " + out("b")).code, 0);
  std::size_t files = 0;
  for (const auto & e : fs::directory_iterator(dir_ / "a")) {
    const auto other = dir_ / "b" / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path();
    ++files;
  }
  EXPECT_GT(files, 100u);
}

TEST_F(Cli, TimeOutOfRange)
{
  const auto r = run("evaluate -i " + sample_ + " --time 99 -o " + out("a"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("range error"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(dir_ / "a"));
}

TEST_F(Cli, Overlay)
{
  const auto r = run("fingerprint -i " + sample_ + " --overlay 1,2,3 -o " + out("a"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto svg = slurp(dir_ / "a" / "overlay.svg");
  std::size_t n = 0;
  for (auto p = svg.find("class=\"fingerprint\""); p != std::string::npos;
       p = svg.find("class=\"fingerprint\"", p + 1)) {
    ++n;
  }
  EXPECT_EQ(n, 3u);
  EXPECT_EQ(run("fingerprint -i " + sample_ + " --overlay 1,2,3,4 -o " + out("b")).code, 2);
}

TEST_F(Cli, EmptySelection)
{
  const auto r = run("evaluate -i " + sample_ + " --from 4.01 --to 4.05 -o " + out("a"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("warning"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "a"));
}

TEST_F(Cli, ConfigAndUsageErrors)
{
  fs::create_directories(dir_);
  std::ofstream(dir_ / "bad.ini") << "[pairwise]\nnope=1\n";
  EXPECT_EQ(run("evaluate -i " + sample_ + " -c " + out("bad.ini") + " -o " + out("a")).code, 2);
  EXPECT_EQ(run("evaluate -i " + sample_ + " --schema nope -o " + out("a")).code, 2);
  EXPECT_EQ(run("evaluate -o " + out("a")).code, 2);
  EXPECT_EQ(run("evaluate -i " + out("missing.csv") + " -o " + out("a")).code, 1);
}

TEST_F(Cli, MalformedInput)
{
  fs::create_directories(dir_);
  std::ofstream(dir_ / "bad.csv") << "track_id,frame_id,timestamp_ms,agent_type,x,y,vx,vy,psi_rad,length,width\n"
                                  << "1,1,0,car,0,0,1,0,0,4.5,1.8\n1,2,100,car,zero,0,1,0,0,4.5,1.8\n";
  const auto r = run("evaluate -i " + out("bad.csv") + " -o " + out("a"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("input error"), std::string::npos);
}

TEST_F(Cli, ReportPrintsConfusionTable)
{
  const auto r = run("report -i " + sample_ + " -o " + out("a"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("SP"), std::string::npos);
  EXPECT_NE(r.out.find("TQ-area"), std::string::npos);
  EXPECT_NE(r.out.find("critical"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "report.txt"));
}

TEST_F(Cli, ReportWithoutCriticalScenes)
{
  // Ground truth from a metric that is never small here: no critical scenes,
  // so sensitivity is undefined.
  const auto r = run("report -i " + sample_ + " --ground-truth TTC --threshold 0 -o " + out("a"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("n/a"), std::string::npos) << r.out;
}
