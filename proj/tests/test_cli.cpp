// Copyright 2026 The mbtlite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "mbt/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mbt/model.hpp"
#include "test_util.hpp"

namespace mbt {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

fs::path write_suite(const fs::path& dir, const Suite& s) {
  fs::path p = dir / "suite.in.json";
  spill(p, serialize_suite(s));
  return p;
}

RunOptions demo_options(const fs::path& out_dir) {
  RunOptions o;
  o.suite_path = MBT_DATA_DIR "/demo_suite.json";
  o.sut_path = MBT_DATA_DIR "/demo_sut.json";
  o.seed = 4;
  o.out_dir = out_dir;
  return o;
}

TEST(CliValidateTest, ExitCodes) {
  fs::path dir = testing::fresh_temp_dir("validate");
  std::ostringstream err;
  EXPECT_EQ(cmd_validate(MBT_DATA_DIR "/demo_suite.json", err), kExitPass);
  EXPECT_EQ(err.str(), "");

  std::string doc = slurp(MBT_DATA_DIR "/demo_suite.json");
  std::string dangling = doc;
  auto pos = dangling.find("\"target\": \"dashboard\"");
  ASSERT_NE(pos, std::string::npos);
  dangling.replace(pos, 21, "\"target\": \"nowhere\"");
  spill(dir / "bad.json", dangling);
  err.str("");
  EXPECT_EQ(cmd_validate(dir / "bad.json", err), kExitError);
  EXPECT_NE(err.str().find("dangling edge endpoint"), std::string::npos) << err.str();

  spill(dir / "dead.json", serialize_suite(testing::graph_suite(2, {{0, 1}})));
  err.str("");
  EXPECT_EQ(cmd_validate(dir / "dead.json", err), kExitPass);
  EXPECT_NE(err.str().find("warning [dead-end-vertex] m/v1"), std::string::npos) << err.str();

  err.str("");
  EXPECT_EQ(cmd_validate(dir / "missing.json", err), kExitError);
  fs::remove_all(dir);
}

TEST(CliGenerateTest, LineModel) {
  fs::path dir = testing::fresh_temp_dir("generate");
  fs::path suite = write_suite(dir, testing::graph_suite(3, {{0, 1}, {1, 2}}));
  std::ostringstream out, err;
  EXPECT_EQ(cmd_generate(suite, "quickrandom", "edge_coverage(100)", 1, out, err), kExitPass);
  EXPECT_EQ(out.str(),
            "vertex n_0 (m/v0)\n"
            "edge e_0 (m/e0)\n"
            "vertex n_1 (m/v1)\n"
            "edge e_1 (m/e1)\n"
            "vertex n_2 (m/v2)\n");
  out.str("");
  EXPECT_EQ(cmd_generate(suite, "random", "length(0)", 1, out, err), kExitPass);
  EXPECT_EQ(out.str(), "vertex n_0 (m/v0)\n");
  out.str("");
  EXPECT_EQ(cmd_generate(suite, "sideways", "length(0)", 1, out, err), kExitError);
  EXPECT_EQ(cmd_generate(suite, "random", "length(", 1, out, err), kExitError);
  EXPECT_EQ(cmd_generate(suite, "random", "never", 1, out, err), kExitError) << "dead end";
  fs::remove_all(dir);
}

TEST(CliGenerateTest, SeedDeterminism) {
  std::ostringstream a, b, err;
  const char* path = MBT_DATA_DIR "/demo_suite.json";
  ASSERT_EQ(cmd_generate(path, "random", "length(30)", 17, a, err), kExitPass);
  ASSERT_EQ(cmd_generate(path, "random", "length(30)", 17, b, err), kExitPass);
  EXPECT_EQ(a.str(), b.str());
}

TEST(CliRunTest, DemoPasses) {
  fs::path dir = testing::fresh_temp_dir("run");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(demo_options(dir), out, err), kExitPass) << err.str();
  EXPECT_NE(out.str().find("4/4 = 100.00%"), std::string::npos) << out.str();
  for (const char* f : {kRunLogFile, kSeriesFile, kSummaryFile, kSuiteCopyFile}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(out.str().rfind(slurp(dir / kSummaryFile), 0), 0u);

  std::ostringstream rep, rep_err;
  EXPECT_EQ(cmd_report(dir, rep, rep_err), kExitPass) << rep_err.str();
  EXPECT_EQ(rep.str(), slurp(dir / kSummaryFile));
  fs::remove_all(dir);
}

TEST(CliRunTest, FaultIsReported) {
  fs::path dir = testing::fresh_temp_dir("fault");
  RunOptions o = demo_options(dir);
  o.sut_path = MBT_DATA_DIR "/demo_sut_fault.json";
  o.on_failure = "continue";
  o.generator = "quickrandom";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(o, out, err), kExitFailures);
  EXPECT_NE(err.str().find("[F-LOGIN-REDIRECT]"), std::string::npos) << err.str();
  EXPECT_NE(slurp(dir / kRunLogFile).find("fail:F-LOGIN-REDIRECT"), std::string::npos);
  std::ostringstream rep, rep_err;
  EXPECT_EQ(cmd_report(dir, rep, rep_err), kExitPass) << rep_err.str();
  fs::remove_all(dir);
}

TEST(CliRunTest, BadInputs) {
  fs::path dir = testing::fresh_temp_dir("badrun");
  std::ostringstream out, err;
  RunOptions o = demo_options(dir);
  o.sut_path = dir / "absent.json";
  EXPECT_EQ(cmd_run(o, out, err), kExitError);
  o = demo_options(dir);
  o.on_failure = "shrug";
  EXPECT_EQ(cmd_run(o, out, err), kExitError);
  o = demo_options(dir);
  o.interval_s = 0;
  EXPECT_EQ(cmd_run(o, out, err), kExitError);
  o = demo_options(dir);
  o.generator = "astar:login/nowhere";
  EXPECT_EQ(cmd_run(o, out, err), kExitError);
  fs::remove_all(dir);
}

TEST(CliReportTest, DetectsTampering) {
  fs::path dir = testing::fresh_temp_dir("report");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(demo_options(dir), out, err), kExitPass);
  const std::string csv = slurp(dir / kRunLogFile);
  const std::string summary = slurp(dir / kSummaryFile);

  spill(dir / kRunLogFile, csv.substr(0, csv.size() - 3));
  err.str("");
  EXPECT_EQ(cmd_report(dir, out, err), kExitError);
  EXPECT_FALSE(err.str().empty());

  spill(dir / kRunLogFile, csv);
  std::string edited = summary;
  auto pos = edited.find("100.00%");
  ASSERT_NE(pos, std::string::npos);
  edited.replace(pos, 7, "99.00%");
  spill(dir / kSummaryFile, edited);
  err.str("");
  EXPECT_EQ(cmd_report(dir, out, err), kExitError);
  EXPECT_NE(err.str().find("internal consistency"), std::string::npos);

  spill(dir / kSummaryFile, summary);
  EXPECT_EQ(cmd_report(dir, out, err), kExitPass);
  EXPECT_EQ(cmd_report(dir / "nothing-here", out, err), kExitError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace mbt
