/* Copyright 2026 The SBAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Runs the sbam binary end to end.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sbam/image.h"
#include "sbam/tensor_io.h"
#include "temp_dir.h"

#ifndef SBAM_CLI_PATH
#error "SBAM_CLI_PATH must name the sbam executable"
#endif

namespace sbam {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char ch : s) q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return q + "'";
}

class CliTest : public ::testing::Test {
 protected:
  Outcome run(const std::vector<std::string>& args, const std::string& env = "") {
    std::string cmd = env.empty() ? "" : env + " ";
    cmd += quote(SBAM_CLI_PATH);
    for (const auto& a : args) cmd += " " + quote(a);
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    cmd += " >" + quote(out.string()) + " 2>" + quote(err.string());
    const int status = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.out = slurp(out);
    o.err = slurp(err);
    return o;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Rows of a CSV file without its header, split on commas.
  std::vector<std::vector<std::string>> csv(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<std::string> fields;
      std::stringstream ss(line);
      std::string f;
      while (std::getline(ss, f, ',')) fields.push_back(f);
      rows.push_back(fields);
    }
    return rows;
  }

  testing::TempDir dir_;
};

TEST_F(CliTest, HelpExitsCleanly) {
  const Outcome o = run({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("gen-synthetic"), std::string::npos);
  EXPECT_NE(run({}).code, 0);
  EXPECT_NE(run({"bogus"}).code, 0);
}

TEST_F(CliTest, FlatImageGivesZeroHeatmap) {
  write_pnm(path("flat.pgm"), Image(16, 16, 1, 0.4f));
  const Outcome o = run({"salience", "--images", path("flat.pgm"), "--out", path("sal")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(read_pnm(path("sal/flat_salience.pgm")), Image(16, 16, 1, 0.0f));
  const auto rows = csv("sal/salience.csv");
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_EQ(r[2], "0");
}

TEST_F(CliTest, HeatmapPeaksInsidePlantedObject) {
  ASSERT_EQ(run({"gen-synthetic", "--out", path("syn"), "--count", "3", "--seed", "2"}).code, 0);
  const Outcome o = run({"salience", "--images", path("syn"), "--out", path("sal")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::map<std::string, std::vector<int>> objects;
  for (const auto& r : csv("syn/objects.csv")) objects[r[0]].push_back(std::stoi(r[2]));
  const auto scores = csv("sal/salience.csv");
  ASSERT_EQ(scores.size(), 3u * 16u);
  const std::vector<std::string> names{"synth_0000.pgm", "synth_0001.pgm", "synth_0002.pgm"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::size_t best = 0;
    double top = -1.0;
    for (std::size_t l = 0; l < 16; ++l) {
      const double s = std::stod(scores[i * 16 + l][2]);
      if (s > top) top = s, best = l;
    }
    EXPECT_EQ(objects[names[i]][best], 1) << names[i];
  }
}

TEST_F(CliTest, UnreadableInputsNameThePath) {
  const Outcome missing = run({"salience", "--images", path("nope.pgm"), "--out", path("o")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("nope.pgm"), std::string::npos) << missing.err;

  std::ofstream(path("bad.pgm")) << "P9\n1 1\n255\n";
  const Outcome bad = run({"mask", "--images", path("bad.pgm"), "--out", path("o")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("bad.pgm"), std::string::npos) << bad.err;
  EXPECT_NE(bad.err.find("magic"), std::string::npos) << bad.err;

  write_pnm(path("odd.pgm"), Image(12, 8, 1));
  const Outcome odd = run({"salience", "--images", path("odd.pgm"), "--out", path("o")});
  EXPECT_EQ(odd.code, 1);
  EXPECT_NE(odd.err.find("odd.pgm"), std::string::npos) << odd.err;
}

TEST_F(CliTest, RandomMaskCountsInCsvAndOverlay) {
  write_pnm(path("gray.pgm"), Image(32, 32, 1, 0.8f));
  const Outcome o = run({"mask", "--images", path("gray.pgm"), "--strategy", "random",
                         "--ratio", "0.75", "--out", path("m")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::size_t masked = 0;
  for (const auto& r : csv("m/mask.csv")) masked += r[2] == "1";
  EXPECT_EQ(masked, 12u);
  const Image overlay = read_pnm(path("m/gray_mask.pgm"));
  std::size_t dark = 0;
  for (std::size_t py = 0; py < 4; ++py)
    for (std::size_t px = 0; px < 4; ++px) dark += overlay.at(px * 8, py * 8) < 0.5f;
  EXPECT_EQ(dark, 12u);
}

TEST_F(CliTest, AdaptiveRatioFollowsObjectSize) {
  ASSERT_EQ(run({"gen-synthetic", "--out", path("big"), "--count", "1", "--coverage", "0.5"}).code, 0);
  ASSERT_EQ(run({"gen-synthetic", "--out", path("small"), "--count", "1", "--coverage", "0.125"}).code, 0);
  fs::copy_file(path("big/synth_0000.pgm"), path("big.pgm"));
  fs::copy_file(path("small/synth_0000.pgm"), path("small.pgm"));
  const Outcome o = run({"mask", "--images", path("big.pgm") + "," + path("small.pgm"),
                         "--strategy", "sbam-amr", "--out", path("m")});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = csv("m/mask.csv");
  ASSERT_EQ(rows.size(), 32u);
  const double big = std::stod(rows.front()[4]);
  const double small = std::stod(rows.back()[4]);
  EXPECT_GT(big, small);
  for (double r : {big, small}) {
    EXPECT_GE(r, 0.75 - 0.15 - 1e-12);
    EXPECT_LE(r, 0.75 + 0.15 + 1e-12);
  }
}

TEST_F(CliTest, AdaptiveRangeOutsideUnitIntervalIsConfigError) {
  write_pnm(path("gray.pgm"), Image(16, 16, 1, 0.5f));
  const Outcome o = run({"mask", "--images", path("gray.pgm"), "--strategy", "sbam-amr",
                         "--ratio", "0.8", "--delta-r", "0.3", "--out", path("m")});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("delta-r"), std::string::npos) << o.err;
}

TEST_F(CliTest, SweepIsDeterministic) {
  const std::vector<std::string> args{"sweep", "--strategies", "random,sbam",
                                      "--ratios", "0.3,0.5,0.75,0.9", "--seed", "7",
                                      "--epochs", "10", "--count", "16", "--holdout", "4"};
  auto first = args, second = args;
  first.insert(first.end(), {"--out", path("a/sweep.csv")});
  second.insert(second.end(), {"--out", path("b/sweep.csv")});
  ASSERT_EQ(run(first, "SBAM_THREADS=1").code, 0);
  ASSERT_EQ(run(second, "SBAM_THREADS=3").code, 0);
  const std::string text = slurp(path("a/sweep.csv"));
  EXPECT_EQ(text, slurp(path("b/sweep.csv")));
  EXPECT_EQ(text.rfind("# performance=neg_holdout_loss\nmodel,ratio,performance,pimr,global_pimr\n", 0), 0u);
  // csv() skips only the comment line, so the column header is one row.
  EXPECT_EQ(csv("a/sweep.csv").size(), 1u + 8u);
}

TEST_F(CliTest, SweepNeedsTwoRatios) {
  const Outcome o = run({"sweep", "--ratios", "0.5", "--out", path("s.csv")});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("--ratios"), std::string::npos) << o.err;
  EXPECT_FALSE(fs::exists(path("s.csv")));
}

TEST_F(CliTest, SalienceOnlyAndSbamCurvesDiffer) {
  for (const std::string s : {"salience-only", "sbam"}) {
    const Outcome o = run({"train", "--strategy", s, "--epochs", "10", "--count", "16",
                           "--out", path(s)});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(csv(s + "/loss.csv").size(), 10u);
  }
  EXPECT_NE(slurp(path("salience-only/loss.csv")), slurp(path("sbam/loss.csv")));
  const TinyMaeParams p = load_params(path("sbam/params.sbtn"));
  EXPECT_EQ(p.input_dims(), 64u);
  EXPECT_EQ(p.hidden_dims(), 16u);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  std::ofstream(path("run.cfg")) << "# training run\nstrategy = random\nratio=0.5\nepochs=3\ncount=4\n";
  const Outcome o = run({"train", "--config", path("run.cfg"), "--ratio", "0.6",
                         "--out", path("t")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.err.find("[config] strategy=random"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("[config] ratio=0.6"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("[config] epochs=3"), std::string::npos) << o.err;
  EXPECT_EQ(csv("t/loss.csv").size(), 3u);
}

TEST_F(CliTest, ConfigFileErrorsNameKeyAndFile) {
  std::ofstream(path("bad.cfg")) << "ratios=0.3\n";
  const Outcome unknown = run({"train", "--config", path("bad.cfg"), "--out", path("t")});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("'ratios'"), std::string::npos) << unknown.err;
  EXPECT_NE(unknown.err.find("bad.cfg"), std::string::npos) << unknown.err;

  std::ofstream(path("nan.cfg")) << "epochs=many\n";
  const Outcome value = run({"train", "--config", path("nan.cfg"), "--out", path("t")});
  EXPECT_EQ(value.code, 2);
  EXPECT_NE(value.err.find("epochs"), std::string::npos) << value.err;

  const Outcome missing = run({"train", "--config", path("none.cfg"), "--out", path("t")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("none.cfg"), std::string::npos) << missing.err;
}

TEST_F(CliTest, UsageErrorsNameTheFlag) {
  const Outcome no_out = run({"train", "--epochs", "1"});
  EXPECT_EQ(no_out.code, 2);
  EXPECT_NE(no_out.err.find("--out"), std::string::npos) << no_out.err;

  const Outcome strategy = run({"train", "--strategy", "magic", "--out", path("t")});
  EXPECT_EQ(strategy.code, 2);
  EXPECT_NE(strategy.err.find("magic"), std::string::npos) << strategy.err;

  const Outcome threads = run({"sweep", "--epochs", "1", "--out", path("s.csv")},
                              "SBAM_THREADS=lots");
  EXPECT_EQ(threads.code, 2);
  EXPECT_NE(threads.err.find("SBAM_THREADS"), std::string::npos) << threads.err;
}

}  // namespace
}  // namespace sbam
