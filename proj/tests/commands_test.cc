// Copyright 2026 The Streamflow Authors.
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

#include "commands.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "config.h"
#include "fixtures.h"
#include "streamflow/errors.h"
#include "streamflow/format.h"
#include "streamflow/report.h"

namespace streamflow::cli {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig Small(const fs::path& root) {
  RunConfig c = ParseRunConfig(R"(
[run]
seed = 5
[generator]
periods = 3
initial_nodes = 6
growth_per_period = 1
steps_per_period = 300
random_drift_fraction = 0.2
random_drift_magnitude = 30
[qnet]
hidden = 8
[trainer]
batch_size = 32
epochs = 1
eval_stride = 8
)");
  c.data_dir = root / "data";
  c.out_dir = root / "data";
  return c;
}

class CommandsTest : public ::testing::Test {
 protected:
  CommandsTest() : dir_("cmd"), config_(Small(dir_.path())) {
    CmdGenerate(config_, log_);
    config_.out_dir = dir_.path() / "out";
  }

  testing::TempDir dir_;
  RunConfig config_;
  std::ostringstream log_;
};

TEST_F(CommandsTest, GenerateWritesReloadablePeriods) {
  EXPECT_EQ(DiscoverPeriods(config_.data_dir), (std::vector<int>{2011, 2012, 2013}));
  const PeriodDataset p = LoadPeriodDirectory(config_.data_dir, 2012);
  EXPECT_EQ(p.series.size(), 7u);
  EXPECT_TRUE(fs::exists(config_.data_dir / "drift.json"));
  const RunConfig echo = LoadRunConfig(config_.data_dir / "config.ini");
  EXPECT_EQ(echo.generator.steps_per_period, 300u);

  RunConfig again = config_;
  again.out_dir = dir_.path() / "again";
  CmdGenerate(again, log_);
  for (const auto& entry : fs::recursive_directory_iterator(config_.data_dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "config.ini") continue;
    const fs::path twin = again.out_dir / fs::relative(entry.path(), config_.data_dir);
    EXPECT_EQ(Slurp(entry.path()), Slurp(twin)) << entry.path();
  }
}

TEST_F(CommandsTest, TrainWritesReportsAndCheckpoints) {
  const auto reports = CmdTrain(config_, false, log_);
  ASSERT_EQ(reports.size(), 3u);
  for (int p : {2011, 2012, 2013}) {
    EXPECT_TRUE(fs::exists(ReportPath(config_.out_dir, p)));
    EXPECT_TRUE(fs::exists(TimingsPath(config_.out_dir, p)));
    EXPECT_TRUE(fs::exists(CheckpointPath(config_.out_dir, p)));
  }
  for (const PeriodReport& r : reports) {
    for (const SplitReport* s : {&r.validation, &r.test}) {
      for (const HorizonReport& h : s->horizons) {
        EXPECT_TRUE(std::isfinite(h.all.mae));
        EXPECT_GE(h.all.mae, 0.0);
        EXPECT_GE(h.all.rmse, h.all.mae);
      }
    }
  }
  const RunConfig echo = LoadRunConfig(config_.out_dir / "config.ini");
  EXPECT_EQ(FormatRunConfig(echo), FormatRunConfig(config_));
}

TEST_F(CommandsTest, TrainIsDeterministicAndResumable) {
  CmdTrain(config_, false, log_);
  RunConfig other = config_;
  other.out_dir = dir_.path() / "out2";
  CmdTrain(other, false, log_);
  RunConfig resumed = config_;
  resumed.out_dir = dir_.path() / "out3";
  fs::create_directories(resumed.out_dir);
  fs::copy_file(CheckpointPath(config_.out_dir, 2011), CheckpointPath(resumed.out_dir, 2011));
  const auto tail = CmdTrain(resumed, true, log_);
  ASSERT_EQ(tail.size(), 2u);
  EXPECT_EQ(tail.front().period, 2012);
  for (int p : {2011, 2012, 2013}) {
    const std::string a = Slurp(ReportPath(config_.out_dir, p));
    EXPECT_EQ(a, Slurp(ReportPath(other.out_dir, p))) << p;
    EXPECT_EQ(Slurp(CheckpointPath(config_.out_dir, p)), Slurp(CheckpointPath(other.out_dir, p)));
    if (p > 2011) EXPECT_EQ(a, Slurp(ReportPath(resumed.out_dir, p))) << p;
  }
  EXPECT_TRUE(CmdTrain(config_, true, log_).empty());
}

TEST_F(CommandsTest, RetrainResumeMatchesUninterruptedRun) {
  config_.agent.trainer.regime = Regime::kRetrain;
  CmdTrain(config_, false, log_);
  RunConfig resumed = config_;
  resumed.out_dir = dir_.path() / "resumed";
  fs::create_directories(resumed.out_dir);
  for (int p : {2011, 2012}) {
    fs::copy_file(CheckpointPath(config_.out_dir, p), CheckpointPath(resumed.out_dir, p));
  }
  CmdTrain(resumed, true, log_);
  EXPECT_EQ(Slurp(ReportPath(config_.out_dir, 2013)), Slurp(ReportPath(resumed.out_dir, 2013)));
}

TEST_F(CommandsTest, CorruptCheckpointIsDataError) {
  fs::create_directories(config_.out_dir);
  std::ofstream(CheckpointPath(config_.out_dir, 2011)) << "garbage";
  EXPECT_THROW(CmdTrain(config_, true, log_), DataError);
}

TEST_F(CommandsTest, MissingPeriodIsDataError) {
  fs::remove_all(PeriodDirectory(config_.data_dir, 2012));
  EXPECT_THROW(CmdTrain(config_, false, log_), DataError);
  config_.data_dir = dir_.path() / "nowhere";
  EXPECT_THROW(CmdTrain(config_, false, log_), DataError);
}

TEST_F(CommandsTest, ExportMatchesReportsAndIsIdempotent) {
  CmdTrain(config_, false, log_);
  const fs::path figures = dir_.path() / "figures";
  CmdExportFigures(config_.out_dir, figures, log_);
  const std::string metrics = Slurp(figures / "metrics.csv");
  const std::string timing = Slurp(figures / "timing.csv");

  std::map<int, PeriodReport> reports;
  for (int p : {2011, 2012, 2013}) reports[p] = PeriodReportFromJson(Slurp(ReportPath(config_.out_dir, p)));
  std::istringstream lines(metrics);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "period,horizon,metric,value");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    const auto f = SplitCsvLine(line);
    ASSERT_EQ(f.size(), 4u);
    const MetricSet& m = reports.at(static_cast<int>(*ParseInt(f[0])))
                             .test.At(static_cast<int>(*ParseInt(f[1])))
                             .all;
    const std::map<std::string, double> source{
        {"mae", m.mae}, {"rmse", m.rmse}, {"mape", m.mape}, {"class_accuracy", m.class_accuracy}};
    EXPECT_EQ(*ParseDouble(f[3]), source.at(std::string(f[2]))) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 24u);
  EXPECT_EQ(std::count(timing.begin(), timing.end(), '\n'), 4);

  CmdExportFigures(config_.out_dir, figures, log_);
  EXPECT_EQ(Slurp(figures / "metrics.csv"), metrics);
  EXPECT_EQ(Slurp(figures / "timing.csv"), timing);
  CmdExportFigures(config_.out_dir, config_.out_dir, log_);
  CmdExportFigures(config_.out_dir, figures, log_);
  EXPECT_EQ(Slurp(figures / "metrics.csv"), metrics);
  EXPECT_THROW(CmdExportFigures(dir_.path() / "empty", figures, log_), DataError);
}

TEST_F(CommandsTest, EvaluateAndDetectWriteJson) {
  CmdTrain(config_, false, log_);
  CmdEvaluate(config_, std::nullopt, log_);
  for (int p : {2011, 2012, 2013}) {
    EXPECT_TRUE(fs::exists(config_.out_dir / ("evaluation_" + std::to_string(p) + ".json")));
  }
  CmdDetect(config_, log_);
  const DriftReport d = DriftReportFromJson(Slurp(config_.out_dir / "drift_2012.json"));
  EXPECT_EQ(d.period, 2012);
  EXPECT_FALSE(fs::exists(config_.out_dir / "drift_2011.json"));

  RunConfig wide = config_;
  wide.agent.hidden = 9;
  EXPECT_THROW(CmdEvaluate(wide, std::nullopt, log_), DataError);
}

TEST(CommandsConfigTest, ZeroPeriodsRejected) {
  testing::TempDir dir("zero");
  RunConfig c = Small(dir.path());
  c.generator.periods = 0;
  std::ostringstream log;
  EXPECT_THROW(CmdGenerate(c, log), ConfigError);
}

}  // namespace
}  // namespace streamflow::cli
