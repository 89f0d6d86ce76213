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

#ifndef STREAMFLOW_TOOLS_COMMANDS_H_
#define STREAMFLOW_TOOLS_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "config.h"
#include "streamflow/trainer.h"

namespace streamflow::cli {

std::filesystem::path ReportPath(const std::filesystem::path& dir, int period);
std::filesystem::path TimingsPath(const std::filesystem::path& dir, int period);
std::filesystem::path CheckpointPath(const std::filesystem::path& dir, int period);

// Writes every synthetic period under config.out_dir plus the planted drift
// (drift.json) and the effective config (config.ini).
void CmdGenerate(const RunConfig& config, std::ostream& log);

// Runs the period loop over config.data_dir, writing report_<p>.json,
// timings_<p>.json and checkpoint_<p>.bin per period into config.out_dir.
// With resume, continues after the latest consecutive checkpoint found there.
std::vector<PeriodReport> CmdTrain(const RunConfig& config, bool resume, std::ostream& log);

// Scores a stored network on every period of config.data_dir, writing
// evaluation_<p>.json. Defaults to the latest checkpoint in config.out_dir.
void CmdEvaluate(const RunConfig& config, const std::optional<std::filesystem::path>& checkpoint,
                 std::ostream& log);

// Drift ranking for each consecutive pair of periods, as drift_<p>.json.
void CmdDetect(const RunConfig& config, std::ostream& log);

// metrics.csv (period, horizon, metric, value on the test split over all
// nodes) and timing.csv (period, total and per-epoch seconds) from the
// reports in report_dir. Throws DataError if there are none.
void CmdExportFigures(const std::filesystem::path& report_dir,
                      const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace streamflow::cli

#endif  // STREAMFLOW_TOOLS_COMMANDS_H_
