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

#include <fstream>
#include <map>
#include <memory>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "streamflow/checkpoint.h"
#include "streamflow/drift.h"
#include "streamflow/errors.h"
#include "streamflow/format.h"
#include "streamflow/ingest.h"
#include "streamflow/report.h"

namespace streamflow::cli {
namespace {

namespace fs = std::filesystem;

using DatasetPtr = std::shared_ptr<const PeriodDataset>;

void EnsureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw DataError("cannot write " + path.string());
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

DatasetPtr Load(const RunConfig& config, int period) {
  return std::make_shared<const PeriodDataset>(LoadPeriodDirectory(config.data_dir, period));
}

// Files named <prefix><period><suffix> in dir, keyed by period.
std::map<int, fs::path> FindByPeriod(const fs::path& dir, const std::string& prefix,
                                     const std::string& suffix) {
  std::map<int, fs::path> found;
  if (!fs::is_directory(dir)) return found;
  const std::regex pattern(prefix + "(-?[0-9]+)" + std::regex_replace(suffix, std::regex(R"(\.)"), R"(\.)"));
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, m, pattern)) {
      found.emplace(std::stoi(m[1].str()), entry.path());
    }
  }
  return found;
}

std::string MetricsLine(const MetricSet& m) {
  return "mae " + FormatDouble(m.mae) + ", rmse " + FormatDouble(m.rmse) + ", mape " +
         FormatDouble(m.mape) + "%, accuracy " + FormatDouble(m.class_accuracy);
}

std::set<NodeId> OldNodes(const PeriodDataset* prev, const PeriodDataset& curr,
                          const DriftConfig& drift, int threads) {
  std::set<NodeId> old;
  if (!prev) return old;
  const DriftReport report = DetectDrift(*prev, curr, drift, threads);
  const std::set<NodeId> flagged(report.candidates.begin(), report.candidates.end());
  for (const NodeId& v : DiffNodes(prev->snapshot, curr.snapshot).surviving) {
    if (!flagged.count(v) && curr.HasSeries(v)) old.insert(v);
  }
  return old;
}

}  // namespace

fs::path ReportPath(const fs::path& dir, int period) {
  return dir / ("report_" + std::to_string(period) + ".json");
}

fs::path TimingsPath(const fs::path& dir, int period) {
  return dir / ("timings_" + std::to_string(period) + ".json");
}

fs::path CheckpointPath(const fs::path& dir, int period) {
  return dir / ("checkpoint_" + std::to_string(period) + ".bin");
}

void CmdGenerate(const RunConfig& config, std::ostream& log) {
  config.Validate();
  const SyntheticStream stream = GenerateSynthetic(config.generator, config.agent.seed);
  EnsureDirectory(config.out_dir);
  for (const PeriodDataset& p : stream.periods) {
    const fs::path dir = PeriodDirectory(config.out_dir, p.period);
    EnsureDirectory(dir);
    WritePeriod(p, dir);
    log << "period " << p.period << ": " << p.series.size() << " sensors, " << p.length()
        << " steps -> " << dir.string() << "\n";
  }
  nlohmann::ordered_json planted = nlohmann::ordered_json::array();
  for (const DriftSpec& d : stream.drift) {
    planted.push_back({{"node", d.node}, {"period", d.period}, {"magnitude", d.magnitude}});
  }
  WriteText(config.out_dir / "drift.json", planted.dump(2) + "\n");
  WriteText(config.out_dir / "config.ini", FormatRunConfig(config));
  log << stream.drift.size() << " planted drift entries\n";
}

std::vector<PeriodReport> CmdTrain(const RunConfig& config, bool resume, std::ostream& log) {
  config.Validate();
  const std::vector<int> periods = DiscoverPeriods(config.data_dir);
  EnsureDirectory(config.out_dir);
  WriteText(config.out_dir / "config.ini", FormatRunConfig(config));

  ContinualTrainer trainer(config.agent);
  std::size_t next = 0;
  DatasetPtr prev;
  if (resume) {
    while (next < periods.size() && fs::exists(CheckpointPath(config.out_dir, periods[next]))) {
      ++next;
    }
    if (next > 0) {
      const int done = periods[next - 1];
      TrainerState state = LoadCheckpoint(CheckpointPath(config.out_dir, done));
      if (state.period != done) {
        throw DataError(CheckpointPath(config.out_dir, done).string() + " holds period " +
                        std::to_string(state.period));
      }
      try {
        trainer.Restore(std::move(state));
      } catch (const std::invalid_argument& e) {
        throw DataError(CheckpointPath(config.out_dir, done).string() + ": " + e.what());
      }
      if (config.agent.trainer.regime == Regime::kRetrain) {
        for (std::size_t i = 0; i < next; ++i) trainer.RememberHistory(Load(config, periods[i]));
      }
      prev = Load(config, done);
      log << "resuming after period " << done << "\n";
    } else {
      log << "no checkpoint in " << config.out_dir.string() << ", starting from scratch\n";
    }
  }

  std::vector<PeriodReport> reports;
  for (; next < periods.size(); ++next) {
    DatasetPtr curr = Load(config, periods[next]);
    PeriodReport report = trainer.RunPeriod(prev, curr);
    WriteText(ReportPath(config.out_dir, report.period), PeriodReportToJson(report));
    WriteText(TimingsPath(config.out_dir, report.period),
              TimingsToJson(report.period, report.timings));
    SaveCheckpoint(trainer.Snapshot(), CheckpointPath(config.out_dir, report.period));
    const HorizonReport& h = report.test.horizons.front();
    log << "period " << report.period << ": " << report.candidates.size() << "/"
        << report.node_count << " candidates, " << report.experiences << " experiences, "
        << report.updates << " updates, test h=" << h.horizon << " " << MetricsLine(h.all)
        << " (" << FormatDouble(report.timings.total_seconds) << " s)\n";
    reports.push_back(std::move(report));
    prev = std::move(curr);
  }
  return reports;
}

void CmdEvaluate(const RunConfig& config, const std::optional<fs::path>& checkpoint,
                 std::ostream& log) {
  config.Validate();
  fs::path path;
  if (checkpoint) {
    path = *checkpoint;
  } else {
    const auto found = FindByPeriod(config.out_dir, "checkpoint_", ".bin");
    if (found.empty()) throw DataError("no checkpoint in " + config.out_dir.string());
    path = found.rbegin()->second;
  }
  const TrainerState state = LoadCheckpoint(path);
  if (!(state.online.config() == config.agent.NetworkConfig())) {
    throw DataError(path.string() + ": network shape does not match the configuration");
  }
  EnsureDirectory(config.out_dir);
  const TrainerConfig& tc = config.agent.trainer;
  DatasetPtr prev;
  for (int period : DiscoverPeriods(config.data_dir)) {
    DatasetPtr curr = Load(config, period);
    const PeriodContext ctx = PreparePeriod(curr, config.agent.env);
    const std::set<NodeId> old =
        OldNodes(prev.get(), *curr, config.agent.drift, config.agent.threads);
    EvaluationReport r;
    r.period = period;
    r.checkpoint_period = state.period;
    r.old_nodes = old.size();
    r.validation = EvaluateSplit(state.online, ctx, curr->splits.val, tc.horizons,
                                 config.agent.env.window, old, tc.eval_stride,
                                 config.agent.threads);
    r.test = EvaluateSplit(state.online, ctx, curr->splits.test, tc.horizons,
                           config.agent.env.window, old, tc.eval_stride, config.agent.threads);
    WriteText(config.out_dir / ("evaluation_" + std::to_string(period) + ".json"),
              EvaluationReportToJson(r));
    const HorizonReport& h = r.test.horizons.front();
    log << "period " << period << ": test h=" << h.horizon << " " << MetricsLine(h.all) << "\n";
    prev = std::move(curr);
  }
}

void CmdDetect(const RunConfig& config, std::ostream& log) {
  config.Validate();
  const std::vector<int> periods = DiscoverPeriods(config.data_dir);
  EnsureDirectory(config.out_dir);
  DatasetPtr prev;
  for (int period : periods) {
    DatasetPtr curr = Load(config, period);
    if (prev) {
      const DriftReport report = DetectDrift(*prev, *curr, config.agent.drift, config.agent.threads);
      WriteText(config.out_dir / ("drift_" + std::to_string(period) + ".json"),
                DriftReportToJson(report));
      log << "period " << period << ": " << report.new_nodes.size() << " new, "
          << report.top_drifted.size() << " drifted:";
      for (const NodeId& v : report.top_drifted) log << " " << v;
      log << "\n";
    }
    prev = std::move(curr);
  }
  if (periods.size() < 2) log << "only one period; nothing to compare\n";
}

void CmdExportFigures(const fs::path& report_dir, const fs::path& out_dir, std::ostream& log) {
  const auto reports = FindByPeriod(report_dir, "report_", ".json");
  if (reports.empty()) throw DataError("no report_<period>.json files in " + report_dir.string());
  std::string metrics = "period,horizon,metric,value\n";
  std::string timing = "period,total_seconds,per_epoch_seconds\n";
  for (const auto& [period, path] : reports) {
    const PeriodReport r = PeriodReportFromJson(ReadText(path));
    for (const HorizonReport& h : r.test.horizons) {
      const std::pair<const char*, double> rows[] = {{"mae", h.all.mae},
                                                     {"rmse", h.all.rmse},
                                                     {"mape", h.all.mape},
                                                     {"class_accuracy", h.all.class_accuracy}};
      for (const auto& [name, value] : rows) {
        metrics += std::to_string(r.period) + "," + std::to_string(h.horizon) + "," + name + "," +
                   FormatDouble(value) + "\n";
      }
    }
    const PeriodTimings t = TimingsFromJson(ReadText(TimingsPath(report_dir, period)));
    timing += std::to_string(r.period) + "," + FormatDouble(t.total_seconds) + "," +
              FormatDouble(t.per_epoch_seconds) + "\n";
  }
  EnsureDirectory(out_dir);
  WriteText(out_dir / "metrics.csv", metrics);
  WriteText(out_dir / "timing.csv", timing);
  log << reports.size() << " reports -> " << (out_dir / "metrics.csv").string() << ", "
      << (out_dir / "timing.csv").string() << "\n";
}

}  // namespace streamflow::cli
