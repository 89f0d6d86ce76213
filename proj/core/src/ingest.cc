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

#include "streamflow/ingest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <tuple>

#include "streamflow/errors.h"
#include "streamflow/format.h"
#include "streamflow/random.h"

namespace streamflow {
namespace {

constexpr std::string_view kReadingsHeader =
    "timestamp,sensor_id,flow,speed,occupancy";

struct Row {
  std::int64_t timestamp;
  double flow;
  double speed;
  double occupancy;
  std::size_t line;
};

std::string NodeName(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%04d", index);
  return buf;
}

std::int64_t PeriodOrigin(int label) {
  using namespace std::chrono;
  const int y = std::clamp(label, 1970, 9999);
  const sys_days day = year{y} / January / 1;
  return day.time_since_epoch().count() * std::int64_t{86400};
}

}  // namespace

void SensorSeries::Validate() const {
  const std::size_t n = timestamps.size();
  if (flow.size() != n || speed.size() != n || occupancy.size() != n) {
    throw DataError("sensor '" + sensor_id + "': channel lengths differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && timestamps[i] - timestamps[i - 1] != kStepSeconds) {
      throw DataError("sensor '" + sensor_id + "': timestamps not in 5-minute steps at index " +
                      std::to_string(i));
    }
    if (!std::isfinite(flow[i]) || flow[i] < 0.0) {
      throw DataError("sensor '" + sensor_id + "': invalid flow at index " + std::to_string(i));
    }
    if (!std::isfinite(speed[i]) || speed[i] < 0.0) {
      throw DataError("sensor '" + sensor_id + "': invalid speed at index " + std::to_string(i));
    }
    if (!(occupancy[i] >= 0.0 && occupancy[i] <= 1.0)) {
      throw DataError("sensor '" + sensor_id + "': occupancy outside [0, 1] at index " +
                      std::to_string(i));
    }
  }
}

SplitRanges SplitSixTwoTwo(std::size_t length) {
  if (length < 5) {
    throw DataError("series of length " + std::to_string(length) +
                    " is too short for a 6:2:2 split");
  }
  const std::size_t train = length * 6 / 10;
  const std::size_t val = (length - train) / 2;
  return {{0, train}, {train, train + val}, {train + val, length}};
}

std::size_t PeriodDataset::length() const {
  return series.empty() ? 0 : series.begin()->second.size();
}

const SensorSeries& PeriodDataset::Series(const NodeId& v) const {
  auto it = series.find(v);
  if (it == series.end()) {
    throw DataError("period " + std::to_string(period) + ": no series for sensor '" + v + "'");
  }
  return it->second;
}

void PeriodDataset::Validate() const {
  if (series.empty()) throw DataError("period " + std::to_string(period) + " has no series");
  const SensorSeries& first = series.begin()->second;
  for (const auto& [id, s] : series) {
    if (id != s.sensor_id) throw DataError("series key mismatch for '" + id + "'");
    if (!snapshot.Contains(id)) {
      throw DataError("sensor '" + id + "' is not in the period " +
                      std::to_string(period) + " graph");
    }
    s.Validate();
    if (s.timestamps != first.timestamps) {
      throw DataError("sensor '" + id + "' does not share the timestamp axis of '" +
                      first.sensor_id + "'");
    }
  }
  if (!(splits == SplitSixTwoTwo(length()))) {
    throw DataError("period " + std::to_string(period) + ": split ranges are not 6:2:2");
  }
}

bool operator==(const PeriodDataset& a, const PeriodDataset& b) {
  return a.period == b.period && a.snapshot.period() == b.snapshot.period() &&
         a.snapshot.nodes() == b.snapshot.nodes() &&
         a.snapshot.edges() == b.snapshot.edges() && a.series == b.series &&
         a.splits == b.splits;
}

std::int64_t ParseTimestamp(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  const std::string buf(text);
  int consumed = 0;
  if (std::sscanf(buf.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%n", &y, &mo, &d, &sep, &h,
                  &mi, &s, &consumed) != 7 ||
      static_cast<std::size_t>(consumed) != buf.size() || (sep != 'T' && sep != ' ')) {
    throw DataError("malformed timestamp '" + buf + "'");
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0) {
    throw DataError("invalid timestamp '" + buf + "'");
  }
  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  return days * 86400 + h * 3600 + mi * 60 + s;
}

std::string FormatTimestamp(std::int64_t unix_seconds) {
  using namespace std::chrono;
  std::int64_t days = unix_seconds / 86400;
  std::int64_t rem = unix_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(rem / 3600),
                int(rem % 3600 / 60), int(rem % 60));
  return buf;
}

PeriodDataset LoadPeriod(const std::filesystem::path& readings_csv,
                         const std::filesystem::path& adjacency_csv, int period) {
  PeriodDataset dataset;
  dataset.period = period;
  dataset.snapshot = ReadGraph(adjacency_csv, adjacency_csv.parent_path() / "nodes.csv", period);

  std::ifstream in(readings_csv);
  if (!in) throw DataError("cannot open " + readings_csv.string());
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) {
    throw DataError(readings_csv.string() + ":" + std::to_string(line_no) + ": " + what);
  };

  if (!std::getline(in, line)) throw DataError(readings_csv.string() + ": empty readings file");
  ++line_no;
  if (Trim(line) != kReadingsHeader) fail("expected header '" + std::string(kReadingsHeader) + "'");

  std::map<NodeId, std::vector<Row>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != 5) fail("expected 5 fields, got " + std::to_string(fields.size()));
    Row row{};
    row.line = line_no;
    try {
      row.timestamp = ParseTimestamp(fields[0]);
    } catch (const DataError& e) {
      fail(e.what());
    }
    const NodeId sensor(fields[1]);
    if (sensor.empty()) fail("empty sensor id");
    const auto flow = ParseDouble(fields[2]);
    const auto speed = ParseDouble(fields[3]);
    const auto occupancy = ParseDouble(fields[4]);
    if (!flow || !std::isfinite(*flow) || *flow < 0.0) fail("bad flow '" + std::string(fields[2]) + "'");
    if (!speed || !std::isfinite(*speed) || *speed < 0.0) fail("bad speed '" + std::string(fields[3]) + "'");
    if (!occupancy || !(*occupancy >= 0.0 && *occupancy <= 1.0)) {
      fail("occupancy '" + std::string(fields[4]) + "' outside [0, 1]");
    }
    if (!dataset.snapshot.Contains(sensor)) fail("sensor '" + sensor + "' is not in the graph");
    row.flow = *flow;
    row.speed = *speed;
    row.occupancy = *occupancy;
    rows[sensor].push_back(row);
  }
  if (rows.empty()) throw DataError(readings_csv.string() + ": no readings");

  for (auto& [sensor, list] : rows) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Row& a, const Row& b) { return a.timestamp < b.timestamp; });
    SensorSeries s;
    s.sensor_id = sensor;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0 && list[i].timestamp - list[i - 1].timestamp != kStepSeconds) {
        line_no = list[i].line;
        fail(list[i].timestamp == list[i - 1].timestamp
                 ? "duplicate timestamp for sensor '" + sensor + "'"
                 : "timestamp gap for sensor '" + sensor + "' before " +
                       FormatTimestamp(list[i].timestamp));
      }
      s.timestamps.push_back(list[i].timestamp);
      s.flow.push_back(list[i].flow);
      s.speed.push_back(list[i].speed);
      s.occupancy.push_back(list[i].occupancy);
    }
    dataset.series.emplace(sensor, std::move(s));
  }

  const SensorSeries& first = dataset.series.begin()->second;
  for (const auto& [sensor, s] : dataset.series) {
    if (s.timestamps != first.timestamps) {
      throw DataError(readings_csv.string() + ": sensor '" + sensor +
                      "' covers a different time range than '" + first.sensor_id + "'");
    }
  }
  dataset.splits = SplitSixTwoTwo(first.size());
  return dataset;
}

void WritePeriod(const PeriodDataset& dataset, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  WriteGraph(dataset.snapshot, dir / "adjacency.csv", dir / "nodes.csv");

  std::ofstream out(dir / "readings.csv", std::ios::binary);
  if (!out) throw DataError("cannot write " + (dir / "readings.csv").string());
  out << kReadingsHeader << '\n';
  const std::size_t n = dataset.length();
  for (std::size_t t = 0; t < n; ++t) {
    std::string stamp;
    for (const auto& [sensor, s] : dataset.series) {
      if (stamp.empty()) stamp = FormatTimestamp(s.timestamps[t]);
      out << stamp << ',' << sensor << ',' << FormatDouble(s.flow[t]) << ','
          << FormatDouble(s.speed[t]) << ',' << FormatDouble(s.occupancy[t]) << '\n';
    }
  }
  if (!out) throw DataError("write failed for " + (dir / "readings.csv").string());
}

std::filesystem::path PeriodDirectory(const std::filesystem::path& data_dir, int period) {
  return data_dir / ("period_" + std::to_string(period));
}

PeriodDataset LoadPeriodDirectory(const std::filesystem::path& data_dir, int period) {
  const auto dir = PeriodDirectory(data_dir, period);
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("missing period directory " + dir.string());
  }
  return LoadPeriod(dir / "readings.csv", dir / "adjacency.csv", period);
}

std::vector<int> DiscoverPeriods(const std::filesystem::path& data_dir) {
  if (!std::filesystem::is_directory(data_dir)) {
    throw DataError("data directory " + data_dir.string() + " does not exist");
  }
  std::vector<int> labels;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("period_", 0) != 0) continue;
    const auto label = ParseInt(std::string_view(name).substr(7));
    if (label) labels.push_back(static_cast<int>(*label));
  }
  if (labels.empty()) throw DataError("no period_<label> directories in " + data_dir.string());
  std::sort(labels.begin(), labels.end());
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] != labels[i - 1] + 1) {
      throw DataError("missing period " + std::to_string(labels[i - 1] + 1) + " in " +
                      data_dir.string());
    }
  }
  return labels;
}

void GeneratorConfig::Validate() const {
  const auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("generator: " + what);
  };
  require(periods >= 1, "periods must be >= 1");
  require(initial_nodes >= 1, "initial_nodes must be >= 1");
  require(growth_per_period >= 0, "growth_per_period must be >= 0");
  require(steps_per_period >= 5, "steps_per_period must be >= 5");
  require(std::isfinite(profile_base) && profile_base >= 0.0, "profile_base must be >= 0");
  require(std::isfinite(profile_peak) && profile_peak > profile_base,
          "profile_peak must exceed profile_base");
  require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, "noise_sigma must be >= 0");
  require(edges_per_new_node >= 0, "edges_per_new_node must be >= 0");
  require(random_drift_fraction >= 0.0 && random_drift_fraction <= 1.0,
          "random_drift_fraction must be in [0, 1]");
  require(std::isfinite(random_drift_magnitude), "random_drift_magnitude must be finite");
  for (const DriftSpec& d : drift) {
    require(!d.node.empty(), "drift entry without node id");
    require(std::isfinite(d.magnitude), "drift magnitude must be finite");
  }
}

double DiurnalProfile(const GeneratorConfig& config, std::size_t t) {
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(t % kStepsPerDay) /
                       static_cast<double>(kStepsPerDay);
  return config.profile_base +
         (config.profile_peak - config.profile_base) * 0.5 * (1.0 - std::cos(phase));
}

SyntheticStream GenerateSynthetic(const GeneratorConfig& config, std::uint64_t seed) {
  config.Validate();
  SyntheticStream stream;

  // Topology: period 0 from scratch, then one growth delta per period.
  std::vector<GraphSnapshot> graphs;
  int next_index = 0;
  {
    Rng rng = MakeRng(seed, "graph", 0);
    std::set<NodeId> nodes;
    std::set<Edge> edges;
    std::vector<NodeId> order;
    for (int i = 0; i < config.initial_nodes; ++i) {
      NodeId v = NodeName(next_index++);
      const std::size_t links =
          std::min<std::size_t>(static_cast<std::size_t>(config.edges_per_new_node), order.size());
      std::vector<NodeId> pool = order;
      for (std::size_t k = 0; k < links; ++k) {
        const std::size_t j = k + UniformIndex(rng, pool.size() - k);
        std::swap(pool[k], pool[j]);
        edges.insert(Edge(v, pool[k]));
      }
      nodes.insert(v);
      order.push_back(v);
    }
    graphs.emplace_back(config.start_period, std::move(nodes), std::move(edges));
  }
  for (int p = 1; p < config.periods; ++p) {
    Rng rng = MakeRng(seed, "graph", p);
    const GraphSnapshot& prev = graphs.back();
    std::vector<NodeId> existing(prev.nodes().begin(), prev.nodes().end());
    GraphDelta delta;
    for (int i = 0; i < config.growth_per_period; ++i) {
      NodeId v = NodeName(next_index++);
      const std::size_t links = std::min<std::size_t>(
          static_cast<std::size_t>(config.edges_per_new_node), existing.size());
      std::vector<NodeId> pool = existing;
      for (std::size_t k = 0; k < links; ++k) {
        const std::size_t j = k + UniformIndex(rng, pool.size() - k);
        std::swap(pool[k], pool[j]);
        delta.added_edges.insert(Edge(v, pool[k]));
      }
      delta.added_nodes.insert(v);
      existing.push_back(v);
    }
    graphs.push_back(ApplyDelta(prev, delta));
  }

  // Drift: explicit entries must name a node alive in their period.
  std::vector<DriftSpec> drift;
  for (const DriftSpec& d : config.drift) {
    const int p = d.period - config.start_period;
    if (p < 0 || p >= config.periods) {
      throw DataError("drift on '" + d.node + "' targets period " + std::to_string(d.period) +
                      " outside the generated range");
    }
    if (!graphs[p].Contains(d.node)) {
      throw DataError("drift node '" + d.node + "' is not in the graph at period " +
                      std::to_string(d.period));
    }
    drift.push_back(d);
  }
  if (config.random_drift_fraction > 0.0) {
    for (int p = 1; p < config.periods; ++p) {
      const NodeDiff diff = DiffNodes(graphs[p - 1], graphs[p]);
      std::vector<NodeId> pool(diff.surviving.begin(), diff.surviving.end());
      const auto count = static_cast<std::size_t>(
          std::llround(config.random_drift_fraction * static_cast<double>(pool.size())));
      Rng rng = MakeRng(seed, "drift", p);
      for (std::size_t k = 0; k < count && k < pool.size(); ++k) {
        const std::size_t j = k + UniformIndex(rng, pool.size() - k);
        std::swap(pool[k], pool[j]);
        drift.push_back({pool[k], config.start_period + p, config.random_drift_magnitude});
      }
    }
  }
  std::sort(drift.begin(), drift.end(), [](const DriftSpec& a, const DriftSpec& b) {
    return std::tie(a.period, a.node) < std::tie(b.period, b.node);
  });

  const double peak = config.profile_peak;
  const bool noisy = config.noise_sigma > 0.0;
  for (int p = 0; p < config.periods; ++p) {
    const int label = config.start_period + p;
    PeriodDataset dataset;
    dataset.period = label;
    dataset.snapshot = graphs[p];
    const std::int64_t origin = PeriodOrigin(label);
    const std::size_t steps = config.steps_per_period;
    for (const NodeId& v : dataset.snapshot.nodes()) {
      double offset = 0.0;
      for (const DriftSpec& d : drift) {
        if (d.node == v && d.period <= label) offset += d.magnitude;
      }
      Rng rng(DeriveSeed(seed, "series:" + v, label));
      std::normal_distribution<double> gauss(0.0, 1.0);
      SensorSeries s;
      s.sensor_id = v;
      s.timestamps.resize(steps);
      s.flow.resize(steps);
      s.speed.resize(steps);
      s.occupancy.resize(steps);
      for (std::size_t t = 0; t < steps; ++t) {
        s.timestamps[t] = origin + static_cast<std::int64_t>(t) * kStepSeconds;
        double flow = DiurnalProfile(config, t) + offset;
        if (noisy) flow += config.noise_sigma * gauss(rng);
        flow = std::max(flow, 0.0);
        const double load = flow / peak;
        double speed = 70.0 - 30.0 * load;
        double occupancy = 0.02 + 0.35 * load;
        if (noisy) {
          speed += gauss(rng);
          occupancy += 0.005 * gauss(rng);
        }
        s.flow[t] = flow;
        s.speed[t] = std::max(speed, 0.0);
        s.occupancy[t] = std::clamp(occupancy, 0.0, 1.0);
      }
      dataset.series.emplace(v, std::move(s));
    }
    dataset.splits = SplitSixTwoTwo(steps);
    stream.periods.push_back(std::move(dataset));
  }
  stream.drift = std::move(drift);
  return stream;
}

}  // namespace streamflow
