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

#ifndef STREAMFLOW_INGEST_H_
#define STREAMFLOW_INGEST_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streamflow/graph.h"

namespace streamflow {

// Readings are 5-minute aggregates.
inline constexpr std::int64_t kStepSeconds = 300;
inline constexpr std::size_t kStepsPerDay = 288;

// Per-sensor readings. Timestamps are Unix seconds, strictly increasing in
// kStepSeconds steps. Flow and speed are non-negative, occupancy in [0, 1].
struct SensorSeries {
  NodeId sensor_id;
  std::vector<std::int64_t> timestamps;
  std::vector<double> flow;
  std::vector<double> speed;
  std::vector<double> occupancy;

  std::size_t size() const { return timestamps.size(); }
  // Throws DataError describing the first violated invariant.
  void Validate() const;

  friend bool operator==(const SensorSeries&, const SensorSeries&) = default;
};

// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool Contains(std::size_t i) const { return i >= begin && i < end; }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct SplitRanges {
  IndexRange train;
  IndexRange val;
  IndexRange test;

  friend bool operator==(const SplitRanges&, const SplitRanges&) = default;
};

// Contiguous 6:2:2 split: train = floor(0.6 T), val = floor((T - train) / 2),
// test gets the remainder. Each part is within one index of its exact share.
// Requires T >= 5.
SplitRanges SplitSixTwoTwo(std::size_t length);

// One period of the stream. All series share one timestamp axis so the split
// ranges index every series alike.
struct PeriodDataset {
  int period = 0;
  GraphSnapshot snapshot;
  std::map<NodeId, SensorSeries> series;
  SplitRanges splits;

  std::size_t length() const;
  // Throws DataError naming the sensor if it has no series.
  const SensorSeries& Series(const NodeId& v) const;
  bool HasSeries(const NodeId& v) const { return series.count(v) > 0; }
  // Throws DataError describing the first violated invariant.
  void Validate() const;

  friend bool operator==(const PeriodDataset& a, const PeriodDataset& b);
};

// ISO-8601 "YYYY-MM-DDTHH:MM:SS" (a trailing "Z" is accepted) in UTC.
std::int64_t ParseTimestamp(std::string_view text);
std::string FormatTimestamp(std::int64_t unix_seconds);

// Loads a readings CSV (header "timestamp,sensor_id,flow,speed,occupancy")
// and the period's adjacency CSV. A "nodes.csv" roster next to the adjacency
// file is picked up when present. Errors carry file and line context.
PeriodDataset LoadPeriod(const std::filesystem::path& readings_csv,
                         const std::filesystem::path& adjacency_csv,
                         int period);

// Writes readings.csv, adjacency.csv and nodes.csv into dir. Values are
// written in shortest round-trip form so LoadPeriod restores them exactly.
void WritePeriod(const PeriodDataset& dataset, const std::filesystem::path& dir);

// Per-period file layout under a data directory: <dir>/period_<label>/.
std::filesystem::path PeriodDirectory(const std::filesystem::path& data_dir,
                                      int period);
PeriodDataset LoadPeriodDirectory(const std::filesystem::path& data_dir,
                                  int period);
// Sorted period labels found under data_dir. Throws DataError if none exist or
// the labels are not consecutive.
std::vector<int> DiscoverPeriods(const std::filesystem::path& data_dir);

struct DriftSpec {
  NodeId node;
  int period = 0;
  // Added to the node's diurnal profile from `period` onwards.
  double magnitude = 0.0;

  friend bool operator==(const DriftSpec&, const DriftSpec&) = default;
};

struct GeneratorConfig {
  int periods = 3;
  int start_period = 2011;
  int initial_nodes = 50;
  int growth_per_period = 2;
  std::size_t steps_per_period = 2016;
  double profile_peak = 300.0;
  double profile_base = 40.0;
  double noise_sigma = 8.0;
  // Links from each new node to distinct existing nodes.
  int edges_per_new_node = 2;
  std::vector<DriftSpec> drift;
  // Additionally plants drift on round(fraction * surviving) randomly chosen
  // surviving nodes in every period after the first.
  double random_drift_fraction = 0.0;
  double random_drift_magnitude = 0.0;

  // Throws ConfigError.
  void Validate() const;
};

struct SyntheticStream {
  std::vector<PeriodDataset> periods;
  // Explicit plus randomly planted drift, ordered by (period, node).
  std::vector<DriftSpec> drift;
};

// Node ids "s0000", "s0001", ... in creation order. Flow is
//   base + (peak - base) * (1 - cos(2 pi tod / day)) / 2 + offset + noise
// clamped at zero, where offset accumulates the node's drift magnitudes.
// Speed falls and occupancy rises with flow. Pure function of (config, seed).
SyntheticStream GenerateSynthetic(const GeneratorConfig& config,
                                  std::uint64_t seed);

// The noise-free diurnal profile at step t.
double DiurnalProfile(const GeneratorConfig& config, std::size_t t);

}  // namespace streamflow

#endif  // STREAMFLOW_INGEST_H_
