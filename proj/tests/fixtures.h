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

#ifndef STREAMFLOW_TESTS_FIXTURES_H_
#define STREAMFLOW_TESTS_FIXTURES_H_

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "streamflow/graph.h"
#include "streamflow/ingest.h"

namespace streamflow::testing {

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("streamflow_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

using FlowFn = std::function<double(const NodeId&, std::size_t)>;

// Series on a shared 5-minute axis. Speed and occupancy are simple functions
// of flow.
inline SensorSeries MakeSeries(const NodeId& id, std::size_t length, const FlowFn& flow) {
  SensorSeries s;
  s.sensor_id = id;
  for (std::size_t t = 0; t < length; ++t) {
    const double f = flow(id, t);
    s.timestamps.push_back(1293840000 + static_cast<std::int64_t>(t) * kStepSeconds);
    s.flow.push_back(f);
    s.speed.push_back(70.0 - 0.05 * f);
    s.occupancy.push_back(std::min(1.0, 0.01 + 0.001 * f));
  }
  return s;
}

inline PeriodDataset MakeDataset(int period, const std::set<NodeId>& nodes,
                                 const std::set<Edge>& edges, std::size_t length,
                                 const FlowFn& flow) {
  PeriodDataset d;
  d.period = period;
  d.snapshot = GraphSnapshot(period, nodes, edges);
  for (const NodeId& v : nodes) d.series.emplace(v, MakeSeries(v, length, flow));
  d.splits = SplitSixTwoTwo(length);
  return d;
}

// Diurnal-looking flow with a per-node phase and small deterministic jitter.
inline double WavyFlow(const NodeId& id, std::size_t t) {
  const double phase = static_cast<double>(std::hash<std::string>{}(id) % 97);
  return 100.0 + 80.0 * std::sin(0.05 * static_cast<double>(t) + phase) +
         static_cast<double>((t * 7 + id.size()) % 5);
}

inline std::set<NodeId> NodeRange(int first, int count) {
  std::set<NodeId> nodes;
  for (int i = first; i < first + count; ++i) {
    nodes.insert("n" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  }
  return nodes;
}

inline GraphSnapshot RandomGraph(int period, int nodes, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  const std::set<NodeId> ids = NodeRange(0, nodes);
  const std::vector<NodeId> order(ids.begin(), ids.end());
  std::set<Edge> edges;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (coin(rng)) edges.emplace(order[i], order[j]);
    }
  }
  return GraphSnapshot(period, ids, edges);
}

}  // namespace streamflow::testing

#endif  // STREAMFLOW_TESTS_FIXTURES_H_
