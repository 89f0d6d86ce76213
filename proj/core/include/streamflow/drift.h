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

#ifndef STREAMFLOW_DRIFT_H_
#define STREAMFLOW_DRIFT_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "streamflow/graph.h"
#include "streamflow/ingest.h"

namespace streamflow {

struct DriftConfig {
  double fraction = 0.10;  // share of surviving nodes retrained
  int bins = 20;
  double smoothing = 1.0;  // additive (Laplace) pseudo-count per bin

  // Throws ConfigError.
  void Validate() const;
};

// Smoothed flow histogram of one node in one period.
struct NodeHistogram {
  NodeId node;
  int period = 0;
  std::vector<double> edges;   // bins + 1 ascending boundaries
  std::vector<double> masses;  // (count_k + smoothing) / (n + bins * smoothing)
};

// bins + 1 equal-width boundaries over [lo, hi]. A degenerate range is widened
// to [lo, lo + 1].
std::vector<double> EqualWidthEdges(double lo, double hi, int bins);

// Bin of a value; values outside the edges fall into the outermost bins.
std::size_t BinIndex(std::span<const double> edges, double value);

// Throws std::invalid_argument on an empty sample, non-ascending edges or
// negative smoothing.
NodeHistogram BuildHistogram(const NodeId& node, int period, std::span<const double> values,
                             std::span<const double> edges, double smoothing);

// sum_k p_k ln(p_k / q_k) in nats. Throws std::invalid_argument when the two
// histograms are not over identical bins.
double KlDivergence(const NodeHistogram& p, const NodeHistogram& q);

struct NodeScore {
  NodeId node;
  double kl = 0.0;
};

struct DriftReport {
  int period = 0;
  std::vector<NodeScore> scores;    // surviving nodes, by node id
  std::vector<NodeId> new_nodes;
  std::vector<NodeId> top_drifted;  // KL descending, ties by node id
  std::vector<NodeId> candidates;   // new_nodes + top_drifted, sorted by id
};

// Ranks surviving nodes by KL(curr || prev) of their training-split flow
// histograms over the pooled range of both periods, and selects
// new nodes plus the top ceil(fraction * surviving). Removed nodes are ignored.
DriftReport DetectDrift(const PeriodDataset& prev, const PeriodDataset& curr,
                        const DriftConfig& config, int threads = 1);

// {"period": p, "scores": [{"node": id, "kl": x}], "candidates": [id]}.
std::string DriftReportToJson(const DriftReport& report);
DriftReport DriftReportFromJson(const std::string& json);

}  // namespace streamflow

#endif  // STREAMFLOW_DRIFT_H_
