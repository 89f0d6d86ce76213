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

#include "streamflow/drift.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "streamflow/errors.h"
#include "streamflow/parallel.h"
#include "streamflow/replay.h"

namespace streamflow {
namespace {

std::span<const double> TrainFlows(const PeriodDataset& d, const NodeId& v) {
  const SensorSeries& s = d.Series(v);
  return std::span<const double>(s.flow).subspan(d.splits.train.begin, d.splits.train.size());
}

}  // namespace

void DriftConfig::Validate() const {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("drift.fraction must be in [0, 1]");
  if (bins < 1) throw ConfigError("drift.bins must be >= 1");
  if (!(smoothing > 0.0) || !std::isfinite(smoothing)) {
    throw ConfigError("drift.smoothing must be positive");
  }
}

std::vector<double> EqualWidthEdges(double lo, double hi, int bins) {
  if (bins < 1) throw std::invalid_argument("need at least one bin");
  if (!(hi > lo)) hi = lo + 1.0;
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int k = 0; k <= bins; ++k) edges[static_cast<std::size_t>(k)] = lo + width * k;
  edges.back() = hi;
  return edges;
}

std::size_t BinIndex(std::span<const double> edges, double value) {
  const std::size_t bins = edges.size() - 1;
  const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, value);
  return std::min(static_cast<std::size_t>(it - (edges.begin() + 1)), bins - 1);
}

NodeHistogram BuildHistogram(const NodeId& node, int period, std::span<const double> values,
                             std::span<const double> edges, double smoothing) {
  if (values.empty()) throw std::invalid_argument("histogram of an empty series for '" + node + "'");
  if (edges.size() < 2) throw std::invalid_argument("histogram needs at least one bin");
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (!(edges[k] > edges[k - 1])) throw std::invalid_argument("histogram edges must ascend");
  }
  if (!(smoothing >= 0.0)) throw std::invalid_argument("smoothing must be >= 0");
  const std::size_t bins = edges.size() - 1;
  std::vector<double> counts(bins, 0.0);
  for (double x : values) counts[BinIndex(edges, x)] += 1.0;
  const double denom = static_cast<double>(values.size()) + static_cast<double>(bins) * smoothing;
  NodeHistogram h;
  h.node = node;
  h.period = period;
  h.edges.assign(edges.begin(), edges.end());
  h.masses.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) h.masses[k] = (counts[k] + smoothing) / denom;
  return h;
}

double KlDivergence(const NodeHistogram& p, const NodeHistogram& q) {
  if (p.masses.size() != q.masses.size() || p.edges != q.edges) {
    throw std::invalid_argument("KL divergence needs histograms over identical bins");
  }
  double kl = 0.0;
  for (std::size_t k = 0; k < p.masses.size(); ++k) {
    const double pk = p.masses[k];
    if (pk > 0.0) kl += pk * std::log(pk / q.masses[k]);
  }
  return kl;
}

DriftReport DetectDrift(const PeriodDataset& prev, const PeriodDataset& curr,
                        const DriftConfig& config, int threads) {
  config.Validate();
  const NodeDiff diff = DiffNodes(prev.snapshot, curr.snapshot);
  DriftReport report;
  report.period = curr.period;
  report.new_nodes.assign(diff.added.begin(), diff.added.end());

  std::vector<NodeId> surviving;
  for (const NodeId& v : diff.surviving) {
    if (prev.HasSeries(v) && curr.HasSeries(v)) surviving.push_back(v);
  }
  if (!surviving.empty()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const NodeId& v : surviving) {
      for (const PeriodDataset* d : {&prev, &curr}) {
        for (double x : TrainFlows(*d, v)) {
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
    }
    const std::vector<double> edges = EqualWidthEdges(lo, hi, config.bins);
    report.scores.resize(surviving.size());
    ParallelFor(surviving.size(), threads, [&](std::size_t i) {
      const NodeId& v = surviving[i];
      const NodeHistogram p = BuildHistogram(v, curr.period, TrainFlows(curr, v), edges, config.smoothing);
      const NodeHistogram q = BuildHistogram(v, prev.period, TrainFlows(prev, v), edges, config.smoothing);
      report.scores[i] = {v, KlDivergence(p, q)};
    });
  }

  std::vector<const NodeScore*> ranked;
  for (const NodeScore& s : report.scores) ranked.push_back(&s);
  std::stable_sort(ranked.begin(), ranked.end(), [](const NodeScore* a, const NodeScore* b) {
    if (a->kl != b->kl) return a->kl > b->kl;
    return a->node < b->node;
  });
  const std::size_t top = CeilFraction(config.fraction, ranked.size());
  for (std::size_t i = 0; i < top; ++i) report.top_drifted.push_back(ranked[i]->node);

  report.candidates = report.new_nodes;
  report.candidates.insert(report.candidates.end(), report.top_drifted.begin(),
                           report.top_drifted.end());
  std::sort(report.candidates.begin(), report.candidates.end());
  return report;
}

std::string DriftReportToJson(const DriftReport& report) {
  nlohmann::ordered_json j;
  j["period"] = report.period;
  auto scores = nlohmann::ordered_json::array();
  for (const NodeScore& s : report.scores) {
    nlohmann::ordered_json e;
    e["node"] = s.node;
    e["kl"] = s.kl;
    scores.push_back(std::move(e));
  }
  j["scores"] = std::move(scores);
  j["candidates"] = report.candidates;
  j["new_nodes"] = report.new_nodes;
  j["top_drifted"] = report.top_drifted;
  return j.dump(2) + "\n";
}

DriftReport DriftReportFromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    DriftReport r;
    r.period = j.at("period").get<int>();
    for (const auto& e : j.at("scores")) {
      r.scores.push_back({e.at("node").get<std::string>(), e.at("kl").get<double>()});
    }
    r.candidates = j.at("candidates").get<std::vector<NodeId>>();
    if (j.contains("new_nodes")) r.new_nodes = j.at("new_nodes").get<std::vector<NodeId>>();
    if (j.contains("top_drifted")) r.top_drifted = j.at("top_drifted").get<std::vector<NodeId>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed drift report: ") + e.what());
  }
}

}  // namespace streamflow
