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

#include "streamflow/env.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "streamflow/errors.h"

namespace streamflow {
namespace {

double SortedPercentile(const std::vector<double>& sorted, double q) {
  const double pos = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double SortedMedian(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  return n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

// Normalized (flow, speed, occupancy) rows for steps [begin, end).
std::vector<double> NormalizedRows(const SensorSeries& s, std::size_t begin, std::size_t end,
                                   const Calibration& cal) {
  std::vector<double> rows;
  rows.reserve((end - begin) * kChannels);
  for (std::size_t i = begin; i < end; ++i) {
    rows.push_back(cal.NormalizeFlow(s.flow[i]));
    rows.push_back(cal.NormalizeSpeed(s.speed[i]));
    rows.push_back(std::clamp(s.occupancy[i], 0.0, 1.0));
  }
  return rows;
}

}  // namespace

ActionClass::ActionClass(int value) : value_(value) {
  if (value < 0 || value >= kNumFlowClasses) {
    throw std::out_of_range("action class " + std::to_string(value) + " outside [0, 4]");
  }
}

Discretizer::Discretizer(Edges edges, Representatives representatives)
    : edges_(edges), representatives_(representatives) {
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (!std::isfinite(edges_[k]) || (k > 0 && !(edges_[k] > edges_[k - 1]))) {
      throw std::invalid_argument("discretizer edges must be finite and strictly increasing");
    }
  }
  for (std::size_t k = 0; k < representatives_.size(); ++k) {
    const double r = representatives_[k];
    const bool above = k == 0 || r >= edges_[k - 1];
    const bool below = k + 1 == representatives_.size() || r < edges_[k];
    if (!std::isfinite(r) || !above || !below) {
      throw std::invalid_argument("representative of class " + std::to_string(k) +
                                  " lies outside its bin");
    }
  }
}

Discretizer Discretizer::Fit(std::span<const double> training_flows) {
  std::vector<double> sorted(training_flows.begin(), training_flows.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t unique_count = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1]) ++unique_count;
  }
  if (unique_count < static_cast<std::size_t>(kNumFlowClasses)) {
    throw std::invalid_argument("need at least 5 distinct training flows to fit 5 classes, got " +
                                std::to_string(unique_count));
  }
  Edges edges{};
  for (std::size_t k = 0; k < edges.size(); ++k) {
    edges[k] = SortedPercentile(sorted, 20.0 * static_cast<double>(k + 1));
    if (k > 0 && !(edges[k] > edges[k - 1])) {
      throw std::invalid_argument("degenerate binning: percentile edges coincide at " +
                                  std::to_string(edges[k]));
    }
  }
  Representatives reps{};
  auto begin = sorted.begin();
  for (std::size_t k = 0; k < reps.size(); ++k) {
    auto end = k < edges.size() ? std::lower_bound(begin, sorted.end(), edges[k]) : sorted.end();
    if (end != begin) {
      reps[k] = SortedMedian(std::span<const double>(&*begin, static_cast<std::size_t>(end - begin)));
    } else if (k == 0) {
      reps[k] = edges[0] - 0.5 * (edges[1] - edges[0]);
    } else if (k == edges.size()) {
      reps[k] = edges[k - 1];
    } else {
      reps[k] = 0.5 * (edges[k - 1] + edges[k]);
    }
    begin = end;
  }
  return Discretizer(edges, reps);
}

ActionClass Discretizer::Classify(double flow) const {
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), flow);
  return ActionClass(static_cast<int>(it - edges_.begin()));
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  return SortedPercentile(values, q);
}

Calibration Calibration::Fit(const PeriodDataset& dataset, double percentile) {
  std::vector<double> flows;
  std::vector<double> speeds;
  const IndexRange train = dataset.splits.train;
  for (const auto& [id, s] : dataset.series) {
    flows.insert(flows.end(), s.flow.begin() + static_cast<std::ptrdiff_t>(train.begin),
                 s.flow.begin() + static_cast<std::ptrdiff_t>(train.end));
    speeds.insert(speeds.end(), s.speed.begin() + static_cast<std::ptrdiff_t>(train.begin),
                  s.speed.begin() + static_cast<std::ptrdiff_t>(train.end));
  }
  if (flows.empty()) {
    throw DataError("period " + std::to_string(dataset.period) + ": empty training split");
  }
  constexpr double kFloor = 1e-6;
  Calibration cal;
  cal.flow_max = std::max(Percentile(std::move(flows), percentile), kFloor);
  cal.speed_max = std::max(Percentile(std::move(speeds), percentile), kFloor);
  return cal;
}

double Calibration::NormalizeFlow(double flow) const {
  return std::clamp(flow / flow_max, 0.0, 1.0);
}

double Calibration::NormalizeSpeed(double speed) const {
  return std::clamp(speed / speed_max, 0.0, 1.0);
}

void RewardWeights::Validate() const {
  for (double w : {prediction, speed, occupancy}) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("reward weights must be finite and non-negative");
    }
  }
  if (Total() <= 0.0) throw std::invalid_argument("reward weights are all zero");
}

void EnvConfig::Validate() const {
  if (window < 1) throw ConfigError("env.window must be >= 1");
  if (!(occupancy_epsilon > 0.0 && occupancy_epsilon <= 1.0)) {
    throw ConfigError("env.occ_epsilon must be in (0, 1]");
  }
  if (!(calibration_percentile > 0.0 && calibration_percentile <= 100.0)) {
    throw ConfigError("env.calibration_percentile must be in (0, 100]");
  }
  try {
    weights.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("reward: ") + e.what());
  }
}

std::vector<StateVector> BuildStates(const PeriodDataset& dataset, const NodeId& v,
                                     std::size_t first, std::size_t last, int window,
                                     const Calibration& calibration) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  if (first < w) {
    throw std::invalid_argument("state time " + std::to_string(first) +
                                " precedes a full window of " + std::to_string(w));
  }
  const SensorSeries& own = dataset.Series(v);
  if (last > own.size() || first > last) {
    throw std::invalid_argument("state time " + std::to_string(last) + " beyond series length " +
                                std::to_string(own.size()));
  }
  const std::set<NodeId>& neighbors = dataset.snapshot.Neighbors(v);
  const std::size_t begin = first - w;
  const std::size_t end = last;  // window of the last state ends at last - 1

  const std::vector<double> own_rows = NormalizedRows(own, begin, end, calibration);
  std::vector<double> neighbor_rows(own_rows.size(), 0.0);
  if (!neighbors.empty()) {
    for (const NodeId& u : neighbors) {
      const std::vector<double> rows = NormalizedRows(dataset.Series(u), begin, end, calibration);
      for (std::size_t i = 0; i < rows.size(); ++i) neighbor_rows[i] += rows[i];
    }
    const double inv = 1.0 / static_cast<double>(neighbors.size());
    for (double& x : neighbor_rows) x *= inv;
  }
  const std::size_t max_degree = dataset.snapshot.MaxDegree();
  const double degree = max_degree == 0 ? 0.0
                                        : static_cast<double>(neighbors.size()) /
                                              static_cast<double>(max_degree);

  const std::size_t block = w * kChannels;
  std::vector<StateVector> states;
  states.reserve(last - first + 1);
  for (std::size_t t = first; t <= last; ++t) {
    StateVector s(StateDimension(window));
    const std::size_t offset = (t - w - begin) * kChannels;
    std::copy_n(own_rows.begin() + static_cast<std::ptrdiff_t>(offset), block, s.begin());
    std::copy_n(neighbor_rows.begin() + static_cast<std::ptrdiff_t>(offset), block,
                s.begin() + static_cast<std::ptrdiff_t>(block));
    s.back() = degree;
    states.push_back(std::move(s));
  }
  return states;
}

StateVector BuildState(const PeriodDataset& dataset, const NodeId& v, std::size_t t,
                       int window, const Calibration& calibration) {
  return std::move(BuildStates(dataset, v, t, t, window, calibration).front());
}

StateVector AdvanceState(std::span<const double> state, double next_flow_norm, int window) {
  const auto w = static_cast<std::size_t>(window);
  const std::size_t block = w * kChannels;
  if (state.size() != StateDimension(window)) {
    throw std::invalid_argument("state dimension " + std::to_string(state.size()) +
                                " does not match window " + std::to_string(window));
  }
  StateVector next(state.begin(), state.end());
  // Own block: drop the oldest row, append the predicted flow with persisted
  // speed and occupancy.
  std::copy(state.begin() + kChannels, state.begin() + block, next.begin());
  next[block - 3] = next_flow_norm;
  next[block - 2] = state[block - 2];
  next[block - 1] = state[block - 1];
  // Neighbour block: persist the latest observed row.
  std::copy(state.begin() + block + kChannels, state.begin() + 2 * block, next.begin() + block);
  std::copy_n(state.begin() + 2 * block - kChannels, kChannels, next.begin() + 2 * block - kChannels);
  return next;
}

double ComputeReward(ActionClass predicted, ActionClass actual, double speed_norm,
                     double occupancy, const RewardWeights& weights, double occupancy_epsilon) {
  const double gap = std::abs(predicted.value() - actual.value());
  const double r_p = 1.0 - gap / static_cast<double>(kNumFlowClasses - 1);
  const double r_c = speed_norm;
  const double r_o = occupancy_epsilon / std::max(occupancy, occupancy_epsilon);
  return weights.prediction * r_p + weights.speed * r_c + weights.occupancy * r_o;
}

}  // namespace streamflow
