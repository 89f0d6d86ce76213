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

#ifndef STREAMFLOW_ENV_H_
#define STREAMFLOW_ENV_H_

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "streamflow/graph.h"
#include "streamflow/ingest.h"

namespace streamflow {

inline constexpr int kNumFlowClasses = 5;
inline constexpr int kChannels = 3;  // flow, speed, occupancy

// Predicted flow category in [0, kNumFlowClasses).
class ActionClass {
 public:
  constexpr ActionClass() = default;
  // Throws std::out_of_range.
  explicit ActionClass(int value);

  int value() const { return value_; }

  friend auto operator<=>(ActionClass, ActionClass) = default;

 private:
  int value_ = 0;
};

// Maps flows to classes with four ascending edges. Class k covers
// [edge_{k-1}, edge_k) with open outer bins. Each class keeps a
// representative flow used to turn class predictions back into flows.
class Discretizer {
 public:
  using Edges = std::array<double, kNumFlowClasses - 1>;
  using Representatives = std::array<double, kNumFlowClasses>;

  // Throws std::invalid_argument unless edges are strictly increasing and each
  // representative lies within its bin.
  Discretizer(Edges edges, Representatives representatives);

  // Edges at the 20/40/60/80th percentiles (linear interpolation between
  // order statistics); representatives are per-bin medians. Throws
  // std::invalid_argument on fewer than five distinct flows or coinciding
  // edges.
  static Discretizer Fit(std::span<const double> training_flows);

  ActionClass Classify(double flow) const;
  double Representative(ActionClass c) const {
    return representatives_[static_cast<std::size_t>(c.value())];
  }

  const Edges& edges() const { return edges_; }
  const Representatives& representatives() const { return representatives_; }

 private:
  Edges edges_;
  Representatives representatives_;
};

// Linear-interpolated percentile (q in [0, 100]) of an unsorted sample.
double Percentile(std::vector<double> values, double q);

// Per-period normalization bounds fitted on the training split.
struct Calibration {
  double flow_max = 1.0;
  double speed_max = 1.0;

  // The given percentile of pooled training flows and speeds (floored at a
  // small positive value).
  static Calibration Fit(const PeriodDataset& dataset, double percentile);

  double NormalizeFlow(double flow) const;
  double NormalizeSpeed(double speed) const;
};

struct RewardWeights {
  double prediction = 1.0;  // lambda_p
  double speed = 0.1;       // lambda_c
  double occupancy = 0.1;   // lambda_o

  // Throws std::invalid_argument if any weight is negative or all are zero.
  void Validate() const;
  double Total() const { return prediction + speed + occupancy; }
};

struct EnvConfig {
  int window = 12;
  double occupancy_epsilon = 0.05;
  double calibration_percentile = 99.5;
  RewardWeights weights;

  // Throws ConfigError.
  void Validate() const;
};

// State layout, time-major within each block:
//   [0, 3W)      own window, step k at 3k + {flow, speed, occupancy}
//   [3W, 6W)     element-wise mean of the neighbours' windows
//   6W           degree / max degree of the snapshot
using StateVector = std::vector<double>;

constexpr std::size_t StateDimension(int window) {
  return 6 * static_cast<std::size_t>(window) + 1;
}

// State for predicting step t of node v from steps [t - window, t). Throws
// std::invalid_argument if t < window or t > series length, DataError if v or
// any neighbour lacks a series.
StateVector BuildState(const PeriodDataset& dataset, const NodeId& v, std::size_t t,
                       int window, const Calibration& calibration);

// Same as BuildState for every t in [first, last], sharing the per-node work.
std::vector<StateVector> BuildStates(const PeriodDataset& dataset, const NodeId& v,
                                     std::size_t first, std::size_t last, int window,
                                     const Calibration& calibration);

// Shifts the state one step forward for autoregressive rollouts: the own
// window gains (next_flow_norm, last speed, last occupancy); the neighbour
// block repeats its most recent row; the degree is unchanged.
StateVector AdvanceState(std::span<const double> state, double next_flow_norm, int window);

// r = lp * (1 - |pred - actual| / 4) + lc * speed_norm
//     + lo * eps / max(occupancy, eps).
double ComputeReward(ActionClass predicted, ActionClass actual, double speed_norm,
                     double occupancy, const RewardWeights& weights,
                     double occupancy_epsilon = 0.05);

}  // namespace streamflow

#endif  // STREAMFLOW_ENV_H_
