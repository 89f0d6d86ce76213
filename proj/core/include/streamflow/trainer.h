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

#ifndef STREAMFLOW_TRAINER_H_
#define STREAMFLOW_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "streamflow/drift.h"
#include "streamflow/env.h"
#include "streamflow/ingest.h"
#include "streamflow/metrics.h"
#include "streamflow/qnet.h"
#include "streamflow/replay.h"

namespace streamflow {

// Linear decay from start to end over the first decay_steps generated steps
// of a period, constant afterwards.
struct ExplorationSchedule {
  double start = 1.0;
  double end = 0.05;
  std::size_t decay_steps = 10000;

  double At(std::size_t step) const;
};

enum class Regime {
  // Drift candidates only, consolidation replay, network carried over.
  kContinual,
  // Fresh network each period trained on every node of every period so far.
  kRetrain,
};

std::string RegimeName(Regime regime);
Regime ParseRegime(const std::string& name);

struct TrainerConfig {
  double gamma = 0.5;
  double tabular_step_size = 0.5;
  std::size_t batch_size = 128;
  int epochs = 5;
  ExplorationSchedule exploration;
  std::size_t target_sync_interval = 500;
  bool use_target_network = true;
  double consolidation_mix = 0.25;
  std::vector<int> horizons{3, 12};
  Regime regime = Regime::kContinual;
  // Spacing between evaluation start times.
  std::size_t eval_stride = 1;

  // Throws ConfigError.
  void Validate() const;
};

struct AgentConfig {
  EnvConfig env;
  std::size_t hidden = 64;
  bool dueling = true;
  OptimizerConfig optimizer;
  ReplayConfig replay;
  DriftConfig drift;
  TrainerConfig trainer;
  std::uint64_t seed = 42;
  int threads = 1;

  QNetworkConfig NetworkConfig() const;
  // Throws ConfigError.
  void Validate() const;
};

// A dataset with the discretizer and calibration fitted on its training split.
struct PeriodContext {
  std::shared_ptr<const PeriodDataset> data;
  Discretizer discretizer;
  Calibration calibration;
};

// Throws DataError if the training split cannot support five classes.
PeriodContext PreparePeriod(std::shared_ptr<const PeriodDataset> data, const EnvConfig& env);

// Ordered transitions of one (node, split) traversal. next_state of step k is
// the state of step k + 1; the last step is terminal.
struct EpisodeRollout {
  NodeId node;
  std::vector<Experience> steps;
};

// Walks node v over split, predicting step t from the window before it for
// t in [max(split.begin, window), split.end). step_offset positions the
// rollout in the period's exploration schedule. States and rewards use
// ctx's calibration and discretizer; the transitions are labelled with
// ctx.data->period.
EpisodeRollout GenerateRollout(const QNetwork& net, const PeriodContext& ctx, const NodeId& v,
                               IndexRange split, const ExplorationSchedule& schedule,
                               std::size_t step_offset, const EnvConfig& env,
                               double priority_floor, Rng& rng);

struct HorizonPrediction {
  std::vector<ActionClass> classes;
  std::vector<double> flows;  // class representatives
};

// Greedy autoregressive forecast of steps t .. t + horizon - 1. Each
// predicted representative flow is fed back into the window; speed,
// occupancy and the neighbour block persist their last observed values.
// Throws std::invalid_argument if t < window.
HorizonPrediction PredictHorizon(const QNetwork& net, const PeriodContext& ctx, const NodeId& v,
                                 std::size_t t, int horizon, int window);

// Batched form of PredictHorizon over several start times of one node.
std::vector<HorizonPrediction> PredictHorizons(const QNetwork& net, const PeriodContext& ctx,
                                               const NodeId& v, std::span<const std::size_t> starts,
                                               int horizon, int window);

struct HorizonReport {
  int horizon = 0;
  MetricSet all;
  // Surviving nodes that were not retrained this period.
  std::optional<MetricSet> old_nodes;
  // Repeat the last observed flow.
  MetricSet last_value;
};

struct SplitReport {
  std::vector<HorizonReport> horizons;

  const HorizonReport& At(int horizon) const;
};

// Evaluates every node with a series over split at each horizon.
SplitReport EvaluateSplit(const QNetwork& net, const PeriodContext& ctx, IndexRange split,
                          const std::vector<int>& horizons, int window,
                          const std::set<NodeId>& old_nodes, std::size_t stride, int threads);

struct PeriodTimings {
  double total_seconds = 0.0;
  double drift_seconds = 0.0;
  double rollout_seconds = 0.0;
  double training_seconds = 0.0;
  double per_epoch_seconds = 0.0;
  double evaluation_seconds = 0.0;
};

struct PeriodReport {
  int period = 0;
  Regime regime = Regime::kContinual;
  std::size_t node_count = 0;
  std::size_t new_nodes = 0;
  std::size_t surviving_nodes = 0;
  std::size_t removed_nodes = 0;
  std::size_t old_nodes = 0;
  std::vector<NodeId> candidates;
  std::size_t experiences = 0;
  std::size_t updates = 0;
  int epochs = 0;
  double final_epoch_loss = 0.0;
  std::size_t buffer_size = 0;
  std::size_t memory_size = 0;
  SplitReport validation;
  SplitReport test;
  std::optional<DriftReport> drift;
  PeriodTimings timings;
};

// Everything needed to resume training after a completed period.
struct TrainerState {
  int period = 0;
  std::uint64_t updates = 0;
  QNetwork online;
  QNetwork target;
  OptimizerState optimizer;
  ReplayBuffer buffer;
  ConsolidationMemory memory;
};

// Runs the period loop: drift-driven candidate selection, rollout
// generation, TD training from prioritized and consolidation replay, memory
// update and evaluation. Not thread-safe; internal work is spread over
// config.threads workers.
class ContinualTrainer {
 public:
  // Throws ConfigError.
  explicit ContinualTrainer(AgentConfig config);

  // prev may be null for the first period, in which case every node is a
  // candidate.
  PeriodReport RunPeriod(std::shared_ptr<const PeriodDataset> prev,
                         std::shared_ptr<const PeriodDataset> curr);

  // Earlier periods replayed by the retrain regime.
  void RememberHistory(std::shared_ptr<const PeriodDataset> dataset);

  TrainerState Snapshot() const;
  // Throws std::invalid_argument if the state's network shape differs.
  void Restore(TrainerState state);

  const AgentConfig& config() const { return config_; }
  const QNetwork& network() const { return online_; }
  const ConsolidationMemory& memory() const { return memory_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  std::uint64_t updates() const { return updates_; }

 private:
  void ResetNetworks(int period);

  AgentConfig config_;
  QNetwork online_;
  QNetwork target_;
  OptimizerState optimizer_;
  ReplayBuffer buffer_;
  ConsolidationMemory memory_;
  std::uint64_t updates_ = 0;
  int last_period_ = 0;
  std::vector<std::shared_ptr<const PeriodDataset>> history_;
};

}  // namespace streamflow

#endif  // STREAMFLOW_TRAINER_H_
