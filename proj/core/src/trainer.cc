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

#include "streamflow/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "streamflow/errors.h"
#include "streamflow/graph.h"
#include "streamflow/parallel.h"
#include "streamflow/random.h"
#include "streamflow/tabular.h"

namespace streamflow {
namespace {

std::size_t FirstStep(IndexRange split, int window) {
  return std::max(split.begin, static_cast<std::size_t>(window));
}

std::size_t RolloutLength(IndexRange split, int window) {
  const std::size_t first = FirstStep(split, window);
  return split.end > first ? split.end - first : 0;
}

struct RolloutJob {
  const PeriodContext* ctx;
  NodeId node;
  std::size_t offset = 0;
};

// Per-horizon predictions of one node, flattened over start times.
struct NodeForecasts {
  std::vector<std::vector<double>> predicted;
  std::vector<std::vector<double>> actual;
  std::vector<std::vector<double>> last_value;
  std::vector<std::vector<int>> predicted_class;
  std::vector<std::vector<int>> actual_class;
  std::vector<std::vector<int>> last_value_class;

  explicit NodeForecasts(std::size_t horizons)
      : predicted(horizons), actual(horizons), last_value(horizons),
        predicted_class(horizons), actual_class(horizons), last_value_class(horizons) {}
};

void Append(NodeForecasts& into, const NodeForecasts& from) {
  for (std::size_t h = 0; h < into.predicted.size(); ++h) {
    auto cat = [h](auto& dst, const auto& src) {
      dst[h].insert(dst[h].end(), src[h].begin(), src[h].end());
    };
    cat(into.predicted, from.predicted);
    cat(into.actual, from.actual);
    cat(into.last_value, from.last_value);
    cat(into.predicted_class, from.predicted_class);
    cat(into.actual_class, from.actual_class);
    cat(into.last_value_class, from.last_value_class);
  }
}

}  // namespace

double ExplorationSchedule::At(std::size_t step) const {
  if (decay_steps == 0 || step >= decay_steps) return end;
  const double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
  return start + (end - start) * frac;
}

std::string RegimeName(Regime regime) {
  return regime == Regime::kContinual ? "continual" : "retrain";
}

Regime ParseRegime(const std::string& name) {
  if (name == "continual") return Regime::kContinual;
  if (name == "retrain") return Regime::kRetrain;
  throw ConfigError("unknown regime '" + name + "' (expected continual or retrain)");
}

void TrainerConfig::Validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("trainer.gamma must be in [0, 1)");
  if (!(tabular_step_size > 0.0 && tabular_step_size <= 1.0)) {
    throw ConfigError("trainer.tabular_step_size must be in (0, 1]");
  }
  if (batch_size == 0) throw ConfigError("trainer.batch_size must be positive");
  if (epochs < 0) throw ConfigError("trainer.epochs must be non-negative");
  for (double e : {exploration.start, exploration.end}) {
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("trainer epsilon bounds must be in [0, 1]");
  }
  if (use_target_network && target_sync_interval == 0) {
    throw ConfigError("trainer.target_sync_interval must be positive");
  }
  if (!(consolidation_mix >= 0.0 && consolidation_mix <= 1.0)) {
    throw ConfigError("trainer.consolidation_mix must be in [0, 1]");
  }
  if (horizons.empty()) throw ConfigError("at least one evaluation horizon is required");
  for (int h : horizons) {
    if (h < 1) throw ConfigError("horizons must be positive, got " + std::to_string(h));
  }
  if (eval_stride == 0) throw ConfigError("trainer.eval_stride must be positive");
}

QNetworkConfig AgentConfig::NetworkConfig() const {
  QNetworkConfig net;
  net.input_dim = StateDimension(env.window);
  net.hidden = hidden;
  net.num_actions = kNumFlowClasses;
  net.dueling = dueling;
  return net;
}

void AgentConfig::Validate() const {
  env.Validate();
  NetworkConfig().Validate();
  optimizer.Validate();
  replay.Validate();
  drift.Validate();
  trainer.Validate();
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

PeriodContext PreparePeriod(std::shared_ptr<const PeriodDataset> data, const EnvConfig& env) {
  if (!data) throw std::invalid_argument("PreparePeriod: null dataset");
  const IndexRange train = data->splits.train;
  std::vector<double> flows;
  for (const auto& [id, s] : data->series) {
    flows.insert(flows.end(), s.flow.begin() + static_cast<std::ptrdiff_t>(train.begin),
                 s.flow.begin() + static_cast<std::ptrdiff_t>(train.end));
  }
  try {
    Discretizer discretizer = Discretizer::Fit(flows);
    Calibration calibration = Calibration::Fit(*data, env.calibration_percentile);
    return PeriodContext{std::move(data), discretizer, calibration};
  } catch (const std::invalid_argument& e) {
    throw DataError("period " + std::to_string(data->period) + ": " + e.what());
  }
}

EpisodeRollout GenerateRollout(const QNetwork& net, const PeriodContext& ctx, const NodeId& v,
                               IndexRange split, const ExplorationSchedule& schedule,
                               std::size_t step_offset, const EnvConfig& env,
                               double priority_floor, Rng& rng) {
  EpisodeRollout rollout;
  rollout.node = v;
  const std::size_t n = RolloutLength(split, env.window);
  if (n == 0) return rollout;
  const PeriodDataset& data = *ctx.data;
  const SensorSeries& series = data.Series(v);
  const std::size_t first = FirstStep(split, env.window);

  std::vector<StateVector> states =
      BuildStates(data, v, first, split.end, env.window, ctx.calibration);
  const Eigen::MatrixXd q =
      net.ForwardBatch(StackStates(std::span<const StateVector>(states).first(n)));

  std::vector<std::shared_ptr<const StateVector>> shared;
  shared.reserve(states.size());
  for (auto& s : states) shared.push_back(std::make_shared<const StateVector>(std::move(s)));

  rollout.steps.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t t = first + k;
    const int action = EpsilonGreedy(q.col(static_cast<Eigen::Index>(k)),
                                     schedule.At(step_offset + k), rng);
    const ActionClass actual = ctx.discretizer.Classify(series.flow[t]);
    Experience e;
    e.state = shared[k];
    e.action = action;
    e.reward = ComputeReward(ActionClass(action), actual,
                             ctx.calibration.NormalizeSpeed(series.speed[t]),
                             series.occupancy[t], env.weights, env.occupancy_epsilon);
    e.next_state = shared[k + 1];
    e.terminal = k + 1 == n;
    e.node = v;
    e.period = data.period;
    e.time = t;
    e.priority = AssignPriority(e.reward, priority_floor);
    rollout.steps.push_back(std::move(e));
  }
  return rollout;
}

std::vector<HorizonPrediction> PredictHorizons(const QNetwork& net, const PeriodContext& ctx,
                                               const NodeId& v, std::span<const std::size_t> starts,
                                               int horizon, int window) {
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  std::vector<HorizonPrediction> out(starts.size());
  if (starts.empty()) return out;
  const auto [lo, hi] = std::minmax_element(starts.begin(), starts.end());
  if (*lo < static_cast<std::size_t>(window)) {
    throw std::invalid_argument("start " + std::to_string(*lo) + " precedes a full window of " +
                                std::to_string(window));
  }
  const std::vector<StateVector> states =
      BuildStates(*ctx.data, v, *lo, *hi, window, ctx.calibration);
  const auto dim = static_cast<Eigen::Index>(StateDimension(window));
  Eigen::MatrixXd batch(dim, static_cast<Eigen::Index>(starts.size()));
  for (std::size_t j = 0; j < starts.size(); ++j) {
    const StateVector& s = states[starts[j] - *lo];
    batch.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(s.data(), dim);
  }
  for (auto& p : out) {
    p.classes.reserve(static_cast<std::size_t>(horizon));
    p.flows.reserve(static_cast<std::size_t>(horizon));
  }
  for (int step = 0; step < horizon; ++step) {
    const Eigen::MatrixXd q = net.ForwardBatch(batch);
    for (std::size_t j = 0; j < starts.size(); ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      const ActionClass c(GreedyAction(q.col(col)));
      const double flow = ctx.discretizer.Representative(c);
      out[j].classes.push_back(c);
      out[j].flows.push_back(flow);
      if (step + 1 < horizon) {
        const StateVector next = AdvanceState(
            std::span<const double>(batch.col(col).data(), static_cast<std::size_t>(dim)),
            ctx.calibration.NormalizeFlow(flow), window);
        batch.col(col) = Eigen::Map<const Eigen::VectorXd>(next.data(), dim);
      }
    }
  }
  return out;
}

HorizonPrediction PredictHorizon(const QNetwork& net, const PeriodContext& ctx, const NodeId& v,
                                 std::size_t t, int horizon, int window) {
  const std::size_t starts[] = {t};
  return std::move(PredictHorizons(net, ctx, v, starts, horizon, window).front());
}

const HorizonReport& SplitReport::At(int horizon) const {
  for (const auto& h : horizons) {
    if (h.horizon == horizon) return h;
  }
  throw std::out_of_range("no report for horizon " + std::to_string(horizon));
}

SplitReport EvaluateSplit(const QNetwork& net, const PeriodContext& ctx, IndexRange split,
                          const std::vector<int>& horizons, int window,
                          const std::set<NodeId>& old_nodes, std::size_t stride, int threads) {
  if (horizons.empty()) throw std::invalid_argument("no horizons to evaluate");
  if (stride == 0) throw std::invalid_argument("evaluation stride must be positive");
  const int max_h = *std::max_element(horizons.begin(), horizons.end());
  const PeriodDataset& data = *ctx.data;
  std::vector<NodeId> nodes;
  for (const auto& [id, s] : data.series) nodes.push_back(id);

  std::vector<std::size_t> starts;
  const std::size_t first = FirstStep(split, window);
  for (std::size_t t = first; t + static_cast<std::size_t>(max_h) <= split.end; t += stride) {
    starts.push_back(t);
  }
  if (starts.empty()) {
    throw DataError("period " + std::to_string(data.period) + ": split [" +
                    std::to_string(split.begin) + ", " + std::to_string(split.end) +
                    ") too short for horizon " + std::to_string(max_h));
  }

  std::vector<NodeForecasts> per_node(nodes.size(), NodeForecasts(horizons.size()));
  ParallelFor(nodes.size(), threads, [&](std::size_t i) {
    const SensorSeries& s = data.Series(nodes[i]);
    const auto preds = PredictHorizons(net, ctx, nodes[i], starts, max_h, window);
    NodeForecasts& f = per_node[i];
    for (std::size_t j = 0; j < starts.size(); ++j) {
      const std::size_t t = starts[j];
      const double last = s.flow[t - 1];
      const int last_class = ctx.discretizer.Classify(last).value();
      for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
        const auto k = static_cast<std::size_t>(horizons[hi] - 1);
        const double actual = s.flow[t + k];
        f.predicted[hi].push_back(preds[j].flows[k]);
        f.predicted_class[hi].push_back(preds[j].classes[k].value());
        f.actual[hi].push_back(actual);
        f.actual_class[hi].push_back(ctx.discretizer.Classify(actual).value());
        f.last_value[hi].push_back(last);
        f.last_value_class[hi].push_back(last_class);
      }
    }
  });

  NodeForecasts all(horizons.size());
  NodeForecasts old(horizons.size());
  bool have_old = false;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Append(all, per_node[i]);
    if (old_nodes.count(nodes[i])) {
      Append(old, per_node[i]);
      have_old = true;
    }
  }

  SplitReport report;
  for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
    HorizonReport h;
    h.horizon = horizons[hi];
    h.all = ComputeMetrics(all.predicted[hi], all.actual[hi], all.predicted_class[hi],
                           all.actual_class[hi]);
    h.last_value = ComputeMetrics(all.last_value[hi], all.actual[hi],
                                  all.last_value_class[hi], all.actual_class[hi]);
    if (have_old) {
      h.old_nodes = ComputeMetrics(old.predicted[hi], old.actual[hi], old.predicted_class[hi],
                                   old.actual_class[hi]);
    }
    report.horizons.push_back(std::move(h));
  }
  return report;
}

ContinualTrainer::ContinualTrainer(AgentConfig config)
    : config_(std::move(config)), buffer_(config_.replay.capacity) {
  config_.Validate();
  ResetNetworks(0);
}

void ContinualTrainer::ResetNetworks(int period) {
  online_ = QNetwork(config_.NetworkConfig(), DeriveSeed(config_.seed, "qnet-init", period));
  target_ = online_;
  optimizer_ = OptimizerState::For(online_, config_.optimizer);
}

void ContinualTrainer::RememberHistory(std::shared_ptr<const PeriodDataset> dataset) {
  if (!dataset) throw std::invalid_argument("RememberHistory: null dataset");
  history_.push_back(std::move(dataset));
}

TrainerState ContinualTrainer::Snapshot() const {
  return TrainerState{last_period_, updates_, online_, target_, optimizer_, buffer_, memory_};
}

void ContinualTrainer::Restore(TrainerState state) {
  const QNetworkConfig expected = config_.NetworkConfig();
  if (!(state.online.config() == expected) || !(state.target.config() == expected) ||
      !state.optimizer.first_moment.SameShape(state.online.params())) {
    throw std::invalid_argument("checkpoint network shape does not match the configuration");
  }
  last_period_ = state.period;
  updates_ = state.updates;
  online_ = std::move(state.online);
  target_ = std::move(state.target);
  optimizer_ = std::move(state.optimizer);
  optimizer_.config = config_.optimizer;
  buffer_ = std::move(state.buffer);
  memory_ = std::move(state.memory);
}

PeriodReport ContinualTrainer::RunPeriod(std::shared_ptr<const PeriodDataset> prev,
                                         std::shared_ptr<const PeriodDataset> curr) {
  if (!curr) throw std::invalid_argument("RunPeriod: null current dataset");
  const Stopwatch total;
  const TrainerConfig& tc = config_.trainer;
  const bool retrain = tc.regime == Regime::kRetrain;
  const int window = config_.env.window;

  PeriodReport report;
  report.period = curr->period;
  report.regime = tc.regime;
  if (retrain) ResetNetworks(curr->period);

  const PeriodContext ctx = PreparePeriod(curr, config_.env);
  std::vector<NodeId> nodes;
  for (const auto& [id, s] : curr->series) nodes.push_back(id);
  report.node_count = nodes.size();

  // Candidate selection.
  Stopwatch phase;
  std::vector<NodeId> candidates = nodes;
  std::set<NodeId> old_nodes;
  if (prev) {
    DriftReport drift = DetectDrift(*prev, *curr, config_.drift, config_.threads);
    const NodeDiff diff = DiffNodes(prev->snapshot, curr->snapshot);
    report.new_nodes = diff.added.size();
    report.surviving_nodes = diff.surviving.size();
    report.removed_nodes = diff.removed.size();
    const std::set<NodeId> flagged(drift.candidates.begin(), drift.candidates.end());
    for (const NodeId& v : diff.surviving) {
      if (!flagged.count(v) && curr->HasSeries(v)) old_nodes.insert(v);
    }
    if (!retrain) {
      candidates.clear();
      for (const NodeId& v : drift.candidates) {
        if (curr->HasSeries(v)) candidates.push_back(v);
      }
    }
    report.drift = std::move(drift);
  } else {
    report.new_nodes = nodes.size();
  }
  report.old_nodes = old_nodes.size();
  report.candidates = candidates;
  report.timings.drift_seconds = phase.Seconds();

  // Rollouts under the current policy.
  phase = Stopwatch();
  std::vector<PeriodContext> replayed;
  if (retrain) {
    replayed.reserve(history_.size());
    for (const auto& h : history_) {
      if (h->period < curr->period) replayed.push_back({h, ctx.discretizer, ctx.calibration});
    }
  }
  std::vector<RolloutJob> jobs;
  std::size_t offset = 0;
  auto add_jobs = [&](const PeriodContext& c, const std::vector<NodeId>& which) {
    const std::size_t len = RolloutLength(c.data->splits.train, window);
    for (const NodeId& v : which) {
      jobs.push_back({&c, v, offset});
      offset += len;
    }
  };
  for (const auto& c : replayed) {
    std::vector<NodeId> ids;
    for (const auto& [id, s] : c.data->series) ids.push_back(id);
    add_jobs(c, ids);
  }
  add_jobs(ctx, candidates);

  std::vector<EpisodeRollout> rollouts(jobs.size());
  ParallelFor(jobs.size(), config_.threads, [&](std::size_t i) {
    const RolloutJob& job = jobs[i];
    Rng rng = MakeRng(config_.seed,
                      "rollout:" + std::to_string(job.ctx->data->period) + ":" + job.node,
                      curr->period);
    rollouts[i] = GenerateRollout(online_, *job.ctx, job.node, job.ctx->data->splits.train,
                                  tc.exploration, job.offset, config_.env,
                                  config_.replay.priority_floor, rng);
  });
  std::vector<Experience> generated;
  generated.reserve(offset);
  for (auto& r : rollouts) {
    std::move(r.steps.begin(), r.steps.end(), std::back_inserter(generated));
  }
  rollouts.clear();
  report.experiences = generated.size();
  report.timings.rollout_seconds = phase.Seconds();

  if (retrain) {
    buffer_.Clear();
    memory_.Clear();
  } else if (config_.replay.reset_each_period) {
    buffer_.Clear();
  }
  for (const Experience& e : generated) buffer_.Add(e);

  // TD updates.
  phase = Stopwatch();
  const std::uint64_t updates_before = updates_;
  if (!buffer_.empty() && tc.epochs > 0) {
    const PrioritySampler sampler(buffer_, config_.replay.omega);
    const std::size_t per_epoch = (generated.size() + tc.batch_size - 1) / tc.batch_size;
    Rng rng = MakeRng(config_.seed, "train", curr->period);
    const auto dim = static_cast<Eigen::Index>(config_.NetworkConfig().input_dim);
    const auto batch_cols = static_cast<Eigen::Index>(tc.batch_size);
    Eigen::MatrixXd states(dim, batch_cols);
    Eigen::MatrixXd next_states(dim, batch_cols);
    std::vector<int> actions(tc.batch_size);
    std::vector<double> targets(tc.batch_size);
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
      double loss_sum = 0.0;
      for (std::size_t u = 0; u < per_epoch; ++u) {
        const MixedBatch batch =
            SampleMixed(sampler, memory_, tc.batch_size, tc.consolidation_mix, rng);
        for (std::size_t j = 0; j < batch.items.size(); ++j) {
          const Experience& e = *batch.items[j];
          const auto col = static_cast<Eigen::Index>(j);
          states.col(col) = Eigen::Map<const Eigen::VectorXd>(e.state->data(), dim);
          next_states.col(col) = Eigen::Map<const Eigen::VectorXd>(e.next_state->data(), dim);
          actions[j] = e.action;
        }
        const QNetwork& bootstrap = tc.use_target_network ? target_ : online_;
        const Eigen::MatrixXd next_q = bootstrap.ForwardBatch(next_states);
        for (std::size_t j = 0; j < batch.items.size(); ++j) {
          const Experience& e = *batch.items[j];
          const auto col = next_q.col(static_cast<Eigen::Index>(j));
          targets[j] = TdTarget(e.reward, std::span<const double>(col.data(), col.size()),
                                tc.gamma, e.terminal);
        }
        const LossAndGradients lg = ComputeLossAndGradients(online_, states, actions, targets);
        ApplyUpdate(online_, lg.gradients, optimizer_);
        ++updates_;
        if (tc.use_target_network && updates_ % tc.target_sync_interval == 0) target_ = online_;
        loss_sum += lg.loss;
      }
      report.final_epoch_loss = per_epoch ? loss_sum / static_cast<double>(per_epoch) : 0.0;
    }
    report.epochs = tc.epochs;
  }
  report.updates = static_cast<std::size_t>(updates_ - updates_before);
  report.timings.training_seconds = phase.Seconds();
  report.timings.per_epoch_seconds =
      report.epochs > 0 ? report.timings.training_seconds / report.epochs : 0.0;

  if (!retrain && !generated.empty()) {
    memory_.Retain(curr->period, RetainTopFraction(generated, config_.replay.retain_fraction));
  }
  generated.clear();

  phase = Stopwatch();
  report.validation = EvaluateSplit(online_, ctx, curr->splits.val, tc.horizons, window, old_nodes,
                                    tc.eval_stride, config_.threads);
  report.test = EvaluateSplit(online_, ctx, curr->splits.test, tc.horizons, window, old_nodes,
                              tc.eval_stride, config_.threads);
  report.timings.evaluation_seconds = phase.Seconds();

  report.buffer_size = buffer_.size();
  report.memory_size = memory_.size();
  last_period_ = curr->period;
  if (retrain) history_.push_back(curr);
  report.timings.total_seconds = total.Seconds();
  return report;
}

}  // namespace streamflow
