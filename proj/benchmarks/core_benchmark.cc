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

#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "streamflow/drift.h"
#include "streamflow/ingest.h"
#include "streamflow/qnet.h"
#include "streamflow/replay.h"
#include "streamflow/trainer.h"

namespace streamflow {
namespace {

Eigen::MatrixXd RandomStates(std::size_t dim, std::size_t n, Rng& rng) {
  Eigen::MatrixXd s(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = UniformUnit(rng);
  return s;
}

void BM_Forward(benchmark::State& state) {
  const QNetworkConfig c = AgentConfig{}.NetworkConfig();
  const QNetwork net(c, 1);
  Rng rng(1);
  const Eigen::MatrixXd s = RandomStates(c.input_dim, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(net.ForwardBatch(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(128)->Arg(1024);

void BM_TrainingStep(benchmark::State& state) {
  const QNetworkConfig c = AgentConfig{}.NetworkConfig();
  QNetwork net(c, 2);
  OptimizerState opt = OptimizerState::For(net, OptimizerConfig{});
  Rng rng(2);
  const std::size_t batch = static_cast<std::size_t>(state.range(0));
  const Eigen::MatrixXd s = RandomStates(c.input_dim, batch, rng);
  std::vector<int> actions(batch);
  std::vector<double> targets(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    actions[i] = static_cast<int>(UniformIndex(rng, 5));
    targets[i] = UniformUnit(rng);
  }
  for (auto _ : state) {
    ApplyUpdate(net, ComputeLossAndGradients(net, s, actions, targets).gradients, opt);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainingStep)->Arg(32)->Arg(128);

ReplayBuffer FilledBuffer(std::size_t n) {
  ReplayBuffer b(n);
  Rng rng(3);
  for (std::size_t i = 0; i < n; ++i) {
    Experience e;
    e.priority = AssignPriority(UniformUnit(rng));
    b.Add(std::move(e));
  }
  return b;
}

void BM_SamplerBuild(benchmark::State& state) {
  const ReplayBuffer b = FilledBuffer(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(PrioritySampler(b, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplerBuild)->Arg(10000)->Arg(100000);

void BM_MixedBatch(benchmark::State& state) {
  const ReplayBuffer b = FilledBuffer(static_cast<std::size_t>(state.range(0)));
  const PrioritySampler sampler(b, 1.0);
  ConsolidationMemory memory;
  memory.Retain(0, RetainTopFraction(std::vector<Experience>(1000, b.at(0))));
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(SampleMixed(sampler, memory, 128, 0.25, rng));
  state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(BM_MixedBatch)->Arg(10000)->Arg(100000);

void BM_DetectDrift(benchmark::State& state) {
  GeneratorConfig g;
  g.periods = 2;
  g.initial_nodes = static_cast<int>(state.range(0));
  g.random_drift_fraction = 0.1;
  g.random_drift_magnitude = 40.0;
  const SyntheticStream s = GenerateSynthetic(g, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DetectDrift(s.periods[0], s.periods[1], DriftConfig{}));
  }
}
BENCHMARK(BM_DetectDrift)->Arg(50)->Arg(200);

void BM_Rollout(benchmark::State& state) {
  GeneratorConfig g;
  g.periods = 1;
  g.initial_nodes = 10;
  const SyntheticStream s = GenerateSynthetic(g, 6);
  const AgentConfig a;
  const PeriodContext ctx =
      PreparePeriod(std::make_shared<const PeriodDataset>(s.periods[0]), a.env);
  const QNetwork net(a.NetworkConfig(), 7);
  const NodeId v = *s.periods[0].snapshot.nodes().begin();
  Rng rng(8);
  std::size_t steps = 0;
  for (auto _ : state) {
    const EpisodeRollout r = GenerateRollout(net, ctx, v, s.periods[0].splits.train,
                                             a.trainer.exploration, 0, a.env, 1e-3, rng);
    steps += r.steps.size();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_Rollout);

}  // namespace
}  // namespace streamflow

BENCHMARK_MAIN();
