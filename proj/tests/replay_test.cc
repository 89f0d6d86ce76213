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

#include "streamflow/replay.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "streamflow/errors.h"

namespace streamflow {
namespace {

Experience Make(double priority, const NodeId& node = "n00", std::size_t time = 0, int period = 0) {
  Experience e;
  e.priority = priority;
  e.reward = priority;
  e.node = node;
  e.time = time;
  e.period = period;
  return e;
}

ReplayBuffer BufferOf(const std::vector<double>& priorities) {
  ReplayBuffer b(std::max<std::size_t>(priorities.size(), 1));
  for (std::size_t i = 0; i < priorities.size(); ++i) b.Add(Make(priorities[i], "n00", i));
  return b;
}

TEST(PriorityTest, IdentityAboveFloor) {
  EXPECT_EQ(AssignPriority(0.9), 0.9);
  EXPECT_EQ(AssignPriority(0.0), 1e-3);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double r = UniformUnit(rng) * 0.01;
    EXPECT_EQ(AssignPriority(r), std::max(r, 1e-3));
  }
}

TEST(SamplingTest, ProportionalProbabilities) {
  const std::vector<double> p = SamplingProbabilities(std::vector<double>{3.0, 1.0}, 1.0);
  EXPECT_DOUBLE_EQ(p[0], 0.75);
  EXPECT_DOUBLE_EQ(p[1], 0.25);
  const ReplayBuffer b = BufferOf({3.0, 1.0});
  const PrioritySampler sampler(b, 1.0);
  EXPECT_DOUBLE_EQ(sampler.Probability(0), 0.75);
}

TEST(SamplingTest, OmegaZeroIsUniform) {
  for (double x : SamplingProbabilities(std::vector<double>{5.0, 0.1, 2.0, 7.0}, 0.0)) {
    EXPECT_DOUBLE_EQ(x, 0.25);
  }
}

TEST(SamplingTest, ProbabilitiesSumToOneAndAreScaleInvariant) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + UniformIndex(rng, 200);
    std::vector<double> pr(n);
    for (double& x : pr) x = AssignPriority(UniformUnit(rng));
    const double omega = UniformUnit(rng) * 3.0;
    const double k = 0.01 + UniformUnit(rng) * 100.0;
    const std::vector<double> p = SamplingProbabilities(pr, omega);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    std::vector<double> scaled = pr;
    for (double& x : scaled) x *= k;
    const std::vector<double> q = SamplingProbabilities(scaled, omega);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
  }
}

TEST(SamplingTest, EmpiricalFrequencyMatches) {
  const ReplayBuffer b = BufferOf({3.0, 1.0});
  Rng rng(3);
  const auto batch = Sample(b, 100000, 1.0, rng);
  const auto zero = std::count_if(batch.begin(), batch.end(),
                                  [&](const Experience* e) { return e == &b.at(0); });
  EXPECT_NEAR(static_cast<double>(zero) / 100000.0, 0.75, 0.01);
}

TEST(SamplingTest, EmpiricalUniformWhenOmegaZero) {
  const ReplayBuffer b = BufferOf({9.0, 1.0, 0.001, 4.0});
  Rng rng(4);
  const PrioritySampler sampler(b, 0.0);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 100000; ++i) ++counts[sampler.DrawIndex(rng)];
  for (int c : counts) EXPECT_NEAR(c / 100000.0, 0.25, 0.01);
}

TEST(SamplingTest, DeterministicForSeed) {
  const ReplayBuffer b = BufferOf({1, 2, 3, 4, 5, 6});
  Rng r1(7);
  Rng r2(7);
  EXPECT_EQ(Sample(b, 50, 1.0, r1), Sample(b, 50, 1.0, r2));
}

TEST(SamplingTest, Errors) {
  const ReplayBuffer empty(4);
  Rng rng(1);
  EXPECT_THROW(Sample(empty, 1, 1.0, rng), std::invalid_argument);
  const ReplayBuffer b = BufferOf({1.0});
  EXPECT_THROW(Sample(b, 0, 1.0, rng), std::invalid_argument);
  EXPECT_THROW(Sample(b, 1, -1.0, rng), std::invalid_argument);
  ReplayBuffer c(2);
  EXPECT_THROW(c.Add(Make(0.0)), std::invalid_argument);
  EXPECT_THROW(c.Add(Make(NAN)), std::invalid_argument);
  EXPECT_THROW(ReplayBuffer(0), std::invalid_argument);
}

TEST(BufferTest, FifoEvictionKeepsPrioritySum) {
  ReplayBuffer b(100);
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    b.Add(Make(AssignPriority(UniformUnit(rng)), "n00", static_cast<std::size_t>(i)));
    if (i % 97 == 0) {
      EXPECT_NEAR(b.priority_sum(), b.RecomputePrioritySum(), 1e-9 * b.RecomputePrioritySum());
    }
  }
  EXPECT_EQ(b.size(), 100u);
  EXPECT_EQ(b.at(0).time, 9900u);
  EXPECT_EQ(b.at(99).time, 9999u);
  EXPECT_NEAR(b.priority_sum(), b.RecomputePrioritySum(), 1e-9 * b.RecomputePrioritySum());
  b.Clear();
  EXPECT_TRUE(b.empty());
  EXPECT_EQ(b.priority_sum(), 0.0);
  EXPECT_THROW(b.at(0), std::out_of_range);
}

TEST(RetainTest, SingleHighestOfTwenty) {
  std::vector<Experience> es;
  for (int i = 0; i < 20; ++i) es.push_back(Make(0.01 * (i * 7 % 20 + 1), "n00", static_cast<std::size_t>(i)));
  const auto kept = RetainTopFraction(es);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_DOUBLE_EQ(kept[0].priority, 0.2);
}

TEST(RetainTest, TiesBrokenByNodeThenTime) {
  std::vector<Experience> es;
  for (int i = 99; i >= 0; --i) {
    es.push_back(Make(0.5, i % 2 == 0 ? "b" : "a", static_cast<std::size_t>(i)));
  }
  const auto kept = RetainTopFraction(es);
  ASSERT_EQ(kept.size(), 5u);
  const std::vector<std::size_t> times{1, 3, 5, 7, 9};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(kept[i].node, "a");
    EXPECT_EQ(kept[i].time, times[i]);
  }
}

TEST(RetainTest, MatchesFullSortOracle) {
  Rng rng(6);
  std::vector<Experience> es;
  for (std::size_t i = 0; i < 1000; ++i) {
    const double p = AssignPriority(std::floor(UniformUnit(rng) * 50.0) / 50.0);
    es.push_back(Make(p, "n" + std::to_string(UniformIndex(rng, 30)), i));
  }
  std::vector<Experience> sorted = es;
  std::sort(sorted.begin(), sorted.end(), [](const Experience& a, const Experience& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.node != b.node) return a.node < b.node;
    return a.time < b.time;
  });
  const auto kept = RetainTopFraction(es);
  ASSERT_EQ(kept.size(), 50u);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    EXPECT_EQ(kept[i].priority, sorted[i].priority);
    EXPECT_EQ(kept[i].node, sorted[i].node);
    EXPECT_EQ(kept[i].time, sorted[i].time);
  }
}

TEST(RetainTest, SizeIsCeilOfFraction) {
  for (std::size_t n = 1; n <= 500; ++n) {
    std::vector<Experience> es(n, Make(1.0));
    const std::size_t expected = (5 * n + 99) / 100;
    EXPECT_EQ(RetainTopFraction(es).size(), expected) << n;
  }
  EXPECT_EQ(CeilFraction(0.1, 10), 1u);
  EXPECT_EQ(CeilFraction(0.1, 1), 1u);
  EXPECT_EQ(CeilFraction(0.0, 10), 0u);
  EXPECT_THROW(RetainTopFraction(std::vector<Experience>{}, 1.5), std::invalid_argument);
}

TEST(MemoryTest, RetainReplacesPeriodEntry) {
  ConsolidationMemory m;
  m.Retain(1, {Make(1.0, "a"), Make(2.0, "b")});
  m.Retain(2, {Make(3.0, "c")});
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m.at(2).node, "c");
  m.Retain(1, {Make(4.0, "d")});
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at(0).node, "d");
  EXPECT_THROW(m.at(2), std::out_of_range);
  m.Clear();
  EXPECT_TRUE(m.empty());
}

TEST(MixedBatchTest, ExactMemoryShare) {
  const ReplayBuffer b = BufferOf({1, 2, 3, 4});
  ConsolidationMemory m;
  m.Retain(0, {Make(1.0, "m0"), Make(1.0, "m1")});
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const MixedBatch batch = SampleMixed(b, m, 128, 0.25, 1.0, rng);
    ASSERT_EQ(batch.items.size(), 128u);
    EXPECT_EQ(batch.memory_count(), 32u);
    for (std::size_t k = 0; k < 128; ++k) {
      EXPECT_EQ(batch.items[k]->node[0] == 'm', batch.sources[k] == BatchSource::kMemory);
    }
  }
}

TEST(MixedBatchTest, Extremes) {
  const ReplayBuffer b = BufferOf({1, 2, 3, 4});
  ConsolidationMemory m;
  m.Retain(0, {Make(1.0, "m0")});
  Rng rng(9);
  EXPECT_EQ(SampleMixed(b, m, 64, 1.0, 1.0, rng).memory_count(), 64u);
  EXPECT_EQ(SampleMixed(b, ConsolidationMemory{}, 64, 1.0, 1.0, rng).memory_count(), 0u);
  // Zero mix draws the same sequence as plain sampling.
  Rng r1(10);
  Rng r2(10);
  const MixedBatch mixed = SampleMixed(b, m, 40, 0.0, 1.0, r1);
  EXPECT_EQ(mixed.items, Sample(b, 40, 1.0, r2));
  EXPECT_THROW(SampleMixed(b, m, 8, 1.5, 1.0, rng), std::invalid_argument);
  EXPECT_THROW(SampleMixed(ReplayBuffer(2), m, 8, 0.5, 1.0, rng), std::invalid_argument);
}

TEST(ReplayConfigTest, Validation) {
  ReplayConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.omega = -1;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = ReplayConfig{};
  c.capacity = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = ReplayConfig{};
  c.retain_fraction = 2;
  EXPECT_THROW(c.Validate(), ConfigError);
}

}  // namespace
}  // namespace streamflow
