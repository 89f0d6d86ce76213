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

#ifndef STREAMFLOW_REPLAY_H_
#define STREAMFLOW_REPLAY_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "streamflow/env.h"
#include "streamflow/graph.h"
#include "streamflow/random.h"

namespace streamflow {

// (s_t, a_t, r_t, s_{t+1}) plus provenance. Consecutive transitions of one
// rollout share their state vectors.
struct Experience {
  std::shared_ptr<const StateVector> state;
  int action = 0;
  double reward = 0.0;
  std::shared_ptr<const StateVector> next_state;
  bool terminal = false;
  NodeId node;
  int period = 0;
  std::size_t time = 0;
  double priority = 0.0;
};

struct ReplayConfig {
  std::size_t capacity = 100000;
  double omega = 1.0;             // sampling exponent on priorities
  double priority_floor = 1e-3;
  double retain_fraction = 0.05;  // consolidation share per period
  bool reset_each_period = true;

  // Throws ConfigError.
  void Validate() const;
};

// Reward-based priority, floored so that zero-reward transitions can still be
// drawn.
double AssignPriority(double reward, double floor = 1e-3);

// P(i) = p_i^omega / sum_k p_k^omega.
std::vector<double> SamplingProbabilities(std::span<const double> priorities, double omega);

// ceil(fraction * n), robust to the representation error of fraction.
std::size_t CeilFraction(double fraction, std::size_t n);

// Bounded FIFO ring. Keeps a running priority sum that is updated on insert
// and eviction.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 100000);

  // Throws std::invalid_argument if the priority is not positive and finite.
  void Add(Experience e);
  void Clear();

  std::size_t size() const { return count_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return count_ == 0; }

  // Logical index, 0 = oldest.
  const Experience& at(std::size_t i) const;

  double priority_sum() const { return priority_sum_; }
  double RecomputePrioritySum() const;

 private:
  std::size_t capacity_;
  std::vector<Experience> items_;
  std::size_t head_ = 0;  // physical index of the oldest entry
  std::size_t count_ = 0;
  double priority_sum_ = 0.0;
};

// Immutable cumulative table over a buffer snapshot; draws in O(log n). The
// buffer must not be modified while the sampler is in use.
class PrioritySampler {
 public:
  // Throws std::invalid_argument on an empty buffer or negative omega.
  PrioritySampler(const ReplayBuffer& buffer, double omega);

  const Experience& Draw(Rng& rng) const;
  std::size_t DrawIndex(Rng& rng) const;
  // Exact P(i) implied by the table.
  double Probability(std::size_t i) const;

 private:
  const ReplayBuffer* buffer_;
  std::vector<double> cumulative_;
};

// batch_size draws with replacement under P(i).
std::vector<const Experience*> Sample(const ReplayBuffer& buffer, std::size_t batch_size,
                                      double omega, Rng& rng);

// Top ceil(fraction * n) experiences by priority; ties by (node, time,
// period) ascending.
std::vector<Experience> RetainTopFraction(std::span<const Experience> experiences,
                                          double fraction = 0.05);

// Per-period retained experiences replayed against forgetting.
class ConsolidationMemory {
 public:
  // Replaces any entry previously stored for the period.
  void Retain(int period, std::vector<Experience> experiences);
  void Clear() { by_period_.clear(); size_ = 0; }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const std::map<int, std::vector<Experience>>& periods() const { return by_period_; }

  // Flat index across periods in ascending period order.
  const Experience& at(std::size_t i) const;

 private:
  std::map<int, std::vector<Experience>> by_period_;
  std::size_t size_ = 0;
};

enum class BatchSource : std::uint8_t { kBuffer, kMemory };

struct MixedBatch {
  std::vector<const Experience*> items;
  std::vector<BatchSource> sources;

  std::size_t memory_count() const;
};

// round(mix * batch_size) uniform draws from memory (none if memory is empty),
// the rest from the prioritized buffer. Memory draws come first.
MixedBatch SampleMixed(const PrioritySampler& sampler, const ConsolidationMemory& memory,
                       std::size_t batch_size, double mix, Rng& rng);
MixedBatch SampleMixed(const ReplayBuffer& buffer, const ConsolidationMemory& memory,
                       std::size_t batch_size, double mix, double omega, Rng& rng);

}  // namespace streamflow

#endif  // STREAMFLOW_REPLAY_H_
