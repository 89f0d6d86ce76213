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
#include <stdexcept>
#include <string>
#include <tuple>

#include "streamflow/errors.h"

namespace streamflow {

void ReplayConfig::Validate() const {
  if (capacity == 0) throw ConfigError("replay.capacity must be positive");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw ConfigError("replay.omega must be >= 0");
  if (!(priority_floor > 0.0)) throw ConfigError("replay.priority_floor must be positive");
  if (!(retain_fraction >= 0.0 && retain_fraction <= 1.0)) {
    throw ConfigError("replay.retain_fraction must be in [0, 1]");
  }
}

double AssignPriority(double reward, double floor) { return std::max(reward, floor); }

std::vector<double> SamplingProbabilities(std::span<const double> priorities, double omega) {
  if (priorities.empty()) throw std::invalid_argument("no priorities");
  std::vector<double> p(priorities.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::pow(priorities[i], omega);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

std::size_t CeilFraction(double fraction, std::size_t n) {
  const double x = fraction * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::Add(Experience e) {
  if (!(e.priority > 0.0) || !std::isfinite(e.priority)) {
    throw std::invalid_argument("experience priority must be positive and finite");
  }
  if (items_.size() < capacity_) {
    priority_sum_ += e.priority;
    items_.push_back(std::move(e));
    ++count_;
    return;
  }
  // Full: overwrite the oldest entry.
  priority_sum_ += e.priority - items_[head_].priority;
  items_[head_] = std::move(e);
  head_ = (head_ + 1) % capacity_;
}

void ReplayBuffer::Clear() {
  items_.clear();
  head_ = 0;
  count_ = 0;
  priority_sum_ = 0.0;
}

const Experience& ReplayBuffer::at(std::size_t i) const {
  if (i >= count_) throw std::out_of_range("replay index out of range");
  return items_[(head_ + i) % items_.size()];
}

double ReplayBuffer::RecomputePrioritySum() const {
  double total = 0.0;
  for (const Experience& e : items_) total += e.priority;
  return total;
}

PrioritySampler::PrioritySampler(const ReplayBuffer& buffer, double omega) : buffer_(&buffer) {
  if (buffer.empty()) throw std::invalid_argument("cannot sample from an empty replay buffer");
  if (!(omega >= 0.0)) throw std::invalid_argument("sampling exponent must be >= 0");
  cumulative_.resize(buffer.size());
  double total = 0.0;
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    total += omega == 1.0 ? buffer.at(i).priority : std::pow(buffer.at(i).priority, omega);
    cumulative_[i] = total;
  }
}

std::size_t PrioritySampler::DrawIndex(Rng& rng) const {
  const double u = UniformUnit(rng) * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

const Experience& PrioritySampler::Draw(Rng& rng) const { return buffer_->at(DrawIndex(rng)); }

double PrioritySampler::Probability(std::size_t i) const {
  const double lo = i == 0 ? 0.0 : cumulative_[i - 1];
  return (cumulative_[i] - lo) / cumulative_.back();
}

std::vector<const Experience*> Sample(const ReplayBuffer& buffer, std::size_t batch_size,
                                      double omega, Rng& rng) {
  if (batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  const PrioritySampler sampler(buffer, omega);
  std::vector<const Experience*> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) batch.push_back(&sampler.Draw(rng));
  return batch;
}

std::vector<Experience> RetainTopFraction(std::span<const Experience> experiences,
                                          double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("retain fraction must be in [0, 1]");
  }
  const std::size_t keep = CeilFraction(fraction, experiences.size());
  std::vector<const Experience*> order;
  order.reserve(experiences.size());
  for (const Experience& e : experiences) order.push_back(&e);
  const auto better = [](const Experience* a, const Experience* b) {
    if (a->priority != b->priority) return a->priority > b->priority;
    return std::tie(a->node, a->time, a->period) < std::tie(b->node, b->time, b->period);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    better);
  std::vector<Experience> kept;
  kept.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) kept.push_back(*order[i]);
  return kept;
}

void ConsolidationMemory::Retain(int period, std::vector<Experience> experiences) {
  auto& slot = by_period_[period];
  size_ -= slot.size();
  slot = std::move(experiences);
  size_ += slot.size();
}

const Experience& ConsolidationMemory::at(std::size_t i) const {
  for (const auto& [period, list] : by_period_) {
    if (i < list.size()) return list[i];
    i -= list.size();
  }
  throw std::out_of_range("consolidation memory index out of range");
}

std::size_t MixedBatch::memory_count() const {
  return static_cast<std::size_t>(std::count(sources.begin(), sources.end(), BatchSource::kMemory));
}

MixedBatch SampleMixed(const PrioritySampler& sampler, const ConsolidationMemory& memory,
                       std::size_t batch_size, double mix, Rng& rng) {
  if (batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  if (!(mix >= 0.0 && mix <= 1.0)) throw std::invalid_argument("mix must be in [0, 1]");
  const std::size_t from_memory =
      memory.empty() ? 0
                     : std::min<std::size_t>(batch_size, static_cast<std::size_t>(std::llround(
                                                             mix * static_cast<double>(batch_size))));
  MixedBatch batch;
  batch.items.reserve(batch_size);
  batch.sources.reserve(batch_size);
  for (std::size_t i = 0; i < from_memory; ++i) {
    batch.items.push_back(&memory.at(UniformIndex(rng, memory.size())));
    batch.sources.push_back(BatchSource::kMemory);
  }
  for (std::size_t i = from_memory; i < batch_size; ++i) {
    batch.items.push_back(&sampler.Draw(rng));
    batch.sources.push_back(BatchSource::kBuffer);
  }
  return batch;
}

MixedBatch SampleMixed(const ReplayBuffer& buffer, const ConsolidationMemory& memory,
                       std::size_t batch_size, double mix, double omega, Rng& rng) {
  return SampleMixed(PrioritySampler(buffer, omega), memory, batch_size, mix, rng);
}

}  // namespace streamflow
