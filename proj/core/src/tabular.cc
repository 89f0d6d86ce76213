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

#include "streamflow/tabular.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace streamflow {

double TdTarget(double reward, std::span<const double> next_q, double gamma, bool terminal) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must be in [0, 1)");
  if (terminal) return reward;
  if (next_q.empty()) throw std::invalid_argument("no next-state Q-values");
  return reward + gamma * *std::max_element(next_q.begin(), next_q.end());
}

QTable::QTable(std::size_t num_states, std::size_t num_actions, double initial)
    : num_states_(num_states), num_actions_(num_actions),
      values_(num_states * num_actions, initial) {
  if (num_states == 0 || num_actions == 0) throw std::invalid_argument("empty Q table");
}

std::size_t QTable::Greedy(std::size_t s) const {
  const auto row = Row(s);
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

void TabularQUpdate(QTable& table, std::size_t s, std::size_t a, double reward,
                    std::size_t next_s, double step_size, double gamma, bool terminal) {
  if (s >= table.num_states() || next_s >= table.num_states() || a >= table.num_actions()) {
    throw std::out_of_range("tabular update index out of range");
  }
  const double target = TdTarget(reward, table.Row(next_s), gamma, terminal);
  table.at(s, a) += step_size * (target - table.at(s, a));
}

}  // namespace streamflow
