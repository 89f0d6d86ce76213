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

#ifndef STREAMFLOW_TABULAR_H_
#define STREAMFLOW_TABULAR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace streamflow {

// y = r for terminal transitions, else r + gamma * max_a next_q[a]. Throws
// std::invalid_argument unless gamma is in [0, 1).
double TdTarget(double reward, std::span<const double> next_q, double gamma, bool terminal);

// Dense state x action table of Q-values.
class QTable {
 public:
  QTable(std::size_t num_states, std::size_t num_actions, double initial = 0.0);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  double at(std::size_t s, std::size_t a) const { return values_[s * num_actions_ + a]; }
  double& at(std::size_t s, std::size_t a) { return values_[s * num_actions_ + a]; }
  std::span<const double> Row(std::size_t s) const {
    return std::span<const double>(values_).subspan(s * num_actions_, num_actions_);
  }
  // Lowest index among the maximal entries of row s.
  std::size_t Greedy(std::size_t s) const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> values_;
};

// Q(s,a) += step_size * (r + gamma * max_a' Q(s',a') - Q(s,a)); the bootstrap
// term is dropped when terminal.
void TabularQUpdate(QTable& table, std::size_t s, std::size_t a, double reward,
                    std::size_t next_s, double step_size, double gamma, bool terminal = false);

}  // namespace streamflow

#endif  // STREAMFLOW_TABULAR_H_
