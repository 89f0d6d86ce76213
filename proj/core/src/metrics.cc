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

#include "streamflow/metrics.h"

#include <cmath>
#include <stdexcept>

namespace streamflow {

MetricSet ComputeMetrics(std::span<const double> predicted_flows,
                         std::span<const double> actual_flows,
                         std::span<const int> predicted_classes,
                         std::span<const int> actual_classes) {
  const std::size_t n = actual_flows.size();
  if (n == 0) throw std::invalid_argument("metrics need at least one sample");
  if (predicted_flows.size() != n || predicted_classes.size() != n || actual_classes.size() != n) {
    throw std::invalid_argument("metric inputs have different lengths");
  }
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double pct_sum = 0.0;
  std::size_t pct_count = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double err = predicted_flows[i] - actual_flows[i];
    abs_sum += std::abs(err);
    sq_sum += err * err;
    if (actual_flows[i] != 0.0) {
      pct_sum += std::abs(err / actual_flows[i]);
      ++pct_count;
    }
    if (predicted_classes[i] == actual_classes[i]) ++hits;
  }
  if (pct_count == 0) throw std::invalid_argument("MAPE undefined: every actual flow is zero");
  MetricSet m;
  m.count = n;
  m.mape_count = pct_count;
  m.mae = abs_sum / static_cast<double>(n);
  m.rmse = std::sqrt(sq_sum / static_cast<double>(n));
  m.mape = 100.0 * pct_sum / static_cast<double>(pct_count);
  m.class_accuracy = static_cast<double>(hits) / static_cast<double>(n);
  return m;
}

}  // namespace streamflow
