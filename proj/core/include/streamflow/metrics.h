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

#ifndef STREAMFLOW_METRICS_H_
#define STREAMFLOW_METRICS_H_

#include <chrono>
#include <cstddef>
#include <span>

namespace streamflow {

struct MetricSet {
  double mae = 0.0;
  double rmse = 0.0;
  double mape = 0.0;  // percent, over non-zero actuals only
  double class_accuracy = 0.0;
  std::size_t count = 0;
  std::size_t mape_count = 0;
};

// Throws std::invalid_argument on empty or mismatched inputs, or when every
// actual flow is zero (MAPE undefined).
MetricSet ComputeMetrics(std::span<const double> predicted_flows,
                         std::span<const double> actual_flows,
                         std::span<const int> predicted_classes,
                         std::span<const int> actual_classes);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace streamflow

#endif  // STREAMFLOW_METRICS_H_
