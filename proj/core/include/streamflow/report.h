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

#ifndef STREAMFLOW_REPORT_H_
#define STREAMFLOW_REPORT_H_

#include <string>

#include "streamflow/trainer.h"

namespace streamflow {

// Deterministic JSON for a period report. Wall-clock timings are left out so
// that reports of identical runs compare byte-for-byte.
std::string PeriodReportToJson(const PeriodReport& report);
// Throws DataError on malformed input. Timings are left at zero.
PeriodReport PeriodReportFromJson(const std::string& json);

// Metrics of a stored network on one period's validation and test splits.
struct EvaluationReport {
  int period = 0;
  int checkpoint_period = 0;
  std::size_t old_nodes = 0;
  SplitReport validation;
  SplitReport test;
};

std::string EvaluationReportToJson(const EvaluationReport& report);

std::string TimingsToJson(int period, const PeriodTimings& timings);
PeriodTimings TimingsFromJson(const std::string& json);

}  // namespace streamflow

#endif  // STREAMFLOW_REPORT_H_
