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

#ifndef STREAMFLOW_FORMAT_H_
#define STREAMFLOW_FORMAT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace streamflow {

// Shortest decimal form that parses back to the identical double.
std::string FormatDouble(double value);

// Whole-string parse; nullopt on trailing garbage, empty input or overflow.
std::optional<double> ParseDouble(std::string_view text);
std::optional<long long> ParseInt(std::string_view text);

// Splits one CSV line on commas. Fields are trimmed of surrounding blanks and
// a trailing carriage return; quoting is not supported.
std::vector<std::string_view> SplitCsvLine(std::string_view line);

std::string_view Trim(std::string_view text);

}  // namespace streamflow

#endif  // STREAMFLOW_FORMAT_H_
