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

#ifndef STREAMFLOW_ERRORS_H_
#define STREAMFLOW_ERRORS_H_

#include <stdexcept>
#include <string>

namespace streamflow {

// Input data that is malformed or inconsistent: CSV rows, graph deltas,
// series gaps, corrupt checkpoints.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration values, unknown keys, unparsable config files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace streamflow

#endif  // STREAMFLOW_ERRORS_H_
