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

#ifndef STREAMFLOW_TOOLS_CONFIG_H_
#define STREAMFLOW_TOOLS_CONFIG_H_

#include <filesystem>
#include <string>

#include "streamflow/ingest.h"
#include "streamflow/trainer.h"

namespace streamflow::cli {

// Everything a command needs. agent.seed is the master seed.
struct RunConfig {
  GeneratorConfig generator;
  AgentConfig agent;
  std::filesystem::path data_dir = "data";
  std::filesystem::path out_dir = "out";

  // Throws ConfigError.
  void Validate() const;
};

// Sectioned key = value text ([run], [generator], [env], [reward], [qnet],
// [trainer], [replay], [drift]); ';' starts a comment. Missing keys keep
// their defaults. Unknown sections or keys, and unparsable values, throw
// ConfigError.
RunConfig ParseRunConfig(const std::string& text);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Every key with its effective value. ParseRunConfig(FormatRunConfig(c))
// reproduces c exactly.
std::string FormatRunConfig(const RunConfig& config);

}  // namespace streamflow::cli

#endif  // STREAMFLOW_TOOLS_CONFIG_H_
