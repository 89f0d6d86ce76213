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

#ifndef STREAMFLOW_CHECKPOINT_H_
#define STREAMFLOW_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "streamflow/trainer.h"

namespace streamflow {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Little-endian binary dump of a trainer state. State vectors shared between
// experiences are written once and stay shared after loading.
void WriteCheckpoint(const TrainerState& state, std::ostream& out);
// Throws DataError on a bad magic, unsupported version or truncated stream.
TrainerState ReadCheckpoint(std::istream& in);

void SaveCheckpoint(const TrainerState& state, const std::filesystem::path& path);
TrainerState LoadCheckpoint(const std::filesystem::path& path);

}  // namespace streamflow

#endif  // STREAMFLOW_CHECKPOINT_H_
