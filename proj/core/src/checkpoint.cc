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

#include "streamflow/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "streamflow/errors.h"

namespace streamflow {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoints assume little-endian");

constexpr char kMagic[8] = {'S', 'F', 'C', 'K', 'P', 'T', '\0', '\0'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void Pod(T value) {
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }
  void Doubles(std::span<const double> values) {
    Pod<std::uint64_t>(values.size());
    out_.write(reinterpret_cast<const char*>(values.data()),
               static_cast<std::streamsize>(values.size() * sizeof(double)));
  }
  void String(const std::string& s) {
    Pod<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T Pod() {
    T value{};
    Raw(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
  }
  void Doubles(std::span<double> into) {
    const auto n = Pod<std::uint64_t>();
    if (n != into.size()) {
      throw DataError("checkpoint: tensor of " + std::to_string(n) + " values, expected " +
                      std::to_string(into.size()));
    }
    Raw(reinterpret_cast<char*>(into.data()), into.size() * sizeof(double));
  }
  std::string String() {
    const auto n = Pod<std::uint32_t>();
    std::string s(n, '\0');
    Raw(s.data(), n);
    return s;
  }

 private:
  void Raw(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw DataError("checkpoint: truncated");
  }

  std::istream& in_;
};

void WriteNetConfig(Writer& w, const QNetworkConfig& c) {
  w.Pod<std::uint64_t>(c.input_dim);
  w.Pod<std::uint64_t>(c.hidden);
  w.Pod<std::uint64_t>(c.num_actions);
  w.Pod<std::uint8_t>(c.dueling ? 1 : 0);
}

QNetworkConfig ReadNetConfig(Reader& r) {
  QNetworkConfig c;
  c.input_dim = r.Pod<std::uint64_t>();
  c.hidden = r.Pod<std::uint64_t>();
  c.num_actions = r.Pod<std::uint64_t>();
  c.dueling = r.Pod<std::uint8_t>() != 0;
  try {
    c.Validate();
  } catch (const ConfigError& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  return c;
}

void WriteParams(Writer& w, const QParameters& p) {
  for (auto t : p.Tensors()) w.Doubles(t);
}

QParameters ReadParams(Reader& r, const QNetworkConfig& c) {
  QParameters p = QParameters::Zeros(c);
  for (auto t : p.Tensors()) r.Doubles(t);
  return p;
}

// Assigns table indices to distinct state vectors in first-seen order.
class StateTable {
 public:
  std::uint64_t Index(const std::shared_ptr<const StateVector>& s) {
    auto [it, inserted] = index_.try_emplace(s.get(), states_.size());
    if (inserted) states_.push_back(s.get());
    return it->second;
  }
  const std::vector<const StateVector*>& states() const { return states_; }

 private:
  std::unordered_map<const StateVector*, std::uint64_t> index_;
  std::vector<const StateVector*> states_;
};

void WriteExperience(Writer& w, const Experience& e, StateTable& table) {
  w.Pod<std::uint64_t>(table.Index(e.state));
  w.Pod<std::uint64_t>(table.Index(e.next_state));
  w.Pod<std::int32_t>(e.action);
  w.Pod<double>(e.reward);
  w.Pod<std::uint8_t>(e.terminal ? 1 : 0);
  w.String(e.node);
  w.Pod<std::int32_t>(e.period);
  w.Pod<std::uint64_t>(e.time);
  w.Pod<double>(e.priority);
}

Experience ReadExperience(Reader& r, const std::vector<std::shared_ptr<const StateVector>>& states) {
  auto state_at = [&](std::uint64_t i) {
    if (i >= states.size()) throw DataError("checkpoint: state index out of range");
    return states[i];
  };
  Experience e;
  e.state = state_at(r.Pod<std::uint64_t>());
  e.next_state = state_at(r.Pod<std::uint64_t>());
  e.action = r.Pod<std::int32_t>();
  e.reward = r.Pod<double>();
  e.terminal = r.Pod<std::uint8_t>() != 0;
  e.node = r.String();
  e.period = r.Pod<std::int32_t>();
  e.time = r.Pod<std::uint64_t>();
  e.priority = r.Pod<double>();
  return e;
}

}  // namespace

void WriteCheckpoint(const TrainerState& state, std::ostream& out) {
  // Experiences go to a side stream first so the state table can precede them.
  std::ostringstream body_stream;
  Writer body(body_stream);
  StateTable table;
  body.Pod<std::uint64_t>(state.buffer.capacity());
  body.Pod<std::uint64_t>(state.buffer.size());
  for (std::size_t i = 0; i < state.buffer.size(); ++i) {
    WriteExperience(body, state.buffer.at(i), table);
  }
  body.Pod<std::uint64_t>(state.memory.periods().size());
  for (const auto& [period, items] : state.memory.periods()) {
    body.Pod<std::int32_t>(period);
    body.Pod<std::uint64_t>(items.size());
    for (const auto& e : items) WriteExperience(body, e, table);
  }

  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.Pod<std::uint32_t>(kCheckpointVersion);
  w.Pod<std::int32_t>(state.period);
  w.Pod<std::uint64_t>(state.updates);
  WriteNetConfig(w, state.online.config());
  WriteParams(w, state.online.params());
  WriteParams(w, state.target.params());
  const OptimizerConfig& oc = state.optimizer.config;
  w.Pod<std::uint8_t>(oc.kind == OptimizerKind::kAdam ? 0 : 1);
  w.Pod<double>(oc.learning_rate);
  w.Pod<double>(oc.beta1);
  w.Pod<double>(oc.beta2);
  w.Pod<double>(oc.epsilon);
  w.Pod<std::uint64_t>(state.optimizer.step);
  WriteParams(w, state.optimizer.first_moment);
  WriteParams(w, state.optimizer.second_moment);
  w.Pod<std::uint64_t>(table.states().size());
  for (const StateVector* s : table.states()) w.Doubles(*s);
  const std::string bytes = body_stream.str();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("checkpoint: write failed");
}

TrainerState ReadCheckpoint(std::istream& in) {
  Reader r(in);
  char magic[sizeof(kMagic)];
  for (char& c : magic) c = r.Pod<char>();
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw DataError("checkpoint: bad magic");
  const auto version = r.Pod<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint: unsupported version " + std::to_string(version));
  }
  TrainerState state;
  state.period = r.Pod<std::int32_t>();
  state.updates = r.Pod<std::uint64_t>();
  const QNetworkConfig config = ReadNetConfig(r);
  state.online = QNetwork(config, ReadParams(r, config));
  state.target = QNetwork(config, ReadParams(r, config));
  OptimizerConfig oc;
  oc.kind = r.Pod<std::uint8_t>() == 0 ? OptimizerKind::kAdam : OptimizerKind::kSgd;
  oc.learning_rate = r.Pod<double>();
  oc.beta1 = r.Pod<double>();
  oc.beta2 = r.Pod<double>();
  oc.epsilon = r.Pod<double>();
  state.optimizer.config = oc;
  state.optimizer.step = r.Pod<std::uint64_t>();
  state.optimizer.first_moment = ReadParams(r, config);
  state.optimizer.second_moment = ReadParams(r, config);

  const auto state_count = r.Pod<std::uint64_t>();
  std::vector<std::shared_ptr<const StateVector>> states;
  states.reserve(state_count);
  for (std::uint64_t i = 0; i < state_count; ++i) {
    StateVector s(config.input_dim);
    r.Doubles(s);
    states.push_back(std::make_shared<const StateVector>(std::move(s)));
  }
  const auto capacity = r.Pod<std::uint64_t>();
  if (capacity == 0) throw DataError("checkpoint: zero buffer capacity");
  state.buffer = ReplayBuffer(capacity);
  const auto buffered = r.Pod<std::uint64_t>();
  if (buffered > capacity) throw DataError("checkpoint: buffer exceeds its capacity");
  for (std::uint64_t i = 0; i < buffered; ++i) state.buffer.Add(ReadExperience(r, states));
  const auto periods = r.Pod<std::uint64_t>();
  for (std::uint64_t p = 0; p < periods; ++p) {
    const auto period = r.Pod<std::int32_t>();
    const auto n = r.Pod<std::uint64_t>();
    std::vector<Experience> items;
    items.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) items.push_back(ReadExperience(r, states));
    state.memory.Retain(period, std::move(items));
  }
  return state;
}

void SaveCheckpoint(const TrainerState& state, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  WriteCheckpoint(state, out);
}

TrainerState LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  try {
    return ReadCheckpoint(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace streamflow
