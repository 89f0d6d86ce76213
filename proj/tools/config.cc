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

#include "config.h"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "streamflow/errors.h"
#include "streamflow/format.h"

namespace streamflow::cli {
namespace {

namespace pt = boost::property_tree;

std::string Where(const std::string& section, const std::string& key) {
  return section + "." + key;
}

double ToDouble(const std::string& where, const std::string& text) {
  const auto v = ParseDouble(Trim(text));
  if (!v) throw ConfigError(where + ": expected a number, got '" + text + "'");
  return *v;
}

long long ToInt(const std::string& where, const std::string& text) {
  const auto v = ParseInt(Trim(text));
  if (!v) throw ConfigError(where + ": expected an integer, got '" + text + "'");
  return *v;
}

bool ToBool(const std::string& where, const std::string& text) {
  const std::string_view t = Trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(where + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  for (std::string_view field : SplitCsvLine(text)) {
    if (!field.empty()) out.emplace_back(field);
  }
  return out;
}

std::vector<int> ToIntList(const std::string& where, const std::string& text) {
  std::vector<int> out;
  for (const auto& item : SplitList(text)) out.push_back(static_cast<int>(ToInt(where, item)));
  return out;
}

// "node:period:magnitude" entries separated by commas.
std::vector<DriftSpec> ToDriftList(const std::string& where, const std::string& text) {
  std::vector<DriftSpec> out;
  for (const auto& item : SplitList(text)) {
    const auto first = item.find(':');
    const auto second = item.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
      throw ConfigError(where + ": expected node:period:magnitude, got '" + item + "'");
    }
    DriftSpec d;
    d.node = std::string(Trim(item.substr(0, first)));
    d.period = static_cast<int>(ToInt(where, item.substr(first + 1, second - first - 1)));
    d.magnitude = ToDouble(where, item.substr(second + 1));
    out.push_back(std::move(d));
  }
  return out;
}

template <typename T>
std::string JoinList(const std::vector<T>& items, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += f(items[i]);
  }
  return out;
}

std::string Bool(bool b) { return b ? "true" : "false"; }

// One (section, key) binding: how to read it into and print it from a
// RunConfig.
struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string& where, const std::string& value)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::vector<Field> Fields() {
  std::vector<Field> f;
  auto num = [&f](std::string section, std::string key, auto member) {
    f.push_back({section, key,
                 [member](RunConfig& c, const std::string& w, const std::string& v) {
                   member(c) = ToDouble(w, v);
                 },
                 [member](const RunConfig& c) {
                   return FormatDouble(member(c));
                 }});
  };
  auto integer = [&f](std::string section, std::string key, auto member) {
    f.push_back({section, key,
                 [member](RunConfig& c, const std::string& w, const std::string& v) {
                   using T = std::remove_reference_t<decltype(member(c))>;
                   const long long x = ToInt(w, v);
                   if constexpr (std::is_unsigned_v<T>) {
                     if (x < 0) throw ConfigError(w + ": must be non-negative");
                   }
                   member(c) = static_cast<T>(x);
                 },
                 [member](const RunConfig& c) {
                   return std::to_string(member(c));
                 }});
  };
  auto flag = [&f](std::string section, std::string key, auto member) {
    f.push_back({section, key,
                 [member](RunConfig& c, const std::string& w, const std::string& v) {
                   member(c) = ToBool(w, v);
                 },
                 [member](const RunConfig& c) { return Bool(member(c)); }});
  };

  f.push_back({"run", "seed",
               [](RunConfig& c, const std::string& w, const std::string& v) {
                 const long long x = ToInt(w, v);
                 if (x < 0) throw ConfigError(w + ": must be non-negative");
                 c.agent.seed = static_cast<std::uint64_t>(x);
               },
               [](const RunConfig& c) { return std::to_string(c.agent.seed); }});
  integer("run", "threads", [](auto& c) -> auto& { return c.agent.threads; });
  f.push_back({"run", "data_dir",
               [](RunConfig& c, const std::string&, const std::string& v) {
                 c.data_dir = std::string(Trim(v));
               },
               [](const RunConfig& c) { return c.data_dir.string(); }});
  f.push_back({"run", "out_dir",
               [](RunConfig& c, const std::string&, const std::string& v) {
                 c.out_dir = std::string(Trim(v));
               },
               [](const RunConfig& c) { return c.out_dir.string(); }});

  integer("generator", "periods", [](auto& c) -> auto& { return c.generator.periods; });
  integer("generator", "start_period", [](auto& c) -> auto& { return c.generator.start_period; });
  integer("generator", "initial_nodes", [](auto& c) -> auto& { return c.generator.initial_nodes; });
  integer("generator", "growth_per_period",
          [](auto& c) -> auto& { return c.generator.growth_per_period; });
  integer("generator", "steps_per_period",
          [](auto& c) -> auto& { return c.generator.steps_per_period; });
  num("generator", "profile_peak", [](auto& c) -> auto& { return c.generator.profile_peak; });
  num("generator", "profile_base", [](auto& c) -> auto& { return c.generator.profile_base; });
  num("generator", "noise_sigma", [](auto& c) -> auto& { return c.generator.noise_sigma; });
  integer("generator", "edges_per_new_node",
          [](auto& c) -> auto& { return c.generator.edges_per_new_node; });
  f.push_back({"generator", "drift",
               [](RunConfig& c, const std::string& w, const std::string& v) {
                 c.generator.drift = ToDriftList(w, v);
               },
               [](const RunConfig& c) {
                 return JoinList<DriftSpec>(c.generator.drift, [](const DriftSpec& d) {
                   return d.node + ":" + std::to_string(d.period) + ":" + FormatDouble(d.magnitude);
                 });
               }});
  num("generator", "random_drift_fraction",
      [](auto& c) -> auto& { return c.generator.random_drift_fraction; });
  num("generator", "random_drift_magnitude",
      [](auto& c) -> auto& { return c.generator.random_drift_magnitude; });

  integer("env", "window", [](auto& c) -> auto& { return c.agent.env.window; });
  num("env", "occ_epsilon", [](auto& c) -> auto& { return c.agent.env.occupancy_epsilon; });
  num("env", "calibration_percentile",
      [](auto& c) -> auto& { return c.agent.env.calibration_percentile; });

  num("reward", "lambda_p", [](auto& c) -> auto& { return c.agent.env.weights.prediction; });
  num("reward", "lambda_c", [](auto& c) -> auto& { return c.agent.env.weights.speed; });
  num("reward", "lambda_o", [](auto& c) -> auto& { return c.agent.env.weights.occupancy; });

  integer("qnet", "hidden", [](auto& c) -> auto& { return c.agent.hidden; });
  flag("qnet", "dueling", [](auto& c) -> auto& { return c.agent.dueling; });
  f.push_back({"qnet", "optimizer",
               [](RunConfig& c, const std::string& w, const std::string& v) {
                 const std::string_view t = Trim(v);
                 if (t == "adam") {
                   c.agent.optimizer.kind = OptimizerKind::kAdam;
                 } else if (t == "sgd") {
                   c.agent.optimizer.kind = OptimizerKind::kSgd;
                 } else {
                   throw ConfigError(w + ": expected adam or sgd, got '" + v + "'");
                 }
               },
               [](const RunConfig& c) {
                 return std::string(c.agent.optimizer.kind == OptimizerKind::kAdam ? "adam" : "sgd");
               }});
  num("qnet", "learning_rate", [](auto& c) -> auto& { return c.agent.optimizer.learning_rate; });
  num("qnet", "beta1", [](auto& c) -> auto& { return c.agent.optimizer.beta1; });
  num("qnet", "beta2", [](auto& c) -> auto& { return c.agent.optimizer.beta2; });
  num("qnet", "adam_epsilon", [](auto& c) -> auto& { return c.agent.optimizer.epsilon; });

  f.push_back({"trainer", "regime",
               [](RunConfig& c, const std::string&, const std::string& v) {
                 c.agent.trainer.regime = ParseRegime(std::string(Trim(v)));
               },
               [](const RunConfig& c) { return RegimeName(c.agent.trainer.regime); }});
  num("trainer", "gamma", [](auto& c) -> auto& { return c.agent.trainer.gamma; });
  num("trainer", "tabular_step_size",
      [](auto& c) -> auto& { return c.agent.trainer.tabular_step_size; });
  integer("trainer", "batch_size", [](auto& c) -> auto& { return c.agent.trainer.batch_size; });
  integer("trainer", "epochs", [](auto& c) -> auto& { return c.agent.trainer.epochs; });
  num("trainer", "epsilon_start",
      [](auto& c) -> auto& { return c.agent.trainer.exploration.start; });
  num("trainer", "epsilon_end", [](auto& c) -> auto& { return c.agent.trainer.exploration.end; });
  integer("trainer", "epsilon_decay_steps",
          [](auto& c) -> auto& { return c.agent.trainer.exploration.decay_steps; });
  integer("trainer", "sync_interval",
          [](auto& c) -> auto& { return c.agent.trainer.target_sync_interval; });
  flag("trainer", "target_network",
       [](auto& c) -> auto& { return c.agent.trainer.use_target_network; });
  num("trainer", "consolidation_mix",
      [](auto& c) -> auto& { return c.agent.trainer.consolidation_mix; });
  f.push_back({"trainer", "horizons",
               [](RunConfig& c, const std::string& w, const std::string& v) {
                 c.agent.trainer.horizons = ToIntList(w, v);
               },
               [](const RunConfig& c) {
                 return JoinList<int>(c.agent.trainer.horizons,
                                      [](const int& h) { return std::to_string(h); });
               }});
  integer("trainer", "eval_stride", [](auto& c) -> auto& { return c.agent.trainer.eval_stride; });

  integer("replay", "capacity", [](auto& c) -> auto& { return c.agent.replay.capacity; });
  num("replay", "omega", [](auto& c) -> auto& { return c.agent.replay.omega; });
  num("replay", "priority_floor", [](auto& c) -> auto& { return c.agent.replay.priority_floor; });
  num("replay", "retain_fraction", [](auto& c) -> auto& { return c.agent.replay.retain_fraction; });
  flag("replay", "reset_each_period",
       [](auto& c) -> auto& { return c.agent.replay.reset_each_period; });

  num("drift", "fraction", [](auto& c) -> auto& { return c.agent.drift.fraction; });
  integer("drift", "bins", [](auto& c) -> auto& { return c.agent.drift.bins; });
  num("drift", "smoothing", [](auto& c) -> auto& { return c.agent.drift.smoothing; });
  return f;
}

}  // namespace

void RunConfig::Validate() const {
  generator.Validate();
  agent.Validate();
}

RunConfig ParseRunConfig(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  const std::vector<Field> fields = Fields();
  std::map<std::string, std::map<std::string, const Field*>> index;
  for (const Field& f : fields) index[f.section][f.key] = &f;

  RunConfig config;
  for (const auto& [section, keys] : tree) {
    const auto s = index.find(section);
    if (s == index.end()) {
      if (keys.empty() && !keys.data().empty()) {
        throw ConfigError("config key '" + section + "' must be inside a section");
      }
      throw ConfigError("unknown config section [" + section + "]");
    }
    for (const auto& [key, value] : keys) {
      const auto k = s->second.find(key);
      if (k == s->second.end()) throw ConfigError("unknown config key " + Where(section, key));
      k->second->set(config, Where(section, key), value.data());
    }
  }
  config.Validate();
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return ParseRunConfig(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string FormatRunConfig(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const Field& f : Fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace streamflow::cli
