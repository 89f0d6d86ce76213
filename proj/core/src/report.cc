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

#include "streamflow/report.h"

#include <utility>

#include "json.hpp"
#include "streamflow/errors.h"

namespace streamflow {
namespace {

using Json = nlohmann::ordered_json;

Json MetricsJson(const MetricSet& m) {
  Json j;
  j["mae"] = m.mae;
  j["rmse"] = m.rmse;
  j["mape"] = m.mape;
  j["class_accuracy"] = m.class_accuracy;
  j["count"] = m.count;
  j["mape_count"] = m.mape_count;
  return j;
}

MetricSet MetricsFrom(const Json& j) {
  MetricSet m;
  m.mae = j.at("mae").get<double>();
  m.rmse = j.at("rmse").get<double>();
  m.mape = j.at("mape").get<double>();
  m.class_accuracy = j.at("class_accuracy").get<double>();
  m.count = j.at("count").get<std::size_t>();
  m.mape_count = j.at("mape_count").get<std::size_t>();
  return m;
}

Json SplitJson(const SplitReport& split) {
  Json arr = Json::array();
  for (const auto& h : split.horizons) {
    Json j;
    j["horizon"] = h.horizon;
    j["all"] = MetricsJson(h.all);
    j["old_nodes"] = h.old_nodes ? MetricsJson(*h.old_nodes) : Json(nullptr);
    j["last_value"] = MetricsJson(h.last_value);
    arr.push_back(std::move(j));
  }
  return arr;
}

SplitReport SplitFrom(const Json& arr) {
  SplitReport split;
  for (const auto& j : arr) {
    HorizonReport h;
    h.horizon = j.at("horizon").get<int>();
    h.all = MetricsFrom(j.at("all"));
    if (!j.at("old_nodes").is_null()) h.old_nodes = MetricsFrom(j.at("old_nodes"));
    h.last_value = MetricsFrom(j.at("last_value"));
    split.horizons.push_back(std::move(h));
  }
  return split;
}

}  // namespace

std::string PeriodReportToJson(const PeriodReport& r) {
  Json j;
  j["period"] = r.period;
  j["regime"] = RegimeName(r.regime);
  j["nodes"] = {{"total", r.node_count},
                {"new", r.new_nodes},
                {"surviving", r.surviving_nodes},
                {"removed", r.removed_nodes},
                {"old", r.old_nodes}};
  j["candidates"] = r.candidates;
  j["training"] = {{"experiences", r.experiences},
                   {"updates", r.updates},
                   {"epochs", r.epochs},
                   {"final_epoch_loss", r.final_epoch_loss}};
  j["buffer_size"] = r.buffer_size;
  j["memory_size"] = r.memory_size;
  j["validation"] = SplitJson(r.validation);
  j["test"] = SplitJson(r.test);
  j["drift"] = r.drift ? Json::parse(DriftReportToJson(*r.drift)) : Json(nullptr);
  return j.dump(2) + "\n";
}

PeriodReport PeriodReportFromJson(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    PeriodReport r;
    r.period = j.at("period").get<int>();
    r.regime = ParseRegime(j.at("regime").get<std::string>());
    const Json& nodes = j.at("nodes");
    r.node_count = nodes.at("total").get<std::size_t>();
    r.new_nodes = nodes.at("new").get<std::size_t>();
    r.surviving_nodes = nodes.at("surviving").get<std::size_t>();
    r.removed_nodes = nodes.at("removed").get<std::size_t>();
    r.old_nodes = nodes.at("old").get<std::size_t>();
    r.candidates = j.at("candidates").get<std::vector<NodeId>>();
    const Json& training = j.at("training");
    r.experiences = training.at("experiences").get<std::size_t>();
    r.updates = training.at("updates").get<std::size_t>();
    r.epochs = training.at("epochs").get<int>();
    r.final_epoch_loss = training.at("final_epoch_loss").get<double>();
    r.buffer_size = j.at("buffer_size").get<std::size_t>();
    r.memory_size = j.at("memory_size").get<std::size_t>();
    r.validation = SplitFrom(j.at("validation"));
    r.test = SplitFrom(j.at("test"));
    if (!j.at("drift").is_null()) r.drift = DriftReportFromJson(j.at("drift").dump());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed period report: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed period report: ") + e.what());
  }
}

std::string EvaluationReportToJson(const EvaluationReport& r) {
  Json j;
  j["period"] = r.period;
  j["checkpoint_period"] = r.checkpoint_period;
  j["old_nodes"] = r.old_nodes;
  j["validation"] = SplitJson(r.validation);
  j["test"] = SplitJson(r.test);
  return j.dump(2) + "\n";
}

std::string TimingsToJson(int period, const PeriodTimings& t) {
  Json j;
  j["period"] = period;
  j["total_seconds"] = t.total_seconds;
  j["drift_seconds"] = t.drift_seconds;
  j["rollout_seconds"] = t.rollout_seconds;
  j["training_seconds"] = t.training_seconds;
  j["per_epoch_seconds"] = t.per_epoch_seconds;
  j["evaluation_seconds"] = t.evaluation_seconds;
  return j.dump(2) + "\n";
}

PeriodTimings TimingsFromJson(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    PeriodTimings t;
    t.total_seconds = j.at("total_seconds").get<double>();
    t.drift_seconds = j.at("drift_seconds").get<double>();
    t.rollout_seconds = j.at("rollout_seconds").get<double>();
    t.training_seconds = j.at("training_seconds").get<double>();
    t.per_epoch_seconds = j.at("per_epoch_seconds").get<double>();
    t.evaluation_seconds = j.at("evaluation_seconds").get<double>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed timings: ") + e.what());
  }
}

}  // namespace streamflow
