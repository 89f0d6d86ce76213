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

#include <gtest/gtest.h>

#include "streamflow/errors.h"

namespace streamflow {
namespace {

MetricSet Metrics(double base) {
  MetricSet m;
  m.mae = base;
  m.rmse = base * 1.1;
  m.mape = base * 3.0;
  m.class_accuracy = 0.1 / 3.0;
  m.count = 40;
  m.mape_count = 39;
  return m;
}

PeriodReport Sample() {
  PeriodReport r;
  r.period = 2012;
  r.regime = Regime::kRetrain;
  r.node_count = 10;
  r.new_nodes = 2;
  r.surviving_nodes = 8;
  r.removed_nodes = 1;
  r.old_nodes = 7;
  r.candidates = {"a", "b", "c"};
  r.experiences = 1234;
  r.updates = 50;
  r.epochs = 5;
  r.final_epoch_loss = 0.123456789012345;
  r.buffer_size = 1234;
  r.memory_size = 62;
  for (int h : {3, 12}) {
    HorizonReport hr;
    hr.horizon = h;
    hr.all = Metrics(h * 1.5);
    if (h == 3) hr.old_nodes = Metrics(2.0);
    hr.last_value = Metrics(h * 2.5);
    r.validation.horizons.push_back(hr);
    hr.all.mae += 1.0;
    r.test.horizons.push_back(hr);
  }
  DriftReport d;
  d.period = 2012;
  d.scores = {{"a", 0.5}, {"z", 0.0}};
  d.new_nodes = {"b", "c"};
  d.top_drifted = {"a"};
  d.candidates = r.candidates;
  r.drift = d;
  r.timings.total_seconds = 9.0;
  return r;
}

TEST(ReportTest, RoundTripIsExact) {
  const PeriodReport r = Sample();
  const std::string json = PeriodReportToJson(r);
  const PeriodReport back = PeriodReportFromJson(json);
  EXPECT_EQ(PeriodReportToJson(back), json);
  EXPECT_EQ(back.final_epoch_loss, r.final_epoch_loss);
  EXPECT_EQ(back.test.At(12).all.mae, r.test.At(12).all.mae);
  EXPECT_EQ(back.test.At(3).old_nodes->mae, 2.0);
  EXPECT_FALSE(back.test.At(12).old_nodes.has_value());
  EXPECT_EQ(back.regime, Regime::kRetrain);
  ASSERT_TRUE(back.drift.has_value());
  EXPECT_EQ(back.drift->scores.size(), 2u);
  EXPECT_EQ(back.timings.total_seconds, 0.0);
}

TEST(ReportTest, TimingsAreKeptOut) {
  PeriodReport a = Sample();
  PeriodReport b = Sample();
  b.timings.total_seconds = 123.0;
  b.timings.per_epoch_seconds = 4.0;
  EXPECT_EQ(PeriodReportToJson(a), PeriodReportToJson(b));
  EXPECT_EQ(PeriodReportToJson(a).find("seconds"), std::string::npos);
}

TEST(ReportTest, TimingsRoundTrip) {
  PeriodTimings t;
  t.total_seconds = 1.25;
  t.drift_seconds = 0.1;
  t.rollout_seconds = 0.2;
  t.training_seconds = 0.7;
  t.per_epoch_seconds = 0.14;
  t.evaluation_seconds = 0.25;
  const PeriodTimings back = TimingsFromJson(TimingsToJson(3, t));
  EXPECT_EQ(back.total_seconds, t.total_seconds);
  EXPECT_EQ(back.per_epoch_seconds, t.per_epoch_seconds);
  EXPECT_EQ(back.evaluation_seconds, t.evaluation_seconds);
  EXPECT_THROW(TimingsFromJson("[]"), DataError);
}

TEST(ReportTest, MalformedInputIsDataError) {
  EXPECT_THROW(PeriodReportFromJson(""), DataError);
  EXPECT_THROW(PeriodReportFromJson("{\"period\": 1}"), DataError);
  std::string json = PeriodReportToJson(Sample());
  json.replace(json.find("\"continual\"") == std::string::npos ? json.find("\"retrain\"")
                                                                : json.find("\"continual\""),
               9, "\"nonsense");
  EXPECT_THROW(PeriodReportFromJson(json), std::exception);
}

TEST(ReportTest, EvaluationReportHasBothSplits) {
  EvaluationReport e;
  e.period = 5;
  e.checkpoint_period = 4;
  e.validation = Sample().validation;
  e.test = Sample().test;
  const std::string json = EvaluationReportToJson(e);
  EXPECT_NE(json.find("\"checkpoint_period\": 4"), std::string::npos);
  EXPECT_NE(json.find("\"validation\""), std::string::npos);
  EXPECT_NE(json.find("\"test\""), std::string::npos);
}

TEST(SplitReportTest, UnknownHorizonThrows) {
  EXPECT_THROW(Sample().test.At(6), std::out_of_range);
}

}  // namespace
}  // namespace streamflow
