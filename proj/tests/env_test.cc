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

#include "streamflow/env.h"

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "streamflow/errors.h"

namespace streamflow {
namespace {

using testing::MakeDataset;
using testing::WavyFlow;

std::vector<double> Iota(int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0.0);
  return v;
}

TEST(ActionClassTest, RangeChecked) {
  EXPECT_EQ(ActionClass(4).value(), 4);
  EXPECT_THROW(ActionClass(5), std::out_of_range);
  EXPECT_THROW(ActionClass(-1), std::out_of_range);
}

TEST(DiscretizerTest, UniformZeroToNinetyNine) {
  const Discretizer d = Discretizer::Fit(Iota(100));
  const Discretizer::Edges expected{19.8, 39.6, 59.4, 79.2};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(d.edges()[k], expected[k], 1e-9);
  EXPECT_EQ(d.Classify(50).value(), 2);
  EXPECT_EQ(d.Classify(0).value(), 0);
  // Per-bin medians of {0..19}, {20..39}, ..., {80..99}.
  for (int k = 0; k < 5; ++k) {
    EXPECT_DOUBLE_EQ(d.Representative(ActionClass(k)), 20.0 * k + 9.5);
  }
}

TEST(DiscretizerTest, MinimumTrainingFlowIsClassZero) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(10, 500);
  std::vector<double> flows(1000);
  for (double& f : flows) f = u(rng);
  const Discretizer d = Discretizer::Fit(flows);
  EXPECT_EQ(d.Classify(*std::min_element(flows.begin(), flows.end())).value(), 0);
  EXPECT_EQ(d.Classify(*std::max_element(flows.begin(), flows.end())).value(), 4);
}

TEST(DiscretizerTest, DegenerateInputsRejected) {
  EXPECT_THROW(Discretizer::Fit(std::vector<double>(50, 7.0)), std::invalid_argument);
  EXPECT_THROW(Discretizer::Fit(std::vector<double>{1, 2, 3, 4}), std::invalid_argument);
  // Five distinct values but a heavy atom makes percentile edges coincide.
  std::vector<double> atom(100, 5.0);
  atom.insert(atom.end(), {1, 2, 3, 4});
  EXPECT_THROW(Discretizer::Fit(atom), std::invalid_argument);
}

TEST(DiscretizerTest, ConstructorValidates) {
  EXPECT_THROW(Discretizer({1, 1, 2, 3}, {0, 1, 1.5, 2.5, 4}), std::invalid_argument);
  EXPECT_THROW(Discretizer({1, 2, 3, 4}, {0, 2.5, 2.5, 3.5, 5}), std::invalid_argument);
  EXPECT_NO_THROW(Discretizer({1, 2, 3, 4}, {0, 1.5, 2.5, 3.5, 5}));
}

TEST(DiscretizerTest, OuterBinsAreOpen) {
  const Discretizer d({10, 20, 30, 40}, {5, 15, 25, 35, 45});
  EXPECT_EQ(d.Classify(-1e9).value(), 0);
  EXPECT_EQ(d.Classify(9.999).value(), 0);
  EXPECT_EQ(d.Classify(10).value(), 1);
  EXPECT_EQ(d.Classify(40).value(), 4);
  EXPECT_EQ(d.Classify(1e12).value(), 4);
}

TEST(DiscretizerTest, ClassifyMatchesLinearScanAndIsMonotone) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 400);
  std::vector<double> train(500);
  for (double& f : train) f = u(rng);
  const Discretizer d = Discretizer::Fit(train);
  double prev_flow = -1;
  int prev_class = 0;
  std::vector<double> probes(10000);
  for (double& f : probes) f = u(rng) * 1.2 - 20;
  std::sort(probes.begin(), probes.end());
  for (double f : probes) {
    int scan = 0;
    while (scan < 4 && f >= d.edges()[static_cast<std::size_t>(scan)]) ++scan;
    const int c = d.Classify(f).value();
    ASSERT_EQ(c, scan) << f;
    ASSERT_GE(c, 0);
    ASSERT_LE(c, 4);
    if (f >= prev_flow) ASSERT_GE(c, prev_class);
    prev_flow = f;
    prev_class = c;
  }
}

TEST(DiscretizerTest, RepresentativesLieInTheirBins) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::gamma_distribution<double> g(2.0, 30.0);
    std::vector<double> flows(200 + trial * 10);
    for (double& f : flows) f = std::round(g(rng));
    const Discretizer d = Discretizer::Fit(flows);
    for (int k = 0; k < 5; ++k) {
      EXPECT_EQ(d.Classify(d.Representative(ActionClass(k))).value(), k);
    }
  }
}

TEST(PercentileTest, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(Percentile({4, 1, 3, 2}, 50), 2.5);
  EXPECT_DOUBLE_EQ(Percentile({4, 1, 3, 2}, 0), 1);
  EXPECT_DOUBLE_EQ(Percentile({4, 1, 3, 2}, 100), 4);
  EXPECT_THROW(Percentile({}, 50), std::invalid_argument);
}

TEST(RewardTest, SpecExamples) {
  const RewardWeights only_prediction{1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(ComputeReward(ActionClass(2), ActionClass(2), 0.3, 0.2, only_prediction), 1.0);
  EXPECT_DOUBLE_EQ(ComputeReward(ActionClass(0), ActionClass(4), 0.3, 0.2, only_prediction), 0.0);
  EXPECT_DOUBLE_EQ(ComputeReward(ActionClass(1), ActionClass(2), 0.5, 0.05, RewardWeights{}), 0.9);
}

TEST(RewardTest, BoundedAndMaximalOnlyWhenExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  const RewardWeights w{1.0, 0.1, 0.1};
  for (int i = 0; i < 20000; ++i) {
    const ActionClass p(static_cast<int>(rng() % 5));
    const ActionClass a(static_cast<int>(rng() % 5));
    const double speed = u(rng);
    const double occ = u(rng);
    const double r = ComputeReward(p, a, speed, occ, w);
    ASSERT_GE(r, 0.0);
    ASSERT_LE(r, w.Total() + 1e-12);
    const double exact = ComputeReward(a, a, speed, occ, w);
    if (p != a) ASSERT_LT(r, exact);
  }
}

TEST(RewardWeightsTest, Validation) {
  EXPECT_THROW((RewardWeights{-1, 0, 0}.Validate()), std::invalid_argument);
  EXPECT_THROW((RewardWeights{0, 0, 0}.Validate()), std::invalid_argument);
  EXPECT_NO_THROW((RewardWeights{0, 1, 0}.Validate()));
}

class StateTest : public ::testing::Test {
 protected:
  // hub has three neighbours, leaf one, iso none.
  StateTest()
      : data_(MakeDataset(2011, {"hub", "a", "b", "c", "leaf", "iso"},
                          {Edge("hub", "a"), Edge("hub", "b"), Edge("hub", "c"), Edge("leaf", "a")},
                          200, WavyFlow)) {
    cal_ = Calibration::Fit(data_, 99.5);
  }

  std::vector<double> OwnWindow(const NodeId& v, std::size_t t, int w) const {
    const SensorSeries& s = data_.Series(v);
    std::vector<double> out;
    for (std::size_t i = t - static_cast<std::size_t>(w); i < t; ++i) {
      out.push_back(cal_.NormalizeFlow(s.flow[i]));
      out.push_back(cal_.NormalizeSpeed(s.speed[i]));
      out.push_back(s.occupancy[i]);
    }
    return out;
  }

  PeriodDataset data_;
  Calibration cal_;
};

TEST_F(StateTest, DimensionIsSixWPlusOne) {
  for (int w : {1, 4, 12, 24}) {
    const StateVector s = BuildState(data_, "hub", 30, w, cal_);
    EXPECT_EQ(s.size(), static_cast<std::size_t>(6 * w + 1));
    EXPECT_EQ(StateDimension(w), static_cast<std::size_t>(6 * w + 1));
  }
}

TEST_F(StateTest, OwnWindowIsTimeMajor) {
  const StateVector s = BuildState(data_, "hub", 50, 12, cal_);
  const std::vector<double> own = OwnWindow("hub", 50, 12);
  EXPECT_EQ(std::vector<double>(s.begin(), s.begin() + 36), own);
}

TEST_F(StateTest, IsolatedNodeHasZeroNeighbourBlock) {
  const StateVector s = BuildState(data_, "iso", 40, 12, cal_);
  for (std::size_t i = 36; i < 72; ++i) EXPECT_EQ(s[i], 0.0);
  EXPECT_EQ(s.back(), 0.0);
}

TEST_F(StateTest, SingleNeighbourBlockIsThatNeighboursWindow) {
  const StateVector s = BuildState(data_, "leaf", 40, 12, cal_);
  EXPECT_EQ(std::vector<double>(s.begin() + 36, s.begin() + 72), OwnWindow("a", 40, 12));
  EXPECT_DOUBLE_EQ(s.back(), 1.0 / 3.0);
}

TEST_F(StateTest, ThreeNeighbourBlockIsHandAverage) {
  const StateVector s = BuildState(data_, "hub", 77, 12, cal_);
  const auto a = OwnWindow("a", 77, 12);
  const auto b = OwnWindow("b", 77, 12);
  const auto c = OwnWindow("c", 77, 12);
  for (std::size_t i = 0; i < 36; ++i) {
    EXPECT_NEAR(s[36 + i], (a[i] + b[i] + c[i]) / 3.0, 1e-15);
  }
  EXPECT_DOUBLE_EQ(s.back(), 1.0);
}

TEST_F(StateTest, EntriesNormalizedAndFinite) {
  for (const auto& [id, series] : data_.series) {
    for (std::size_t t = 12; t <= 200; t += 7) {
      for (double x : BuildState(data_, id, t, 12, cal_)) {
        ASSERT_TRUE(std::isfinite(x));
        ASSERT_GE(x, 0.0);
        ASSERT_LE(x, 1.0);
      }
    }
  }
}

TEST_F(StateTest, BatchMatchesSingle) {
  const auto batch = BuildStates(data_, "hub", 12, 60, 12, cal_);
  ASSERT_EQ(batch.size(), 49u);
  for (std::size_t t = 12; t <= 60; ++t) {
    EXPECT_EQ(batch[t - 12], BuildState(data_, "hub", t, 12, cal_));
  }
}

TEST_F(StateTest, PreconditionsEnforced) {
  EXPECT_THROW(BuildState(data_, "hub", 11, 12, cal_), std::invalid_argument);
  EXPECT_THROW(BuildState(data_, "hub", 201, 12, cal_), std::invalid_argument);
  EXPECT_THROW(BuildState(data_, "nobody", 20, 12, cal_), DataError);
  PeriodDataset missing = data_;
  missing.series.erase("a");
  EXPECT_THROW(BuildState(missing, "hub", 20, 12, cal_), DataError);
}

TEST_F(StateTest, NeighbourRelabelingDoesNotChangeState) {
  // Rename the neighbours so that their iteration order reverses.
  PeriodDataset renamed = data_;
  renamed.snapshot = GraphSnapshot(
      2011, {"hub", "z", "y", "x", "leaf", "iso"},
      {Edge("hub", "z"), Edge("hub", "y"), Edge("hub", "x"), Edge("leaf", "z")});
  renamed.series.clear();
  const std::map<NodeId, NodeId> rename{{"a", "z"}, {"b", "y"}, {"c", "x"}};
  for (const auto& [id, s] : data_.series) {
    SensorSeries copy = s;
    copy.sensor_id = rename.count(id) ? rename.at(id) : id;
    renamed.series.emplace(copy.sensor_id, copy);
  }
  const StateVector s0 = BuildState(data_, "hub", 90, 12, cal_);
  const StateVector s1 = BuildState(renamed, "hub", 90, 12, cal_);
  ASSERT_EQ(s0.size(), s1.size());
  for (std::size_t i = 0; i < s0.size(); ++i) EXPECT_NEAR(s0[i], s1[i], 1e-15);
}

TEST_F(StateTest, AdvanceStateShiftsOwnWindow) {
  const int w = 12;
  const StateVector s = BuildState(data_, "hub", 60, w, cal_);
  const StateVector next = AdvanceState(s, 0.42, w);
  const StateVector truth = BuildState(data_, "hub", 61, w, cal_);
  // Own window: first W-1 rows equal the true next state's first W-1 rows.
  for (std::size_t i = 0; i < 33; ++i) EXPECT_EQ(next[i], truth[i]);
  EXPECT_EQ(next[33], 0.42);
  EXPECT_EQ(next[34], s[34]);
  EXPECT_EQ(next[35], s[35]);
  // Neighbour block: shifted with its last row repeated.
  for (std::size_t i = 36; i < 69; ++i) EXPECT_EQ(next[i], s[i + 3]);
  for (std::size_t i = 69; i < 72; ++i) EXPECT_EQ(next[i], s[i]);
  EXPECT_EQ(next.back(), s.back());
  EXPECT_THROW(AdvanceState(std::vector<double>(10), 0.1, w), std::invalid_argument);
}

TEST(CalibrationTest, PercentileOfTrainingSplitAndClamping) {
  PeriodDataset d = MakeDataset(2011, {"a"}, {}, 100,
                                [](const NodeId&, std::size_t t) { return static_cast<double>(t); });
  const Calibration cal = Calibration::Fit(d, 100.0);
  EXPECT_DOUBLE_EQ(cal.flow_max, 59.0);  // training split is [0, 60)
  EXPECT_DOUBLE_EQ(cal.NormalizeFlow(118.0), 1.0);
  EXPECT_DOUBLE_EQ(cal.NormalizeFlow(29.5), 0.5);
  EXPECT_DOUBLE_EQ(cal.NormalizeFlow(-3.0), 0.0);
}

TEST(EnvConfigTest, Validation) {
  EnvConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.window = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = EnvConfig{};
  c.occupancy_epsilon = 0.0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = EnvConfig{};
  c.weights = {0, 0, 0};
  EXPECT_THROW(c.Validate(), ConfigError);
}

}  // namespace
}  // namespace streamflow
