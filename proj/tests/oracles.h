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

#ifndef STREAMFLOW_TESTS_ORACLES_H_
#define STREAMFLOW_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "streamflow/qnet.h"
#include "streamflow/random.h"
#include "streamflow/tabular.h"

namespace streamflow::testing {

// Mean squared TD loss evaluated by a plain forward pass.
inline double ForwardLoss(const QNetwork& net, const Eigen::MatrixXd& states,
                          const std::vector<int>& actions, const std::vector<double>& targets) {
  const Eigen::MatrixXd q = net.ForwardBatch(states);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < states.cols(); ++i) {
    const double d = q(actions[static_cast<std::size_t>(i)], i) - targets[static_cast<std::size_t>(i)];
    loss += d * d;
  }
  return loss / static_cast<double>(states.cols());
}

// Smallest |pre-activation| over both hidden layers and all samples.
inline double KinkMargin(const QNetwork& net, const Eigen::MatrixXd& states) {
  const QParameters& p = net.params();
  const Eigen::MatrixXd z1 = (p.trunk1_w * states).colwise() + p.trunk1_b;
  const Eigen::MatrixXd z2 = (p.trunk2_w * z1.cwiseMax(0.0)).colwise() + p.trunk2_b;
  return std::min(z1.cwiseAbs().minCoeff(), z2.cwiseAbs().minCoeff());
}

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t parameters = 0;
};

// Compares every analytic gradient entry with a central difference of step h.
// Relative error is |g - fd| / max(|g|, |fd|, floor).
inline GradientCheck CheckGradients(const QNetwork& net, const Eigen::MatrixXd& states,
                                    const std::vector<int>& actions,
                                    const std::vector<double>& targets, double h = 1e-5,
                                    double floor = 1e-6) {
  const LossAndGradients analytic = ComputeLossAndGradients(net, states, actions, targets);
  QNetwork probe = net;
  GradientCheck out;
  auto theta = probe.mutable_params().Tensors();
  const auto grad = analytic.gradients.Tensors();
  for (std::size_t t = 0; t < theta.size(); ++t) {
    for (std::size_t i = 0; i < theta[t].size(); ++i) {
      const double saved = theta[t][i];
      theta[t][i] = saved + h;
      const double plus = ForwardLoss(probe, states, actions, targets);
      theta[t][i] = saved - h;
      const double minus = ForwardLoss(probe, states, actions, targets);
      theta[t][i] = saved;
      const double fd = (plus - minus) / (2.0 * h);
      const double g = grad[t][i];
      const double denom = std::max({std::abs(g), std::abs(fd), floor});
      out.max_relative_error = std::max(out.max_relative_error, std::abs(g - fd) / denom);
      ++out.parameters;
    }
  }
  return out;
}

// Uniform value on the grid k / 2^bits within [-bound, bound].
inline double Dyadic(Rng& rng, double bound, int bits) {
  const double scale = std::ldexp(1.0, bits);
  return std::round((2.0 * UniformUnit(rng) - 1.0) * bound * scale) / scale;
}

// A network whose parameters all lie on a coarse dyadic grid. With dyadic
// inputs every forward-pass operation is then exact.
inline QNetwork DyadicNetwork(const QNetworkConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  QParameters p = QParameters::Zeros(config);
  for (auto t : p.Tensors()) {
    for (double& x : t) x = Dyadic(rng, 1.0, 6);
  }
  return QNetwork(config, std::move(p));
}

// Deterministic 4-state chain. Action 0 moves left, action 1 moves right;
// landing in state 3 pays 1, and moving right from 3 stays there.
struct ChainMdp {
  static constexpr std::size_t kStates = 4;
  static constexpr std::size_t kActions = 2;

  static std::size_t Next(std::size_t s, std::size_t a) {
    if (a == 0) return s == 0 ? 0 : s - 1;
    return std::min<std::size_t>(s + 1, kStates - 1);
  }
  static double Reward(std::size_t s, std::size_t a) { return Next(s, a) == kStates - 1 ? 1.0 : 0.0; }

  // Q* solved by hand from the Bellman equations for gamma = 0.5:
  // V*(3) = 1 + 0.5 V*(3) = 2, V*(2) = 1 + 0.5 * 2 = 2, V*(1) = 0.5 * 2 = 1,
  // V*(0) = 0.5 * 1 = 0.5.
  static double OptimalQ(std::size_t s, std::size_t a) {
    static constexpr double kQ[kStates][kActions] = {
        {0.25, 0.5}, {0.25, 1.0}, {0.5, 2.0}, {1.0, 2.0}};
    return kQ[s][a];
  }
};

// Sweeps tabular Q-learning over every (s, a) pair until the largest change
// in one sweep falls below tolerance.
inline QTable SolveChainTabular(double step_size, double gamma, double tolerance,
                                std::size_t max_sweeps, std::size_t* sweeps_used = nullptr) {
  QTable table(ChainMdp::kStates, ChainMdp::kActions);
  std::size_t sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t s = 0; s < ChainMdp::kStates; ++s) {
      for (std::size_t a = 0; a < ChainMdp::kActions; ++a) {
        const double before = table.at(s, a);
        TabularQUpdate(table, s, a, ChainMdp::Reward(s, a), ChainMdp::Next(s, a), step_size, gamma);
        change = std::max(change, std::abs(table.at(s, a) - before));
      }
    }
    if (change < tolerance) break;
  }
  if (sweeps_used) *sweeps_used = sweep;
  return table;
}

// Trains a dueling network on the chain with one-hot states, using full-batch
// TD targets from a target copy synced every sync_interval updates.
inline QNetwork TrainChainAgent(std::uint64_t seed, std::size_t updates,
                                std::size_t sync_interval = 50, double learning_rate = 0.01,
                                double gamma = 0.5) {
  QNetworkConfig config;
  config.input_dim = ChainMdp::kStates;
  config.hidden = 32;
  config.num_actions = ChainMdp::kActions;
  QNetwork online(config, seed);
  QNetwork target = online;
  OptimizerConfig oc;
  oc.learning_rate = learning_rate;
  OptimizerState optimizer = OptimizerState::For(online, oc);

  const auto pairs = static_cast<Eigen::Index>(ChainMdp::kStates * ChainMdp::kActions);
  Eigen::MatrixXd states = Eigen::MatrixXd::Zero(ChainMdp::kStates, pairs);
  Eigen::MatrixXd next = Eigen::MatrixXd::Zero(ChainMdp::kStates, pairs);
  std::vector<int> actions;
  std::vector<double> rewards;
  for (std::size_t s = 0; s < ChainMdp::kStates; ++s) {
    for (std::size_t a = 0; a < ChainMdp::kActions; ++a) {
      const auto col = static_cast<Eigen::Index>(actions.size());
      states(static_cast<Eigen::Index>(s), col) = 1.0;
      next(static_cast<Eigen::Index>(ChainMdp::Next(s, a)), col) = 1.0;
      actions.push_back(static_cast<int>(a));
      rewards.push_back(ChainMdp::Reward(s, a));
    }
  }
  std::vector<double> targets(rewards.size());
  for (std::size_t u = 0; u < updates; ++u) {
    if (u % sync_interval == 0) target = online;
    const Eigen::MatrixXd q_next = target.ForwardBatch(next);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const Eigen::VectorXd column = q_next.col(static_cast<Eigen::Index>(i));
      targets[i] = TdTarget(rewards[i], std::span<const double>(column.data(), column.size()),
                            gamma, false);
    }
    ApplyUpdate(online, ComputeLossAndGradients(online, states, actions, targets).gradients,
                optimizer);
  }
  return online;
}

// Q-values of the one-hot state s.
inline Eigen::VectorXd ChainQ(const QNetwork& net, std::size_t s) {
  std::vector<double> x(ChainMdp::kStates, 0.0);
  x[s] = 1.0;
  return net.Forward(x);
}

}  // namespace streamflow::testing

#endif  // STREAMFLOW_TESTS_ORACLES_H_
