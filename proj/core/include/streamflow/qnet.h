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

#ifndef STREAMFLOW_QNET_H_
#define STREAMFLOW_QNET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "streamflow/random.h"

namespace streamflow {

struct QNetworkConfig {
  std::size_t input_dim = 0;
  std::size_t hidden = 64;
  std::size_t num_actions = 5;
  // Value/advantage split; when false the advantage head emits Q directly.
  bool dueling = true;

  // Throws ConfigError.
  void Validate() const;
  friend bool operator==(const QNetworkConfig&, const QNetworkConfig&) = default;
};

// Parameter set of the two-layer rectifier trunk and its heads. Weight
// matrices are (fan_out x fan_in). The value head is empty when the network
// is not dueling. Also used as the gradient and optimizer-moment container.
struct QParameters {
  static constexpr std::size_t kTensorCount = 8;

  Eigen::MatrixXd trunk1_w;
  Eigen::VectorXd trunk1_b;
  Eigen::MatrixXd trunk2_w;
  Eigen::VectorXd trunk2_b;
  Eigen::MatrixXd value_w;
  Eigen::VectorXd value_b;
  Eigen::MatrixXd advantage_w;
  Eigen::VectorXd advantage_b;

  static QParameters Zeros(const QNetworkConfig& config);

  // Flat views in a fixed order: trunk1 w/b, trunk2 w/b, value w/b,
  // advantage w/b.
  std::array<std::span<double>, kTensorCount> Tensors();
  std::array<std::span<const double>, kTensorCount> Tensors() const;

  std::size_t size() const;
  bool SameShape(const QParameters& other) const;
  bool AllFinite() const;

  friend bool operator==(const QParameters& a, const QParameters& b);
};

// Q(s, a) = V(s) + A(s, a) - mean_b A(s, b), column-wise. Centering is done
// through pairwise differences so that any exactly representable common
// shift of the advantages leaves the result bit-identical.
Eigen::MatrixXd AggregateDueling(const Eigen::RowVectorXd& value,
                                 const Eigen::MatrixXd& advantages);

class QNetwork {
 public:
  QNetwork() = default;
  // Uniform fan-in initialisation U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  QNetwork(const QNetworkConfig& config, std::uint64_t seed);
  // Throws std::invalid_argument if the parameter shapes do not match.
  QNetwork(const QNetworkConfig& config, QParameters params);

  const QNetworkConfig& config() const { return config_; }
  const QParameters& params() const { return params_; }
  QParameters& mutable_params() { return params_; }

  // Throws std::invalid_argument naming expected and actual dimensions.
  Eigen::VectorXd Forward(std::span<const double> state) const;
  // states is (input_dim x batch); returns (num_actions x batch).
  Eigen::MatrixXd ForwardBatch(const Eigen::MatrixXd& states) const;

  struct Heads {
    Eigen::RowVectorXd value;     // empty when not dueling
    Eigen::MatrixXd advantage;    // num_actions x batch
  };
  Heads ForwardHeads(const Eigen::MatrixXd& states) const;

 private:
  void CheckInput(Eigen::Index rows) const;

  QNetworkConfig config_;
  QParameters params_;
};

// Packs state vectors as columns of an (input_dim x n) matrix.
Eigen::MatrixXd StackStates(std::span<const std::vector<double>* const> states);
Eigen::MatrixXd StackStates(std::span<const std::vector<double>> states);

struct LossAndGradients {
  double loss = 0.0;
  QParameters gradients;
};

// loss = mean_i (targets_i - Q(states_i, actions_i))^2 with exact gradients
// with respect to every parameter. Throws std::invalid_argument on an empty
// batch, mismatched lengths, out-of-range actions or non-finite targets.
LossAndGradients ComputeLossAndGradients(const QNetwork& net, const Eigen::MatrixXd& states,
                                         std::span<const int> actions,
                                         std::span<const double> targets);

enum class OptimizerKind { kAdam, kSgd };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void Validate() const;
};

struct OptimizerState {
  OptimizerConfig config;
  QParameters first_moment;
  QParameters second_moment;
  std::uint64_t step = 0;

  static OptimizerState For(const QNetwork& net, const OptimizerConfig& config);
};

// One adaptive-moment step with bias correction (or a plain gradient step for
// kSgd). Throws std::invalid_argument on shape mismatch.
void ApplyUpdate(QNetwork& net, const QParameters& gradients, OptimizerState& state);

// Index of the largest Q-value; ties resolve to the lowest index.
int GreedyAction(const Eigen::Ref<const Eigen::VectorXd>& q_values);

// Epsilon-greedy over precomputed Q-values. Always consumes one uniform draw,
// plus one index draw when exploring.
int EpsilonGreedy(const Eigen::Ref<const Eigen::VectorXd>& q_values, double epsilon, Rng& rng);

int SelectAction(const QNetwork& net, std::span<const double> state, double epsilon, Rng& rng);

}  // namespace streamflow

#endif  // STREAMFLOW_QNET_H_
