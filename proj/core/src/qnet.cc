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

#include "streamflow/qnet.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "streamflow/errors.h"

namespace streamflow {
namespace {

template <typename Params, typename Span>
std::array<Span, QParameters::kTensorCount> TensorViews(Params& p) {
  return {Span(p.trunk1_w.data(), static_cast<std::size_t>(p.trunk1_w.size())),
          Span(p.trunk1_b.data(), static_cast<std::size_t>(p.trunk1_b.size())),
          Span(p.trunk2_w.data(), static_cast<std::size_t>(p.trunk2_w.size())),
          Span(p.trunk2_b.data(), static_cast<std::size_t>(p.trunk2_b.size())),
          Span(p.value_w.data(), static_cast<std::size_t>(p.value_w.size())),
          Span(p.value_b.data(), static_cast<std::size_t>(p.value_b.size())),
          Span(p.advantage_w.data(), static_cast<std::size_t>(p.advantage_w.size())),
          Span(p.advantage_b.data(), static_cast<std::size_t>(p.advantage_b.size()))};
}

void FillUniform(Eigen::MatrixXd& m, double bound, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = (2.0 * UniformUnit(rng) - 1.0) * bound;
}

void FillUniform(Eigen::VectorXd& v, double bound, Rng& rng) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = (2.0 * UniformUnit(rng) - 1.0) * bound;
}

Eigen::MatrixXd Relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

}  // namespace

void QNetworkConfig::Validate() const {
  if (input_dim == 0) throw ConfigError("qnet: input dimension must be positive");
  if (hidden == 0) throw ConfigError("qnet: hidden width must be positive");
  if (num_actions < 2) throw ConfigError("qnet: need at least two actions");
}

QParameters QParameters::Zeros(const QNetworkConfig& config) {
  const auto in = static_cast<Eigen::Index>(config.input_dim);
  const auto h = static_cast<Eigen::Index>(config.hidden);
  const auto a = static_cast<Eigen::Index>(config.num_actions);
  const Eigen::Index v = config.dueling ? 1 : 0;
  QParameters p;
  p.trunk1_w = Eigen::MatrixXd::Zero(h, in);
  p.trunk1_b = Eigen::VectorXd::Zero(h);
  p.trunk2_w = Eigen::MatrixXd::Zero(h, h);
  p.trunk2_b = Eigen::VectorXd::Zero(h);
  p.value_w = Eigen::MatrixXd::Zero(v, h);
  p.value_b = Eigen::VectorXd::Zero(v);
  p.advantage_w = Eigen::MatrixXd::Zero(a, h);
  p.advantage_b = Eigen::VectorXd::Zero(a);
  return p;
}

std::array<std::span<double>, QParameters::kTensorCount> QParameters::Tensors() {
  return TensorViews<QParameters, std::span<double>>(*this);
}

std::array<std::span<const double>, QParameters::kTensorCount> QParameters::Tensors() const {
  return TensorViews<const QParameters, std::span<const double>>(*this);
}

std::size_t QParameters::size() const {
  std::size_t n = 0;
  for (const auto& t : Tensors()) n += t.size();
  return n;
}

bool QParameters::SameShape(const QParameters& o) const {
  const auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols();
  };
  return same(trunk1_w, o.trunk1_w) && same(trunk1_b, o.trunk1_b) &&
         same(trunk2_w, o.trunk2_w) && same(trunk2_b, o.trunk2_b) &&
         same(value_w, o.value_w) && same(value_b, o.value_b) &&
         same(advantage_w, o.advantage_w) && same(advantage_b, o.advantage_b);
}

bool QParameters::AllFinite() const {
  for (const auto& t : Tensors()) {
    for (double x : t) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

bool operator==(const QParameters& a, const QParameters& b) {
  if (!a.SameShape(b)) return false;
  const auto ta = a.Tensors();
  const auto tb = b.Tensors();
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!std::equal(ta[i].begin(), ta[i].end(), tb[i].begin())) return false;
  }
  return true;
}

Eigen::MatrixXd AggregateDueling(const Eigen::RowVectorXd& value,
                                 const Eigen::MatrixXd& advantages) {
  const Eigen::Index n = advantages.rows();
  if (value.size() != advantages.cols()) {
    throw std::invalid_argument("value/advantage batch sizes differ");
  }
  Eigen::MatrixXd q(n, advantages.cols());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index c = 0; c < advantages.cols(); ++c) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double centered = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) centered += advantages(j, c) - advantages(k, c);
      q(j, c) = value[c] + centered * inv_n;
    }
  }
  return q;
}

QNetwork::QNetwork(const QNetworkConfig& config, std::uint64_t seed) : config_(config) {
  config_.Validate();
  params_ = QParameters::Zeros(config_);
  Rng rng(seed);
  const double in_bound = 1.0 / std::sqrt(static_cast<double>(config_.input_dim));
  const double hidden_bound = 1.0 / std::sqrt(static_cast<double>(config_.hidden));
  FillUniform(params_.trunk1_w, in_bound, rng);
  FillUniform(params_.trunk1_b, in_bound, rng);
  FillUniform(params_.trunk2_w, hidden_bound, rng);
  FillUniform(params_.trunk2_b, hidden_bound, rng);
  FillUniform(params_.value_w, hidden_bound, rng);
  FillUniform(params_.value_b, hidden_bound, rng);
  FillUniform(params_.advantage_w, hidden_bound, rng);
  FillUniform(params_.advantage_b, hidden_bound, rng);
}

QNetwork::QNetwork(const QNetworkConfig& config, QParameters params)
    : config_(config), params_(std::move(params)) {
  config_.Validate();
  if (!params_.SameShape(QParameters::Zeros(config_))) {
    throw std::invalid_argument("parameter shapes do not match the network configuration");
  }
}

void QNetwork::CheckInput(Eigen::Index rows) const {
  if (rows != static_cast<Eigen::Index>(config_.input_dim)) {
    throw std::invalid_argument("state dimension mismatch: expected " +
                                std::to_string(config_.input_dim) + ", got " +
                                std::to_string(rows));
  }
}

QNetwork::Heads QNetwork::ForwardHeads(const Eigen::MatrixXd& states) const {
  CheckInput(states.rows());
  const auto& p = params_;
  Eigen::MatrixXd h1 = Relu((p.trunk1_w * states).colwise() + p.trunk1_b);
  Eigen::MatrixXd h2 = Relu((p.trunk2_w * h1).colwise() + p.trunk2_b);
  Heads heads;
  heads.advantage = (p.advantage_w * h2).colwise() + p.advantage_b;
  if (config_.dueling) {
    heads.value = (p.value_w * h2).array() + p.value_b[0];
  }
  return heads;
}

Eigen::MatrixXd QNetwork::ForwardBatch(const Eigen::MatrixXd& states) const {
  Heads heads = ForwardHeads(states);
  if (!config_.dueling) return std::move(heads.advantage);
  return AggregateDueling(heads.value, heads.advantage);
}

Eigen::VectorXd QNetwork::Forward(std::span<const double> state) const {
  CheckInput(static_cast<Eigen::Index>(state.size()));
  const Eigen::MatrixXd column =
      Eigen::Map<const Eigen::VectorXd>(state.data(), static_cast<Eigen::Index>(state.size()));
  return ForwardBatch(column).col(0);
}

Eigen::MatrixXd StackStates(std::span<const std::vector<double>* const> states) {
  if (states.empty()) return {};
  const auto dim = static_cast<Eigen::Index>(states.front()->size());
  Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (static_cast<Eigen::Index>(states[i]->size()) != dim) {
      throw std::invalid_argument("ragged state batch");
    }
    m.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(states[i]->data(), dim);
  }
  return m;
}

Eigen::MatrixXd StackStates(std::span<const std::vector<double>> states) {
  std::vector<const std::vector<double>*> ptrs;
  ptrs.reserve(states.size());
  for (const auto& s : states) ptrs.push_back(&s);
  return StackStates(std::span<const std::vector<double>* const>(ptrs));
}

LossAndGradients ComputeLossAndGradients(const QNetwork& net, const Eigen::MatrixXd& states,
                                         std::span<const int> actions,
                                         std::span<const double> targets) {
  const Eigen::Index batch = states.cols();
  if (batch == 0) throw std::invalid_argument("empty training batch");
  if (actions.size() != static_cast<std::size_t>(batch) ||
      targets.size() != static_cast<std::size_t>(batch)) {
    throw std::invalid_argument("batch arrays have different lengths");
  }
  const QNetworkConfig& cfg = net.config();
  const auto num_actions = static_cast<Eigen::Index>(cfg.num_actions);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= num_actions) {
      throw std::invalid_argument("action " + std::to_string(actions[i]) + " out of range");
    }
    if (!std::isfinite(targets[i])) throw std::invalid_argument("non-finite TD target");
  }
  if (states.rows() != static_cast<Eigen::Index>(cfg.input_dim)) {
    throw std::invalid_argument("state dimension mismatch: expected " +
                                std::to_string(cfg.input_dim) + ", got " +
                                std::to_string(states.rows()));
  }

  const QParameters& p = net.params();
  const Eigen::MatrixXd z1 = (p.trunk1_w * states).colwise() + p.trunk1_b;
  const Eigen::MatrixXd h1 = Relu(z1);
  const Eigen::MatrixXd z2 = (p.trunk2_w * h1).colwise() + p.trunk2_b;
  const Eigen::MatrixXd h2 = Relu(z2);
  const Eigen::MatrixXd adv = (p.advantage_w * h2).colwise() + p.advantage_b;
  Eigen::MatrixXd q;
  if (cfg.dueling) {
    const Eigen::RowVectorXd value = (p.value_w * h2).array() + p.value_b[0];
    q = AggregateDueling(value, adv);
  } else {
    q = adv;
  }

  LossAndGradients out;
  out.gradients = QParameters::Zeros(cfg);
  QParameters& g = out.gradients;

  // dL/dQ is non-zero only at the taken action of each sample.
  const double scale = 2.0 / static_cast<double>(batch);
  Eigen::RowVectorXd dq_taken(batch);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < batch; ++i) {
    const double diff = q(actions[static_cast<std::size_t>(i)], i) - targets[static_cast<std::size_t>(i)];
    loss += diff * diff;
    dq_taken[i] = scale * diff;
  }
  out.loss = loss / static_cast<double>(batch);

  Eigen::MatrixXd d_adv = Eigen::MatrixXd::Zero(num_actions, batch);
  if (cfg.dueling) {
    // dQ_j/dA_k = [j == k] - 1/n and dQ_j/dV = 1.
    const double inv_n = 1.0 / static_cast<double>(num_actions);
    for (Eigen::Index i = 0; i < batch; ++i) {
      d_adv.col(i).setConstant(-dq_taken[i] * inv_n);
      d_adv(actions[static_cast<std::size_t>(i)], i) += dq_taken[i];
    }
    g.value_w = dq_taken * h2.transpose();
    g.value_b[0] = dq_taken.sum();
  } else {
    for (Eigen::Index i = 0; i < batch; ++i) d_adv(actions[static_cast<std::size_t>(i)], i) = dq_taken[i];
  }
  g.advantage_w = d_adv * h2.transpose();
  g.advantage_b = d_adv.rowwise().sum();

  Eigen::MatrixXd d_h2 = p.advantage_w.transpose() * d_adv;
  if (cfg.dueling) d_h2 += p.value_w.transpose() * dq_taken;
  const Eigen::MatrixXd d_z2 = d_h2.cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
  g.trunk2_w = d_z2 * h1.transpose();
  g.trunk2_b = d_z2.rowwise().sum();

  const Eigen::MatrixXd d_h1 = p.trunk2_w.transpose() * d_z2;
  const Eigen::MatrixXd d_z1 = d_h1.cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  g.trunk1_w = d_z1 * states.transpose();
  g.trunk1_b = d_z1.rowwise().sum();
  return out;
}

void OptimizerConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("qnet.learning_rate must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("optimizer betas must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ConfigError("optimizer epsilon must be positive");
}

OptimizerState OptimizerState::For(const QNetwork& net, const OptimizerConfig& config) {
  config.Validate();
  OptimizerState state;
  state.config = config;
  state.first_moment = QParameters::Zeros(net.config());
  state.second_moment = QParameters::Zeros(net.config());
  return state;
}

void ApplyUpdate(QNetwork& net, const QParameters& gradients, OptimizerState& state) {
  QParameters& params = net.mutable_params();
  if (!gradients.SameShape(params)) {
    throw std::invalid_argument("gradient shapes do not match the network");
  }
  const OptimizerConfig& cfg = state.config;
  ++state.step;
  auto theta = params.Tensors();
  const auto grad = gradients.Tensors();
  if (cfg.kind == OptimizerKind::kSgd) {
    for (std::size_t t = 0; t < theta.size(); ++t) {
      for (std::size_t i = 0; i < theta[t].size(); ++i) theta[t][i] -= cfg.learning_rate * grad[t][i];
    }
    return;
  }
  if (!state.first_moment.SameShape(params) || !state.second_moment.SameShape(params)) {
    throw std::invalid_argument("optimizer moments do not match the network");
  }
  auto m = state.first_moment.Tensors();
  auto v = state.second_moment.Tensors();
  const double step = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, step);
  const double correction2 = 1.0 - std::pow(cfg.beta2, step);
  for (std::size_t t = 0; t < theta.size(); ++t) {
    for (std::size_t i = 0; i < theta[t].size(); ++i) {
      const double gi = grad[t][i];
      m[t][i] = cfg.beta1 * m[t][i] + (1.0 - cfg.beta1) * gi;
      v[t][i] = cfg.beta2 * v[t][i] + (1.0 - cfg.beta2) * gi * gi;
      const double m_hat = m[t][i] / correction1;
      const double v_hat = v[t][i] / correction2;
      theta[t][i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

int GreedyAction(const Eigen::Ref<const Eigen::VectorXd>& q_values) {
  int best = 0;
  for (Eigen::Index a = 1; a < q_values.size(); ++a) {
    if (q_values[a] > q_values[best]) best = static_cast<int>(a);
  }
  return best;
}

int EpsilonGreedy(const Eigen::Ref<const Eigen::VectorXd>& q_values, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("exploration rate must be in [0, 1]");
  }
  if (UniformUnit(rng) < epsilon) {
    return static_cast<int>(UniformIndex(rng, static_cast<std::uint64_t>(q_values.size())));
  }
  return GreedyAction(q_values);
}

int SelectAction(const QNetwork& net, std::span<const double> state, double epsilon, Rng& rng) {
  return EpsilonGreedy(net.Forward(state), epsilon, rng);
}

}  // namespace streamflow
