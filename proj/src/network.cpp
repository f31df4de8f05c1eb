// Copyright 2026 The mnn-assoc Authors
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

#include "mnn/network.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mnn/error.hpp"
#include "mnn/kernels.hpp"
#include "mnn/rng.hpp"

namespace mnn {
namespace {

std::string shape_msg(const char* what, std::size_t expected,
                      std::size_t got) {
  return std::string(what) + ": expected " + std::to_string(expected) +
         ", got " + std::to_string(got);
}

void apply_activation(Activation act, Vector& v) {
  if (act == Activation::kTanh) {
    for (double& x : v) x = std::tanh(x);
  }
}

// Derivative in terms of the activation value a (not the pre-activation).
inline double activation_derivative(Activation act, double a) {
  return act == Activation::kTanh ? 1.0 - a * a : 1.0;
}

}  // namespace

std::size_t Network::num_params() const {
  std::size_t n = 0;
  for (const Matrix& w : weights) n += w.size();
  for (const Vector& b : biases) n += b.size();
  return n;
}

Gradients Gradients::zeros_like(const Network& net) {
  Gradients g;
  g.weight_grads.reserve(net.weights.size());
  g.bias_grads.reserve(net.biases.size());
  for (const Matrix& w : net.weights) {
    g.weight_grads.emplace_back(w.rows, w.cols);
  }
  for (const Vector& b : net.biases) {
    g.bias_grads.emplace_back(b.size(), 0.0);
  }
  return g;
}

TrainConfig::TrainConfig(double lr, std::size_t n_epochs, std::uint64_t seed,
                         double momentum_coeff, std::size_t log_every)
    : learning_rate(lr),
      epochs(n_epochs),
      shuffle_seed(seed),
      momentum(momentum_coeff),
      loss_log_every(log_every) {
  validate();
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be positive");
  }
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw InvalidArgument("momentum must lie in [0, 1)");
  }
  if (loss_log_every < 1) throw InvalidArgument("loss_log_every must be >= 1");
}

Network init_network(const std::vector<std::size_t>& layer_sizes,
                     const std::vector<Activation>& activation_plan,
                     std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw InvalidArgument("invalid architecture: need at least two layers");
  }
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw InvalidArgument("invalid architecture: zero-sized layer");
  }
  if (activation_plan.size() != layer_sizes.size() - 1) {
    throw InvalidArgument(shape_msg("activation plan length",
                                    layer_sizes.size() - 1,
                                    activation_plan.size()));
  }

  Network net;
  net.layer_sizes = layer_sizes;
  net.activations = activation_plan;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const std::size_t fan_in = layer_sizes[l];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Matrix w(layer_sizes[l + 1], fan_in);
    for (double& x : w.data) x = rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(layer_sizes[l + 1], 0.0);
  }
  return net;
}

Network init_network(const std::vector<std::size_t>& layer_sizes,
                     Activation activation, std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw InvalidArgument("invalid architecture: need at least two layers");
  }
  return init_network(
      layer_sizes,
      std::vector<Activation>(layer_sizes.size() - 1, activation), seed);
}

std::vector<Vector> forward(const Network& net, const Vector& input) {
  if (input.size() != net.input_dim()) {
    throw ShapeError(shape_msg("input length", net.input_dim(), input.size()));
  }
  std::vector<Vector> acts;
  acts.reserve(net.num_layers());
  acts.push_back(input);
  const kernels::Ops& k = kernels::active();
  for (std::size_t l = 0; l + 1 < net.num_layers(); ++l) {
    const Matrix& w = net.weights[l];
    Vector z(w.rows);
    k.matvec(w.data.data(), acts[l].data(), net.biases[l].data(), z.data(),
             w.rows, w.cols);
    apply_activation(net.activations[l], z);
    acts.push_back(std::move(z));
  }
  return acts;
}

BackpropResult backprop(const Network& net, const Vector& input,
                        const Vector& target) {
  if (target.size() != net.output_dim()) {
    throw ShapeError(
        shape_msg("target length", net.output_dim(), target.size()));
  }
  if (!all_finite(input) || !all_finite(target)) {
    throw DomainError("backprop requires finite inputs and targets");
  }

  const std::vector<Vector> acts = forward(net, input);
  const Vector& output = acts.back();
  const std::size_t d_out = output.size();
  const kernels::Ops& k = kernels::active();

  BackpropResult res;
  res.loss = k.squared_distance(output.data(), target.data(), d_out) /
             static_cast<double>(d_out);
  res.grads = Gradients::zeros_like(net);

  // delta = dL/dz at the output layer.
  Vector delta(d_out);
  const Activation out_act = net.activations.back();
  for (std::size_t i = 0; i < d_out; ++i) {
    delta[i] = 2.0 * (output[i] - target[i]) / static_cast<double>(d_out) *
               activation_derivative(out_act, output[i]);
  }

  for (std::size_t l = net.weights.size(); l-- > 0;) {
    const Matrix& w = net.weights[l];
    k.rank1_accumulate(res.grads.weight_grads[l].data.data(), delta.data(),
                       acts[l].data(), w.rows, w.cols);
    res.grads.bias_grads[l] = delta;
    if (l > 0) {
      Vector prev(w.cols);
      k.matvec_transposed(w.data.data(), delta.data(), prev.data(), w.rows,
                          w.cols);
      const Activation act = net.activations[l - 1];
      for (std::size_t c = 0; c < w.cols; ++c) {
        prev[c] *= activation_derivative(act, acts[l][c]);
      }
      delta = std::move(prev);
    }
  }
  return res;
}

void sgd_step(Network& net, const Gradients& grads, const TrainConfig& config,
              Gradients& velocity) {
  config.validate();
  if (grads.weight_grads.size() != net.weights.size() ||
      velocity.weight_grads.size() != net.weights.size()) {
    throw ShapeError("gradient/velocity layer count mismatch");
  }
  const kernels::Ops& k = kernels::active();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Matrix& w = net.weights[l];
    const Matrix& gw = grads.weight_grads[l];
    Matrix& vw = velocity.weight_grads[l];
    if (gw.rows != w.rows || gw.cols != w.cols || vw.rows != w.rows ||
        vw.cols != w.cols) {
      throw ShapeError("weight gradient shape mismatch at layer " +
                       std::to_string(l));
    }
    k.sgd_update(w.data.data(), vw.data.data(), gw.data.data(),
                 config.learning_rate, config.momentum, w.size());

    Vector& b = net.biases[l];
    const Vector& gb = grads.bias_grads[l];
    Vector& vb = velocity.bias_grads[l];
    if (gb.size() != b.size() || vb.size() != b.size()) {
      throw ShapeError("bias gradient shape mismatch at layer " +
                       std::to_string(l));
    }
    k.sgd_update(b.data(), vb.data(), gb.data(), config.learning_rate,
                 config.momentum, b.size());
  }
}

std::vector<double> train_epochs(Network& net,
                                 const std::vector<Vector>& inputs,
                                 const std::vector<Vector>& targets,
                                 const TrainConfig& config,
                                 const EpochCallback& on_epoch) {
  config.validate();
  if (inputs.empty()) throw InsufficientData("empty dataset");
  if (inputs.size() != targets.size()) {
    throw ShapeError(
        shape_msg("target count", inputs.size(), targets.size()));
  }

  Gradients velocity = Gradients::zeros_like(net);
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(derive_seed(config.shuffle_seed, 0x51u));

  std::vector<double> history;
  history.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t idx : order) {
      BackpropResult res = backprop(net, inputs[idx], targets[idx]);
      loss_sum += res.loss;
      sgd_step(net, res.grads, config, velocity);
    }
    const double mean_loss = loss_sum / static_cast<double>(inputs.size());
    history.push_back(mean_loss);
    if (on_epoch &&
        ((epoch + 1) % config.loss_log_every == 0 ||
         epoch + 1 == config.epochs)) {
      on_epoch(epoch, mean_loss);
    }
  }
  return history;
}

namespace {

double loss_at(const Network& net, const Vector& input, const Vector& target) {
  const std::vector<Vector> acts = forward(net, input);
  const Vector& out = acts.back();
  return kernels::active().squared_distance(out.data(), target.data(),
                                            out.size()) /
         static_cast<double>(out.size());
}

}  // namespace

double check_gradients(const Network& net, const Vector& input,
                       const Vector& target, double fd_step) {
  if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");

  const BackpropResult res = backprop(net, input, target);
  Network probe = net;
  double worst = 0.0;

  auto check_param = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + fd_step;
    const double lp = loss_at(probe, input, target);
    param = saved - fd_step;
    const double lm = loss_at(probe, input, target);
    param = saved;
    const double numeric = (lp - lm) / (2.0 * fd_step);
    const double denom =
        std::max(1e-8, std::abs(analytic) + std::abs(numeric));
    const double rel = std::abs(analytic - numeric) / denom;
    if (rel > worst) worst = rel;
  };

  for (std::size_t l = 0; l < probe.weights.size(); ++l) {
    Matrix& w = probe.weights[l];
    const Matrix& gw = res.grads.weight_grads[l];
    for (std::size_t i = 0; i < w.size(); ++i) {
      check_param(w.data[i], gw.data[i]);
    }
    Vector& b = probe.biases[l];
    const Vector& gb = res.grads.bias_grads[l];
    for (std::size_t i = 0; i < b.size(); ++i) {
      check_param(b[i], gb[i]);
    }
  }
  return worst;
}

}  // namespace mnn
