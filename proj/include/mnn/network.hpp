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
//
// Dense feedforward networks with mean-squared-error backpropagation and
// per-sample SGD. Small nets, double precision, fully deterministic.

#ifndef MNN_NETWORK_HPP_
#define MNN_NETWORK_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "mnn/linalg.hpp"

namespace mnn {

enum class Activation {
  kTanh,
  kLinear,
};

struct Network {
  std::vector<std::size_t> layer_sizes;
  // weights[l] has shape layer_sizes[l+1] x layer_sizes[l]; biases[l] has
  // length layer_sizes[l+1]; activations[l] applies to layer l+1.
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  std::vector<Activation> activations;

  std::size_t num_layers() const { return layer_sizes.size(); }
  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  std::size_t num_params() const;

  friend bool operator==(const Network& a, const Network& b) = default;
};

// Gradients (or momentum velocities) shaped like a Network's parameters.
struct Gradients {
  std::vector<Matrix> weight_grads;
  std::vector<Vector> bias_grads;

  static Gradients zeros_like(const Network& net);
};

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t epochs = 500;
  std::uint64_t shuffle_seed = 0;
  double momentum = 0.9;
  std::size_t loss_log_every = 50;

  TrainConfig() = default;
  // Validating constructor; throws InvalidArgument on lr <= 0, epochs < 1,
  // momentum outside [0, 1) or loss_log_every < 1.
  TrainConfig(double lr, std::size_t n_epochs, std::uint64_t seed = 0,
              double momentum_coeff = 0.9, std::size_t log_every = 50);

  void validate() const;
};

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
// Identical arguments give bit-identical networks.
Network init_network(const std::vector<std::size_t>& layer_sizes,
                     const std::vector<Activation>& activation_plan,
                     std::uint64_t seed);
// Same activation on every layer.
Network init_network(const std::vector<std::size_t>& layer_sizes,
                     Activation activation, std::uint64_t seed);

// Returns all per-layer activation vectors; front() is the input, back() the
// network output.
std::vector<Vector> forward(const Network& net, const Vector& input);

struct BackpropResult {
  double loss = 0.0;
  Gradients grads;
};

// loss = mean squared error over output units; gradients are the exact
// analytic partials of that loss.
BackpropResult backprop(const Network& net, const Vector& input,
                        const Vector& target);

// velocity = momentum * velocity - lr * grads; params += velocity.
void sgd_step(Network& net, const Gradients& grads, const TrainConfig& config,
              Gradients& velocity);

// Called with (epoch index, mean loss) every `loss_log_every` epochs and on
// the final epoch.
using EpochCallback = std::function<void(std::size_t, double)>;

// One sgd_step per sample, samples visited in a seeded shuffled order that
// advances across epochs. Returns a per-epoch mean loss history with exactly
// `epochs` entries (losses measured before each update).
std::vector<double> train_epochs(Network& net,
                                 const std::vector<Vector>& inputs,
                                 const std::vector<Vector>& targets,
                                 const TrainConfig& config,
                                 const EpochCallback& on_epoch = {});

// Max over parameters of |analytic - numeric| / max(1e-8, |analytic| +
// |numeric|), with numeric = central finite differences at step fd_step.
double check_gradients(const Network& net, const Vector& input,
                       const Vector& target, double fd_step);

}  // namespace mnn

#endif  // MNN_NETWORK_HPP_
