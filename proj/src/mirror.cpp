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

#include "mnn/mirror.hpp"

#include <cmath>
#include <string>

#include "mnn/error.hpp"
#include "mnn/kernels.hpp"

namespace mnn {

namespace {

Network build_mirror_net(std::size_t input_dim, std::size_t bottleneck_dim,
                         std::uint64_t seed) {
  if (bottleneck_dim == 0 || bottleneck_dim >= input_dim) {
    throw InvalidArgument(
        "invalid architecture: bottleneck must satisfy 1 <= bottleneck < "
        "input (got " +
        std::to_string(bottleneck_dim) + " vs " + std::to_string(input_dim) +
        ")");
  }
  return init_network({input_dim, bottleneck_dim, input_dim},
                      Activation::kTanh, seed);
}

}  // namespace

MirrorNet::MirrorNet(std::size_t input_dim, std::size_t bottleneck_dim,
                     std::uint64_t seed)
    : net_(build_mirror_net(input_dim, bottleneck_dim, seed)) {}

MirrorNet MirrorNet::from_network(Network net) {
  if (net.num_layers() != 3) {
    throw InvalidArgument("mirror network must have exactly three layers");
  }
  if (net.layer_sizes.front() != net.layer_sizes.back()) {
    throw InvalidArgument("mirror network output must match its input size");
  }
  if (net.layer_sizes[1] >= net.layer_sizes[0]) {
    throw InvalidArgument("mirror network bottleneck must compress");
  }
  return MirrorNet(std::move(net));
}

Vector MirrorNet::encode(const Vector& x) const {
  if (x.size() != input_dim()) {
    throw ShapeError("encode: expected " + std::to_string(input_dim()) +
                     " entries, got " + std::to_string(x.size()));
  }
  const Matrix& w = net_.weights[0];
  Vector f(w.rows);
  kernels::active().matvec(w.data.data(), x.data(), net_.biases[0].data(),
                           f.data(), w.rows, w.cols);
  if (net_.activations[0] == Activation::kTanh) {
    for (double& v : f) v = std::tanh(v);
  }
  return f;
}

Vector MirrorNet::decode(const Vector& features) const {
  if (features.size() != bottleneck_dim()) {
    throw ShapeError("decode: expected " + std::to_string(bottleneck_dim()) +
                     " entries, got " + std::to_string(features.size()));
  }
  const Matrix& w = net_.weights[1];
  Vector out(w.rows);
  kernels::active().matvec(w.data.data(), features.data(),
                           net_.biases[1].data(), out.data(), w.rows, w.cols);
  if (net_.activations[1] == Activation::kTanh) {
    for (double& v : out) v = std::tanh(v);
  }
  return out;
}

double MirrorNet::reconstruction_error(const Vector& x) const {
  const Vector rec = decode(encode(x));
  return kernels::active().squared_distance(x.data(), rec.data(), x.size()) /
         static_cast<double>(x.size());
}

std::vector<double> MirrorNet::train(const std::vector<Vector>& inputs,
                                     const TrainConfig& config,
                                     const EpochCallback& on_epoch) {
  for (const Vector& x : inputs) {
    if (x.size() != input_dim()) {
      throw ShapeError("train: expected " + std::to_string(input_dim()) +
                       " entries, got " + std::to_string(x.size()));
    }
    if (!all_within(x, -1.0, 1.0)) {
      throw DomainError(
          "train: inputs must be pre-rescaled to [-1, 1]");
    }
  }
  return train_epochs(net_, inputs, inputs, config, on_epoch);
}

}  // namespace mnn
