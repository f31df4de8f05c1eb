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
// Bottleneck autoencoder ("mirror network"): a three-layer tanh net trained
// to reproduce its input. encode() reads the bottleneck activations,
// decode() applies the post-bottleneck half; their composition is bitwise
// identical to a full forward pass.

#ifndef MNN_MIRROR_HPP_
#define MNN_MIRROR_HPP_

#include <cstdint>
#include <vector>

#include "mnn/network.hpp"

namespace mnn {

class MirrorNet {
 public:
  // Builds an [input_dim, bottleneck_dim, input_dim] tanh network.
  // Requires 1 <= bottleneck_dim < input_dim.
  MirrorNet(std::size_t input_dim, std::size_t bottleneck_dim,
            std::uint64_t seed);

  // Wraps an existing network (archive load path). Validates the mirror
  // shape: three layers, first == last, middle strictly smaller.
  static MirrorNet from_network(Network net);

  std::size_t input_dim() const { return net_.layer_sizes.front(); }
  std::size_t bottleneck_dim() const { return net_.layer_sizes[1]; }

  // Bottleneck activations of x; entries lie strictly inside (-1, 1).
  Vector encode(const Vector& x) const;
  // Applies the post-bottleneck layer to a feature vector.
  Vector decode(const Vector& features) const;
  // MSE between x and decode(encode(x)).
  double reconstruction_error(const Vector& x) const;

  // Trains with targets == inputs; every input entry must lie in [-1, 1].
  // Returns the per-epoch mean reconstruction loss.
  std::vector<double> train(const std::vector<Vector>& inputs,
                            const TrainConfig& config,
                            const EpochCallback& on_epoch = {});

  const Network& net() const { return net_; }

  friend bool operator==(const MirrorNet& a, const MirrorNet& b) = default;

 private:
  explicit MirrorNet(Network net) : net_(std::move(net)) {}

  Network net_;
};

}  // namespace mnn

#endif  // MNN_MIRROR_HPP_
