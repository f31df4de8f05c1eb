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
// The two-level architecture. Level I: one mirror network plus one k-means
// model per sensory category (voice, image). Level II: one mapper network
// per pattern group translating voice features into image features. Training
// runs Level I first, then Level II; inference routes a voice input through
// its group's mapper and decodes the result with the image-side decoder.

#ifndef MNN_HIERARCHY_HPP_
#define MNN_HIERARCHY_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mnn/dataset.hpp"
#include "mnn/kmeans.hpp"
#include "mnn/mirror.hpp"
#include "mnn/network.hpp"

namespace mnn {

enum class RouteBy {
  kTrueLabel,
  kPredictedCluster,
};

struct HierarchyConfig {
  std::size_t n_categories = 2;  // voice + image
  std::size_t k_groups = 3;
  std::size_t input_dim = 510;
  std::size_t feature_dim = 20;
  std::size_t mapper_hidden_dim = 20;
  // Reconstructed vectors are written as image_width x image_height PGMs;
  // the product must equal input_dim.
  std::size_t image_width = 17;
  std::size_t image_height = 30;
  TrainConfig level1_train;
  TrainConfig level2_train;
  RouteBy route_by = RouteBy::kTrueLabel;
  std::size_t kmeans_restarts = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EvalRecord {
  std::string id;
  std::string true_group;
  std::string voice_predicted;   // Level-I voice classification
  std::string image_predicted;   // Level-I image classification
  std::string mapped_predicted;  // image cluster of the mapped features
  bool overall_correct = false;
};

struct EvalReport {
  double voice_accuracy = 0.0;
  double image_accuracy = 0.0;
  double overall_efficiency = 0.0;
  std::vector<std::string> labels;  // sorted; indexes the confusion rows/cols
  // confusion[true][predicted]
  std::vector<std::vector<std::size_t>> voice_confusion;
  std::vector<std::vector<std::size_t>> image_confusion;
  std::vector<EvalRecord> records;
};

struct HierarchyModel {
  HierarchyConfig config;
  MirrorNet voice_mnn;
  MirrorNet image_mnn;
  KMeansModel voice_clusters;
  KMeansModel image_clusters;
  std::map<std::string, Network> mappers;  // group label -> mapper net

  std::vector<std::string> group_labels() const;
};

// Per-component loss histories and timings gathered during train_full.
struct TrainTrace {
  std::vector<double> voice_loss;
  std::vector<double> image_loss;
  std::map<std::string, std::vector<double>> mapper_loss;
  double level1_seconds = 0.0;
  double level2_seconds = 0.0;
};

struct Level1 {
  MirrorNet voice_mnn;
  MirrorNet image_mnn;
  KMeansModel voice_clusters;
  KMeansModel image_clusters;
};

// Trains both mirror networks independently, encodes the training vectors,
// and clusters each feature set (best of config.kmeans_restarts).
Level1 train_level1(const std::vector<SamplePair>& pairs,
                    const HierarchyConfig& config, TrainTrace* trace = nullptr,
                    const EpochCallback& on_epoch = {});

// Trains one mapper per group on (voice features -> image features) of the
// pairs routed to that group. Throws MissingGroupData when a group receives
// no pairs.
std::map<std::string, Network> train_level2(
    const Level1& level1, const std::vector<SamplePair>& pairs,
    const HierarchyConfig& config, TrainTrace* trace = nullptr);

// train_level1 then train_level2; deterministic given config.seed.
HierarchyModel train_full(const std::vector<SamplePair>& pairs,
                          const HierarchyConfig& config,
                          TrainTrace* trace = nullptr,
                          const EpochCallback& on_epoch = {});

struct Association {
  std::string group;
  Vector mapped_features;     // feature_dim
  Vector reconstructed_image; // input_dim
};

// encode -> classify -> map -> decode.
Association associate(const HierarchyModel& model, const Vector& voice);

// Level-I accuracies on both sides plus the overall efficiency: routing
// correct AND the mapped features landing in the true image cluster.
EvalReport evaluate(const HierarchyModel& model,
                    const std::vector<SamplePair>& test_pairs);

}  // namespace mnn

#endif  // MNN_HIERARCHY_HPP_
