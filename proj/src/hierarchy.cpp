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

#include "mnn/hierarchy.hpp"

#include <algorithm>
#include <chrono>

#include "mnn/error.hpp"
#include "mnn/rng.hpp"

namespace mnn {
namespace {

// Stream tags for deriving per-component seeds from config.seed.
enum SeedTag : std::uint64_t {
  kVoiceNetInit = 1,
  kImageNetInit = 2,
  kVoiceShuffle = 3,
  kImageShuffle = 4,
  kVoiceKmeans = 5,
  kImageKmeans = 6,
  kMapperInit = 7,    // + group index
  kMapperShuffle = 64 // + group index
};

constexpr std::size_t kKmeansMaxIters = 100;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void check_pair(const SamplePair& pair, std::size_t input_dim) {
  if (pair.voice.size() != input_dim || pair.image.size() != input_dim) {
    throw ShapeError("pair '" + pair.id + "': vectors must have " +
                     std::to_string(input_dim) + " entries");
  }
  if (!all_within(pair.voice, -1.0, 1.0) ||
      !all_within(pair.image, -1.0, 1.0)) {
    throw DomainError("pair '" + pair.id +
                      "': entries must lie in [-1, 1]");
  }
  if (pair.group.empty()) {
    throw InvalidArgument("pair '" + pair.id + "': empty group label");
  }
}

TrainConfig with_shuffle_seed(const TrainConfig& base, std::uint64_t seed) {
  TrainConfig cfg = base;
  cfg.shuffle_seed = seed;
  return cfg;
}

}  // namespace

void HierarchyConfig::validate() const {
  if (n_categories != 2) {
    throw InvalidArgument("this architecture pairs exactly two categories");
  }
  if (k_groups < 2) throw InvalidArgument("k_groups must be >= 2");
  if (input_dim == 0 || feature_dim == 0 || mapper_hidden_dim == 0) {
    throw InvalidArgument("all dimensions must be positive");
  }
  if (feature_dim >= input_dim) {
    throw InvalidArgument("feature_dim must be smaller than input_dim");
  }
  if (image_width * image_height != input_dim) {
    throw InvalidArgument("image_width * image_height must equal input_dim");
  }
  if (kmeans_restarts == 0) {
    throw InvalidArgument("kmeans_restarts must be >= 1");
  }
  level1_train.validate();
  level2_train.validate();
}

std::vector<std::string> HierarchyModel::group_labels() const {
  std::vector<std::string> labels;
  labels.reserve(mappers.size());
  for (const auto& [label, net] : mappers) labels.push_back(label);
  return labels;
}

Level1 train_level1(const std::vector<SamplePair>& pairs,
                    const HierarchyConfig& config, TrainTrace* trace,
                    const EpochCallback& on_epoch) {
  config.validate();
  if (pairs.size() < config.k_groups) {
    throw InsufficientData("need at least k_groups pairs");
  }
  for (const SamplePair& pair : pairs) check_pair(pair, config.input_dim);

  const auto start = std::chrono::steady_clock::now();
  std::vector<Vector> voices, images;
  std::vector<std::string> labels;
  voices.reserve(pairs.size());
  images.reserve(pairs.size());
  labels.reserve(pairs.size());
  for (const SamplePair& pair : pairs) {
    voices.push_back(pair.voice);
    images.push_back(pair.image);
    labels.push_back(pair.group);
  }

  MirrorNet voice_mnn(config.input_dim, config.feature_dim,
                      derive_seed(config.seed, kVoiceNetInit));
  MirrorNet image_mnn(config.input_dim, config.feature_dim,
                      derive_seed(config.seed, kImageNetInit));

  const std::vector<double> voice_loss = voice_mnn.train(
      voices,
      with_shuffle_seed(config.level1_train,
                        derive_seed(derive_seed(config.seed, kVoiceShuffle),
                                    config.level1_train.shuffle_seed)),
      on_epoch);
  const std::vector<double> image_loss = image_mnn.train(
      images,
      with_shuffle_seed(config.level1_train,
                        derive_seed(derive_seed(config.seed, kImageShuffle),
                                    config.level1_train.shuffle_seed)),
      on_epoch);

  std::vector<Vector> voice_feats, image_feats;
  voice_feats.reserve(pairs.size());
  image_feats.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    voice_feats.push_back(voice_mnn.encode(voices[i]));
    image_feats.push_back(image_mnn.encode(images[i]));
  }

  const KMeansResult voice_run = best_of_restarts(
      voice_feats, config.k_groups, derive_seed(config.seed, kVoiceKmeans),
      config.kmeans_restarts, kKmeansMaxIters);
  const KMeansResult image_run = best_of_restarts(
      image_feats, config.k_groups, derive_seed(config.seed, kImageKmeans),
      config.kmeans_restarts, kKmeansMaxIters);

  if (trace != nullptr) {
    trace->voice_loss = voice_loss;
    trace->image_loss = image_loss;
    trace->level1_seconds = seconds_since(start);
  }

  return Level1{std::move(voice_mnn), std::move(image_mnn),
                make_kmeans_model(voice_run, labels),
                make_kmeans_model(image_run, labels)};
}

std::map<std::string, Network> train_level2(
    const Level1& level1, const std::vector<SamplePair>& pairs,
    const HierarchyConfig& config, TrainTrace* trace) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const std::vector<std::string> groups = distinct_groups(pairs);

  // Routed feature pairs per group.
  std::map<std::string, std::vector<Vector>> inputs, targets;
  for (const std::string& g : groups) {
    inputs[g];
    targets[g];
  }
  for (const SamplePair& pair : pairs) {
    check_pair(pair, config.input_dim);
    const Vector voice_feat = level1.voice_mnn.encode(pair.voice);
    const std::string route =
        config.route_by == RouteBy::kTrueLabel
            ? pair.group
            : level1.voice_clusters.classify(voice_feat).first;
    auto it = inputs.find(route);
    if (it == inputs.end()) continue;  // predicted label outside group set
    it->second.push_back(voice_feat);
    targets[route].push_back(level1.image_mnn.encode(pair.image));
  }

  std::map<std::string, Network> mappers;
  std::size_t group_index = 0;
  for (const std::string& g : groups) {
    if (inputs[g].empty()) {
      throw MissingGroupData("no training pairs routed to group '" + g + "'");
    }
    Network mapper = init_network(
        {config.feature_dim, config.mapper_hidden_dim, config.feature_dim},
        Activation::kTanh, derive_seed(config.seed, kMapperInit + group_index));
    const std::vector<double> loss = train_epochs(
        mapper, inputs[g], targets[g],
        with_shuffle_seed(
            config.level2_train,
            derive_seed(derive_seed(config.seed, kMapperShuffle + group_index),
                        config.level2_train.shuffle_seed)));
    if (trace != nullptr) trace->mapper_loss[g] = loss;
    mappers.emplace(g, std::move(mapper));
    ++group_index;
  }

  if (trace != nullptr) trace->level2_seconds = seconds_since(start);
  return mappers;
}

HierarchyModel train_full(const std::vector<SamplePair>& pairs,
                          const HierarchyConfig& config, TrainTrace* trace,
                          const EpochCallback& on_epoch) {
  config.validate();
  const std::vector<std::string> groups = distinct_groups(pairs);
  if (groups.size() != config.k_groups) {
    throw InvalidArgument("dataset has " + std::to_string(groups.size()) +
                          " distinct groups but k_groups = " +
                          std::to_string(config.k_groups));
  }

  Level1 level1 = train_level1(pairs, config, trace, on_epoch);
  std::map<std::string, Network> mappers =
      train_level2(level1, pairs, config, trace);
  return HierarchyModel{config,
                        std::move(level1.voice_mnn),
                        std::move(level1.image_mnn),
                        std::move(level1.voice_clusters),
                        std::move(level1.image_clusters),
                        std::move(mappers)};
}

Association associate(const HierarchyModel& model, const Vector& voice) {
  if (voice.size() != model.config.input_dim) {
    throw ShapeError("voice vector must have " +
                     std::to_string(model.config.input_dim) + " entries");
  }
  if (!all_within(voice, -1.0, 1.0)) {
    throw DomainError("voice entries must lie in [-1, 1]");
  }

  Association assoc;
  const Vector features = model.voice_mnn.encode(voice);
  assoc.group = model.voice_clusters.classify(features).first;
  const auto it = model.mappers.find(assoc.group);
  if (it == model.mappers.end()) {
    throw InvalidArgument("no mapper for group '" + assoc.group + "'");
  }
  assoc.mapped_features = forward(it->second, features).back();
  assoc.reconstructed_image = model.image_mnn.decode(assoc.mapped_features);
  return assoc;
}

EvalReport evaluate(const HierarchyModel& model,
                    const std::vector<SamplePair>& test_pairs) {
  if (test_pairs.empty()) throw InsufficientData("empty test set");

  EvalReport report;
  report.labels = model.group_labels();
  auto label_index = [&report](const std::string& label) {
    const auto it =
        std::lower_bound(report.labels.begin(), report.labels.end(), label);
    if (it == report.labels.end() || *it != label) {
      throw InvalidArgument("label '" + label +
                            "' is not part of the trained group set");
    }
    return static_cast<std::size_t>(it - report.labels.begin());
  };
  const std::size_t k = report.labels.size();
  report.voice_confusion.assign(k, std::vector<std::size_t>(k, 0));
  report.image_confusion.assign(k, std::vector<std::size_t>(k, 0));

  std::size_t voice_hits = 0, image_hits = 0, overall_hits = 0;
  for (const SamplePair& pair : test_pairs) {
    check_pair(pair, model.config.input_dim);
    const std::size_t true_idx = label_index(pair.group);

    const Vector voice_feat = model.voice_mnn.encode(pair.voice);
    const Vector image_feat = model.image_mnn.encode(pair.image);
    EvalRecord rec;
    rec.id = pair.id;
    rec.true_group = pair.group;
    rec.voice_predicted = model.voice_clusters.classify(voice_feat).first;
    rec.image_predicted = model.image_clusters.classify(image_feat).first;

    const Vector mapped =
        forward(model.mappers.at(rec.voice_predicted), voice_feat).back();
    rec.mapped_predicted = model.image_clusters.classify(mapped).first;

    const bool routed = rec.voice_predicted == pair.group;
    rec.overall_correct = routed && rec.mapped_predicted == pair.group;

    ++report.voice_confusion[true_idx][label_index(rec.voice_predicted)];
    ++report.image_confusion[true_idx][label_index(rec.image_predicted)];
    voice_hits += routed;
    image_hits += rec.image_predicted == pair.group;
    overall_hits += rec.overall_correct;
    report.records.push_back(std::move(rec));
  }

  const double n = static_cast<double>(test_pairs.size());
  report.voice_accuracy = static_cast<double>(voice_hits) / n;
  report.image_accuracy = static_cast<double>(image_hits) / n;
  report.overall_efficiency = static_cast<double>(overall_hits) / n;
  return report;
}

}  // namespace mnn
