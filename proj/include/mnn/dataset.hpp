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
// Paired voice/image samples: the synthetic generator, stratified
// train/test splitting, RAWVEC vector files, and dataset manifests.

#ifndef MNN_DATASET_HPP_
#define MNN_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mnn/linalg.hpp"

namespace mnn {

// One training/evaluation item: a voice vector paired with an image vector,
// both rescaled to [-1, 1], plus the pattern-group label.
struct SamplePair {
  Vector voice;
  Vector image;
  std::string group;
  std::string id;
};

struct SyntheticSpec {
  std::vector<std::string> groups = {"face", "window", "garden"};
  std::size_t pairs_per_group = 150;
  std::size_t dim = 510;
  std::uint64_t prototype_seed = 0;
  double noise_stddev = 0.25;
  double prototype_separation = 4.0;

  void validate() const;
};

// Draws one voice and one image prototype per group (pairwise separated by
// at least prototype_separation within each modality), then emits
// pairs_per_group samples per group as prototype + clamped Gaussian noise.
// Pure function of the spec.
std::vector<SamplePair> generate_synthetic(const SyntheticSpec& spec);

// Seeded group-stratified split into train_count training pairs and the
// remaining test pairs; the two sides partition the input by id.
std::pair<std::vector<SamplePair>, std::vector<SamplePair>> split(
    const std::vector<SamplePair>& pairs, std::size_t train_count,
    std::uint64_t seed);

// RAWVEC: one vector per line, whitespace-separated decimals. All lines
// must share one dimension.
std::vector<Vector> load_rawvec(const std::filesystem::path& path);
void save_rawvec(const std::filesystem::path& path,
                 const std::vector<Vector>& vectors);

// Manifest: one record per line, `<voice-path> <image-path> <group-label>`.
// Relative paths are resolved against the manifest's directory. Voice and
// image columns may be .wav / .pgm files or single-line RAWVEC files; every
// vector is validated against input_dim and [-1, 1].
std::vector<SamplePair> load_manifest(const std::filesystem::path& path,
                                      std::size_t input_dim,
                                      std::size_t image_width,
                                      std::size_t image_height);

// Writes `pairs` as RAWVEC files plus a manifest under `dir`. Returns the
// manifest path.
std::filesystem::path write_dataset(const std::filesystem::path& dir,
                                    const std::vector<SamplePair>& pairs);

// Sorted distinct group labels.
std::vector<std::string> distinct_groups(const std::vector<SamplePair>& pairs);

}  // namespace mnn

#endif  // MNN_DATASET_HPP_
