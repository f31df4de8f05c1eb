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
// Voice ingestion: 16-bit PCM mono WAV decoding and linear resampling down
// to a fixed number of equally spaced points.

#ifndef MNN_AUDIO_HPP_
#define MNN_AUDIO_HPP_

#include <filesystem>
#include <vector>

#include "mnn/linalg.hpp"

namespace mnn {

struct AudioClip {
  Vector samples;  // amplitudes normalized to [-1, 1]
  std::uint32_t sample_rate = 0;
};

// Strict subset of RIFF/WAVE: PCM, 16-bit signed little-endian, mono.
// Anything else is a FormatError; an empty data chunk is InvalidArgument.
AudioClip load_wav(const std::filesystem::path& path);

// Piecewise-linear interpolation of `signal` at n equally spaced positions
// spanning [0, len-1]; both endpoints and constant signals are preserved
// exactly. Requires len >= 2 and n >= 2.
Vector resample_linear(const Vector& signal, std::size_t n);

// load_wav + resample_linear; the paper-shaped voice input path.
Vector load_voice(const std::filesystem::path& path,
                  std::size_t target_dim = 510);

}  // namespace mnn

#endif  // MNN_AUDIO_HPP_
