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

#include "mnn/audio.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "mnn/error.hpp"

namespace mnn {
namespace {

constexpr double kInt16FullScale = 32768.0;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(static_cast<std::uint32_t>(p[0]) |
                                    (static_cast<std::uint32_t>(p[1]) << 8));
}

}  // namespace

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open WAV file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file: " + path.string());
  }

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_size = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      throw FormatError("truncated WAV chunk in " + path.string());
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw FormatError("short fmt chunk");
      const std::uint16_t audio_format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (audio_format != 1) {
        throw FormatError("unsupported WAV encoding (need PCM)");
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr) {
    throw FormatError("WAV file missing fmt or data chunk: " + path.string());
  }
  if (channels != 1) throw FormatError("unsupported WAV: need mono");
  if (bits != 16) throw FormatError("unsupported WAV: need 16-bit samples");
  if (sample_rate == 0) throw FormatError("WAV sample rate is zero");
  if (data_size < 2) throw InvalidArgument("empty audio: " + path.string());

  AudioClip clip;
  clip.sample_rate = sample_rate;
  const std::size_t n = data_size / 2;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int16_t s = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(data[2 * i]) |
        (static_cast<std::uint16_t>(data[2 * i + 1]) << 8));
    clip.samples[i] = static_cast<double>(s) / kInt16FullScale;
  }
  return clip;
}

Vector resample_linear(const Vector& signal, std::size_t n) {
  if (signal.size() < 2) {
    throw InvalidArgument("resample_linear needs at least two samples");
  }
  if (n < 2) throw InvalidArgument("resample_linear needs n >= 2");

  const std::size_t len = signal.size();
  Vector out(n);
  const double span = static_cast<double>(len - 1);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * span / denom;
    std::size_t j = static_cast<std::size_t>(t);
    if (j >= len - 1) {
      out[i] = signal[len - 1];
      continue;
    }
    const double frac = t - static_cast<double>(j);
    out[i] = signal[j] + frac * (signal[j + 1] - signal[j]);
  }
  return out;
}

Vector load_voice(const std::filesystem::path& path, std::size_t target_dim) {
  const AudioClip clip = load_wav(path);
  return resample_linear(clip.samples, target_dim);
}

}  // namespace mnn
