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
// Image ingestion: binary PGM (P5, maxval 255), bilinear resize to a fixed
// grid, and the 0..255 -> [-1, 1] intensity rescale.

#ifndef MNN_IMAGE_HPP_
#define MNN_IMAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mnn/linalg.hpp"

namespace mnn {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, len == width * height
};

// Intermediate image with interpolated intensities still on the 0..255 scale.
struct GrayImageD {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;
};

GrayImage load_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

// Bilinear resample with half-pixel-center sampling; identity when the
// sizes already match.
GrayImageD bilinear_resize(const GrayImage& src, std::size_t width,
                           std::size_t height);

// intensity / 127.5 - 1, so 0 -> -1.0 and 255 -> +1.0 exactly.
double rescale_gray(int intensity);

// Inverse map: round((v + 1) * 127.5), clamped to 0..255.
std::uint8_t gray_from_unit(double v);

// load_pgm + bilinear resize + per-pixel rescale, row-major output.
Vector load_image(const std::filesystem::path& path, std::size_t width = 17,
                  std::size_t height = 30);

// Clamps to [-1, 1], inverts the rescale, and writes a PGM.
void write_image_from_unit(const std::filesystem::path& path,
                           const Vector& values, std::size_t width,
                           std::size_t height);

}  // namespace mnn

#endif  // MNN_IMAGE_HPP_
