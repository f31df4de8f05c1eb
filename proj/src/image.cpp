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

#include "mnn/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "mnn/error.hpp"

namespace mnn {
namespace {

// Reads the next whitespace-delimited token, skipping '#' comment lines.
std::string next_pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

std::size_t parse_pgm_size(const std::string& tok, const char* what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError(std::string("bad PGM ") + what + ": '" + tok + "'");
  }
  const unsigned long v = std::stoul(tok);
  if (v == 0) throw FormatError(std::string("zero PGM ") + what);
  return static_cast<std::size_t>(v);
}

}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open PGM file: " + path.string());

  const std::string magic = next_pgm_token(in);
  if (magic != "P5") {
    throw FormatError("unsupported image format (need binary PGM P5): " +
                      path.string());
  }
  GrayImage img;
  img.width = parse_pgm_size(next_pgm_token(in), "width");
  img.height = parse_pgm_size(next_pgm_token(in), "height");
  const std::size_t maxval = parse_pgm_size(next_pgm_token(in), "maxval");
  if (maxval != 255) {
    throw FormatError("unsupported PGM maxval (need 255): " +
                      std::to_string(maxval));
  }
  // The header terminates with exactly one whitespace byte, already consumed
  // by the tokenizer.
  img.pixels.resize(img.width * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.pixels.size()) {
    throw FormatError("truncated PGM pixel data: " + path.string());
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  if (image.pixels.size() != image.width * image.height) {
    throw ShapeError("PGM pixel buffer does not match its dimensions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write PGM file: " + path.string());
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError("failed writing PGM file: " + path.string());
}

GrayImageD bilinear_resize(const GrayImage& src, std::size_t width,
                           std::size_t height) {
  if (src.pixels.size() != src.width * src.height) {
    throw ShapeError("source pixel buffer does not match its dimensions");
  }
  if (width == 0 || height == 0) {
    throw InvalidArgument("target image size must be positive");
  }

  GrayImageD dst;
  dst.width = width;
  dst.height = height;
  dst.pixels.resize(width * height);

  const double sx = static_cast<double>(src.width) / static_cast<double>(width);
  const double sy =
      static_cast<double>(src.height) / static_cast<double>(height);
  auto at = [&src](std::size_t y, std::size_t x) {
    return static_cast<double>(src.pixels[y * src.width + x]);
  };

  for (std::size_t y = 0; y < height; ++y) {
    double fy = (static_cast<double>(y) + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(src.height - 1));
    const std::size_t y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < width; ++x) {
      double fx = (static_cast<double>(x) + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(src.width - 1));
      const std::size_t x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - static_cast<double>(x0);
      const double top = (1.0 - wx) * at(y0, x0) + wx * at(y0, x1);
      const double bottom = (1.0 - wx) * at(y1, x0) + wx * at(y1, x1);
      dst.pixels[y * width + x] = (1.0 - wy) * top + wy * bottom;
    }
  }
  return dst;
}

double rescale_gray(int intensity) {
  if (intensity < 0 || intensity > 255) {
    throw InvalidArgument("intensity out of range 0..255: " +
                          std::to_string(intensity));
  }
  return static_cast<double>(intensity) / 127.5 - 1.0;
}

std::uint8_t gray_from_unit(double v) {
  const double scaled = std::round((v + 1.0) * 127.5);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

Vector load_image(const std::filesystem::path& path, std::size_t width,
                  std::size_t height) {
  const GrayImage img = load_pgm(path);
  const GrayImageD resized = bilinear_resize(img, width, height);
  Vector out(resized.pixels.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = resized.pixels[i] / 127.5 - 1.0;
  }
  return out;
}

void write_image_from_unit(const std::filesystem::path& path,
                           const Vector& values, std::size_t width,
                           std::size_t height) {
  if (values.size() != width * height) {
    throw ShapeError("vector length does not match image dimensions");
  }
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    img.pixels[i] = gray_from_unit(std::clamp(values[i], -1.0, 1.0));
  }
  write_pgm(path, img);
}

}  // namespace mnn
