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

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "mnn/audio.hpp"
#include "mnn/dataset.hpp"
#include "mnn/error.hpp"
#include "mnn/image.hpp"
#include "mnn/rng.hpp"
#include "test_util.hpp"

using namespace mnn;
using mnn_test::TempDir;
using mnn_test::write_wav16;

TEST_SUITE_BEGIN("ingest");

TEST_CASE("resample_linear: identity, interpolation, endpoints") {
  CHECK(resample_linear({1.5, -2.5}, 2) == Vector{1.5, -2.5});
  CHECK(resample_linear({0.0, 1.0, 2.0, 3.0}, 3) == Vector{0.0, 1.5, 3.0});
  const Vector up = resample_linear({0.0, 1.0}, 5);
  CHECK(up == Vector{0.0, 0.25, 0.5, 0.75, 1.0});

  Rng rng(1);
  Vector noisy(777);
  for (double& v : noisy) v = rng.uniform(-1.0, 1.0);
  const Vector out = resample_linear(noisy, 510);
  REQUIRE(out.size() == 510);
  CHECK(out.front() == noisy.front());
  CHECK(out.back() == noisy.back());
}

TEST_CASE("resample_linear preserves constant signals exactly") {
  const Vector constant(1234, 0.1234567);
  for (std::size_t n : {2, 3, 17, 510, 2000}) {
    const Vector out = resample_linear(constant, n);
    REQUIRE(out.size() == n);
    for (double v : out) CHECK(v == 0.1234567);
  }
}

TEST_CASE("resample_linear argument validation") {
  CHECK_THROWS_AS(resample_linear({1.0}, 5), InvalidArgument);
  CHECK_THROWS_AS(resample_linear({1.0, 2.0}, 1), InvalidArgument);
}

TEST_CASE("WAV loading: silence, full scale, resampling to 510") {
  TempDir dir;

  write_wav16(dir.file("silence.wav"), std::vector<std::int16_t>(2000, 0),
              2000);
  const Vector silence = load_voice(dir.file("silence.wav"));
  REQUIRE(silence.size() == 510);
  for (double v : silence) CHECK(v == 0.0);

  write_wav16(dir.file("full.wav"), std::vector<std::int16_t>(100, 32767),
              2000);
  const Vector full = load_voice(dir.file("full.wav"));
  REQUIRE(full.size() == 510);
  for (double v : full) CHECK(v == doctest::Approx(32767.0 / 32768.0));

  const AudioClip clip = load_wav(dir.file("silence.wav"));
  CHECK(clip.sample_rate == 2000);
  CHECK(clip.samples.size() == 2000);
}

TEST_CASE("WAV loading rejects unsupported encodings") {
  TempDir dir;

  SUBCASE("stereo") {
    // Patch the channel count in a valid header.
    write_wav16(dir.file("x.wav"), {0, 0, 0, 0}, 8000);
    std::fstream f(dir.file("x.wav"),
                   std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(22);
    const char two[2] = {2, 0};
    f.write(two, 2);
    f.close();
    CHECK_THROWS_AS(load_wav(dir.file("x.wav")), FormatError);
  }
  SUBCASE("not RIFF at all") {
    std::ofstream(dir.file("junk.wav")) << "definitely not audio";
    CHECK_THROWS_AS(load_wav(dir.file("junk.wav")), FormatError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_wav(dir.file("nope.wav")), FormatError);
  }
  SUBCASE("empty data chunk") {
    write_wav16(dir.file("empty.wav"), {}, 8000);
    CHECK_THROWS_AS(load_wav(dir.file("empty.wav")), InvalidArgument);
  }
}

TEST_CASE("rescale_gray endpoints and arithmetic") {
  CHECK(rescale_gray(0) == -1.0);
  CHECK(rescale_gray(255) == 1.0);
  CHECK(rescale_gray(102) == doctest::Approx(-0.2));
  CHECK_THROWS_AS(rescale_gray(-1), InvalidArgument);
  CHECK_THROWS_AS(rescale_gray(256), InvalidArgument);
}

TEST_CASE("rescale_gray is strictly monotone and inverts exactly") {
  double prev = -2.0;
  for (int i = 0; i <= 255; ++i) {
    const double v = rescale_gray(i);
    CHECK(v > prev);
    prev = v;
    CHECK(gray_from_unit(v) == static_cast<std::uint8_t>(i));
  }
}

TEST_CASE("PGM round trip and uniform image loading") {
  TempDir dir;
  GrayImage img;
  img.width = 17;
  img.height = 30;
  img.pixels.assign(510, 255);
  write_pgm(dir.file("white.pgm"), img);

  const GrayImage back = load_pgm(dir.file("white.pgm"));
  CHECK(back.width == 17);
  CHECK(back.height == 30);
  CHECK(back.pixels == img.pixels);

  const Vector v = load_image(dir.file("white.pgm"));
  REQUIRE(v.size() == 510);
  for (double x : v) CHECK(x == 1.0);
}

TEST_CASE("PGM parsing handles comments and rejects other formats") {
  TempDir dir;
  {
    std::ofstream out(dir.file("c.pgm"), std::ios::binary);
    out << "P5\n# a comment line\n2 # trailing\n2\n255\n";
    const unsigned char px[4] = {0, 64, 128, 255};
    out.write(reinterpret_cast<const char*>(px), 4);
  }
  const GrayImage img = load_pgm(dir.file("c.pgm"));
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.pixels == std::vector<std::uint8_t>{0, 64, 128, 255});

  {
    std::ofstream out(dir.file("ascii.pgm"));
    out << "P2\n2 2\n255\n0 0 0 0\n";
  }
  CHECK_THROWS_AS(load_pgm(dir.file("ascii.pgm")), FormatError);

  {
    std::ofstream out(dir.file("short.pgm"), std::ios::binary);
    out << "P5\n4 4\n255\n";
    out << "ab";
  }
  CHECK_THROWS_AS(load_pgm(dir.file("short.pgm")), FormatError);
}

TEST_CASE("bilinear resize matches a per-pixel oracle on a 2x downsize") {
  // 34x60 image with constant rows (value = row index * 4).
  GrayImage src;
  src.width = 34;
  src.height = 60;
  src.pixels.resize(34 * 60);
  for (std::size_t y = 0; y < 60; ++y) {
    for (std::size_t x = 0; x < 34; ++x) {
      src.pixels[y * 34 + x] = static_cast<std::uint8_t>(y * 4);
    }
  }
  const GrayImageD dst = bilinear_resize(src, 17, 30);
  REQUIRE(dst.pixels.size() == 510);

  // Independent direct bilinear evaluation at a handful of pixels.
  auto oracle = [&src](std::size_t dx, std::size_t dy) {
    const double sx = (static_cast<double>(dx) + 0.5) * 2.0 - 0.5;
    const double sy = (static_cast<double>(dy) + 0.5) * 2.0 - 0.5;
    const std::size_t x0 = static_cast<std::size_t>(sx);
    const std::size_t y0 = static_cast<std::size_t>(sy);
    const double fx = sx - static_cast<double>(x0);
    const double fy = sy - static_cast<double>(y0);
    auto at = [&src](std::size_t y, std::size_t x) {
      return static_cast<double>(src.pixels[y * src.width + x]);
    };
    return (1.0 - fy) * ((1.0 - fx) * at(y0, x0) + fx * at(y0, x0 + 1)) +
           fy * ((1.0 - fx) * at(y0 + 1, x0) + fx * at(y0 + 1, x0 + 1));
  };
  for (std::size_t dy : {0u, 1u, 7u, 14u, 28u}) {
    for (std::size_t dx : {0u, 3u, 9u, 15u}) {
      CHECK(dst.pixels[dy * 17 + dx] ==
            doctest::Approx(oracle(dx, dy)).epsilon(1e-12));
    }
  }
  // Constant rows stay constant across each output row.
  for (std::size_t dy = 0; dy < 30; ++dy) {
    for (std::size_t dx = 1; dx < 17; ++dx) {
      CHECK(dst.pixels[dy * 17 + dx] ==
            doctest::Approx(dst.pixels[dy * 17]).epsilon(1e-12));
    }
  }
}

TEST_CASE("synthetic generation: counts, determinism, zero noise") {
  SyntheticSpec spec;
  spec.pairs_per_group = 4;
  spec.dim = 32;
  spec.noise_stddev = 0.1;
  spec.prototype_separation = 1.0;
  spec.prototype_seed = 5;

  const auto pairs = generate_synthetic(spec);
  REQUIRE(pairs.size() == 12);
  std::set<std::string> ids;
  for (const SamplePair& p : pairs) {
    CHECK(p.voice.size() == 32);
    CHECK(p.image.size() == 32);
    CHECK(all_within(p.voice, -1.0, 1.0));
    CHECK(all_within(p.image, -1.0, 1.0));
    ids.insert(p.id);
  }
  CHECK(ids.size() == 12);

  const auto again = generate_synthetic(spec);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].voice == again[i].voice);
    CHECK(pairs[i].image == again[i].image);
    CHECK(pairs[i].group == again[i].group);
  }

  spec.noise_stddev = 0.0;
  const auto clean = generate_synthetic(spec);
  for (std::size_t g = 0; g < 3; ++g) {
    const SamplePair& first = clean[g * 4];
    for (std::size_t i = 1; i < 4; ++i) {
      CHECK(clean[g * 4 + i].voice == first.voice);
      CHECK(clean[g * 4 + i].image == first.image);
    }
  }
}

TEST_CASE("synthetic spec validation") {
  SyntheticSpec spec;
  spec.groups = {"solo"};
  CHECK_THROWS_AS(generate_synthetic(spec), InvalidArgument);

  spec.groups = {"a", "b"};
  spec.noise_stddev = 2.0;
  spec.prototype_separation = 1.0;
  CHECK_THROWS_AS(generate_synthetic(spec), InvalidArgument);

  // Geometrically impossible separation in a tiny box.
  SyntheticSpec cramped;
  cramped.groups = {"a", "b", "c", "d", "e"};
  cramped.dim = 1;
  cramped.pairs_per_group = 1;
  cramped.noise_stddev = 0.0;
  cramped.prototype_separation = 1.5;
  CHECK_THROWS_AS(generate_synthetic(cramped), InvalidArgument);
}

TEST_CASE("split: partition, stratification, determinism") {
  SyntheticSpec spec;
  spec.pairs_per_group = 150;
  spec.dim = 8;
  spec.prototype_separation = 1.0;
  spec.noise_stddev = 0.05;
  const auto pairs = generate_synthetic(spec);
  REQUIRE(pairs.size() == 450);

  const auto [train, test] = split(pairs, 300, 99);
  CHECK(train.size() == 300);
  CHECK(test.size() == 150);

  std::set<std::string> train_ids, test_ids;
  for (const auto& p : train) train_ids.insert(p.id);
  for (const auto& p : test) test_ids.insert(p.id);
  CHECK(train_ids.size() == 300);
  CHECK(test_ids.size() == 150);
  for (const std::string& id : test_ids) CHECK(train_ids.count(id) == 0);

  // Balanced groups contribute exactly train_count / k each.
  std::map<std::string, int> counts;
  for (const auto& p : train) counts[p.group]++;
  for (const auto& [group, count] : counts) CHECK(count == 100);

  const auto [train2, test2] = split(pairs, 300, 99);
  for (std::size_t i = 0; i < train.size(); ++i) {
    CHECK(train[i].id == train2[i].id);
  }

  CHECK_THROWS_AS(split(pairs, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(split(pairs, 450, 1), InvalidArgument);
}

TEST_CASE("split stratification stays within one of proportional") {
  SyntheticSpec spec;
  spec.groups = {"a", "b", "c"};
  spec.pairs_per_group = 5;
  spec.dim = 4;
  spec.noise_stddev = 0.01;
  spec.prototype_separation = 0.5;
  const auto pairs = generate_synthetic(spec);
  const auto [train, test] = split(pairs, 7, 3);
  CHECK(train.size() == 7);
  std::map<std::string, int> counts;
  for (const auto& p : train) counts[p.group]++;
  for (const auto& [group, count] : counts) {
    CHECK(count >= 2);
    CHECK(count <= 3);
  }
}

TEST_CASE("rawvec round trip and validation") {
  TempDir dir;
  const std::vector<Vector> vecs = {{0.5, -0.25, 1.0 / 3.0},
                                    {1e-17, 2.0, -3.5}};
  save_rawvec(dir.file("v.rawvec"), vecs);
  const auto back = load_rawvec(dir.file("v.rawvec"));
  REQUIRE(back.size() == 2);
  CHECK(back[0] == vecs[0]);  // 17 significant digits round-trip exactly
  CHECK(back[1] == vecs[1]);

  std::ofstream(dir.file("bad.rawvec")) << "0.5 0.25\n0.5\n";
  CHECK_THROWS_AS(load_rawvec(dir.file("bad.rawvec")), FormatError);
  std::ofstream(dir.file("junk.rawvec")) << "0.5 pelican\n";
  CHECK_THROWS_AS(load_rawvec(dir.file("junk.rawvec")), FormatError);
  std::ofstream(dir.file("empty.rawvec")) << "\n\n";
  CHECK_THROWS_AS(load_rawvec(dir.file("empty.rawvec")), FormatError);
}

TEST_CASE("dataset writing + manifest loading round trip") {
  TempDir dir;
  SyntheticSpec spec;
  spec.groups = {"face", "window"};
  spec.pairs_per_group = 3;
  spec.dim = 12;
  spec.noise_stddev = 0.1;
  spec.prototype_separation = 1.0;
  const auto pairs = generate_synthetic(spec);
  const auto manifest = write_dataset(dir.path(), pairs);

  const auto loaded = load_manifest(manifest, 12, 4, 3);
  REQUIRE(loaded.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(loaded[i].voice == pairs[i].voice);
    CHECK(loaded[i].image == pairs[i].image);
    CHECK(loaded[i].group == pairs[i].group);
  }
}

TEST_CASE("manifest loading accepts wav and pgm columns") {
  TempDir dir;
  write_wav16(dir.file("hello.wav"), std::vector<std::int16_t>(50, 16384),
              2000);
  GrayImage img;
  img.width = 3;
  img.height = 4;
  img.pixels.assign(12, 128);
  write_pgm(dir.file("pic.pgm"), img);
  std::ofstream(dir.file("m.txt")) << "hello.wav pic.pgm face\n";

  const auto pairs = load_manifest(dir.file("m.txt"), 12, 3, 4);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].group == "face");
  CHECK(pairs[0].id == "hello");
  for (double v : pairs[0].voice) CHECK(v == doctest::Approx(0.5));
  for (double v : pairs[0].image) {
    CHECK(v == doctest::Approx(128.0 / 127.5 - 1.0));
  }
}

TEST_CASE("manifest loading rejects malformed records") {
  TempDir dir;
  std::ofstream(dir.file("m1.txt")) << "only-two columns\n";
  CHECK_THROWS_AS(load_manifest(dir.file("m1.txt"), 4, 2, 2), FormatError);

  std::ofstream(dir.file("m2.txt")) << "a.rawvec b.rawvec c extra\n";
  CHECK_THROWS_AS(load_manifest(dir.file("m2.txt"), 4, 2, 2), FormatError);

  // Out-of-range entries in a rawvec column.
  save_rawvec(dir.file("big.rawvec"), {{2.0, 0.0, 0.0, 0.0}});
  save_rawvec(dir.file("ok.rawvec"), {{0.0, 0.0, 0.0, 0.0}});
  std::ofstream(dir.file("m3.txt")) << "big.rawvec ok.rawvec face\n";
  CHECK_THROWS_AS(load_manifest(dir.file("m3.txt"), 4, 2, 2), DomainError);

  // Dimension mismatch.
  std::ofstream(dir.file("m4.txt")) << "ok.rawvec ok.rawvec face\n";
  CHECK_THROWS_AS(load_manifest(dir.file("m4.txt"), 5, 5, 1), ShapeError);
}

TEST_SUITE_END();
