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

#include "mnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "mnn/audio.hpp"
#include "mnn/error.hpp"
#include "mnn/image.hpp"
#include "mnn/rng.hpp"

namespace mnn {
namespace {

constexpr std::size_t kPrototypeRedrawLimit = 1000;

bool is_plain_label(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

double min_pairwise_distance(const std::vector<Vector>& protos,
                             const Vector& candidate) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& p : protos) {
    double s = 0.0;
    for (std::size_t d = 0; d < p.size(); ++d) {
      const double diff = p[d] - candidate[d];
      s += diff * diff;
    }
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

// Draws prototypes uniform in [-1, 1]^dim, redrawing until each one keeps
// the required separation from the ones already placed.
std::vector<Vector> draw_prototypes(Rng& rng, std::size_t count,
                                    std::size_t dim, double separation) {
  std::vector<Vector> protos;
  protos.reserve(count);
  while (protos.size() < count) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kPrototypeRedrawLimit; ++attempt) {
      Vector candidate(dim);
      for (double& v : candidate) v = rng.uniform(-1.0, 1.0);
      if (protos.empty() ||
          min_pairwise_distance(protos, candidate) >= separation) {
        protos.push_back(std::move(candidate));
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw InvalidArgument(
          "invalid spec: cannot place prototypes with separation " +
          std::to_string(separation) + " in dimension " + std::to_string(dim));
    }
  }
  return protos;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (groups.size() < 2) throw InvalidArgument("need at least two groups");
  std::set<std::string> seen;
  for (const std::string& g : groups) {
    if (!is_plain_label(g)) {
      throw InvalidArgument("group labels must be non-empty and contain no "
                            "whitespace: '" + g + "'");
    }
    if (!seen.insert(g).second) {
      throw InvalidArgument("duplicate group label: " + g);
    }
  }
  if (pairs_per_group == 0) throw InvalidArgument("pairs_per_group must be >= 1");
  if (dim == 0) throw InvalidArgument("dim must be >= 1");
  if (!(noise_stddev >= 0.0)) throw InvalidArgument("noise_stddev must be >= 0");
  if (!(prototype_separation > 0.0)) {
    throw InvalidArgument("prototype_separation must be > 0");
  }
  if (!(noise_stddev < prototype_separation)) {
    throw InvalidArgument(
        "invalid spec: noise_stddev must stay below prototype_separation");
  }
}

std::vector<SamplePair> generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng proto_rng(derive_seed(spec.prototype_seed, 0x70));
  const std::vector<Vector> voice_protos =
      draw_prototypes(proto_rng, spec.groups.size(), spec.dim,
                      spec.prototype_separation);
  const std::vector<Vector> image_protos =
      draw_prototypes(proto_rng, spec.groups.size(), spec.dim,
                      spec.prototype_separation);

  std::vector<SamplePair> pairs;
  pairs.reserve(spec.groups.size() * spec.pairs_per_group);
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    Rng noise_rng(derive_seed(spec.prototype_seed, 0x100 + g));
    for (std::size_t i = 0; i < spec.pairs_per_group; ++i) {
      SamplePair pair;
      pair.group = spec.groups[g];
      pair.id = spec.groups[g] + "-" + std::to_string(i);
      pair.voice.resize(spec.dim);
      pair.image.resize(spec.dim);
      for (std::size_t d = 0; d < spec.dim; ++d) {
        pair.voice[d] = std::clamp(
            voice_protos[g][d] + noise_rng.normal(0.0, spec.noise_stddev),
            -1.0, 1.0);
      }
      for (std::size_t d = 0; d < spec.dim; ++d) {
        pair.image[d] = std::clamp(
            image_protos[g][d] + noise_rng.normal(0.0, spec.noise_stddev),
            -1.0, 1.0);
      }
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

std::pair<std::vector<SamplePair>, std::vector<SamplePair>> split(
    const std::vector<SamplePair>& pairs, std::size_t train_count,
    std::uint64_t seed) {
  if (train_count == 0 || train_count >= pairs.size()) {
    throw InvalidArgument("train_count must satisfy 0 < train_count < " +
                          std::to_string(pairs.size()));
  }

  // Member indices per group, groups in sorted label order.
  std::map<std::string, std::vector<std::size_t>> by_group;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    by_group[pairs[i].group].push_back(i);
  }

  // Proportional quotas by largest remainder so the totals match exactly.
  struct Quota {
    const std::string* group;
    std::size_t base;
    double remainder;
  };
  std::vector<Quota> quotas;
  std::size_t assigned = 0;
  for (const auto& [group, members] : by_group) {
    const double exact = static_cast<double>(train_count) *
                         static_cast<double>(members.size()) /
                         static_cast<double>(pairs.size());
    const std::size_t base =
        std::min(static_cast<std::size_t>(exact), members.size());
    quotas.push_back({&group, base, exact - static_cast<double>(base)});
    assigned += base;
  }
  std::vector<std::size_t> order(quotas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a].remainder > quotas[b].remainder;
  });
  for (std::size_t i = 0; assigned < train_count; i = (i + 1) % order.size()) {
    Quota& q = quotas[order[i]];
    if (q.base < by_group.at(*q.group).size()) {
      ++q.base;
      ++assigned;
    }
  }

  std::pair<std::vector<SamplePair>, std::vector<SamplePair>> out;
  std::size_t group_index = 0;
  for (auto& [group, members] : by_group) {
    Rng rng(derive_seed(seed, 0x200 + group_index));
    rng.shuffle(members);
    const std::size_t quota = quotas[group_index].base;
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < quota ? out.first : out.second).push_back(pairs[members[i]]);
    }
    ++group_index;
  }
  return out;
}

std::vector<Vector> load_rawvec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open RAWVEC file: " + path.string());
  std::vector<Vector> vectors;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    Vector v;
    double x;
    while (ss >> x) v.push_back(x);
    if (!ss.eof()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": not a decimal number");
    }
    if (!vectors.empty() && v.size() != vectors.front().size()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": dimension mismatch (" + std::to_string(v.size()) +
                        " vs " + std::to_string(vectors.front().size()) + ")");
    }
    vectors.push_back(std::move(v));
  }
  if (vectors.empty()) {
    throw FormatError("RAWVEC file holds no vectors: " + path.string());
  }
  return vectors;
}

void save_rawvec(const std::filesystem::path& path,
                 const std::vector<Vector>& vectors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write RAWVEC file: " + path.string());
  for (const Vector& v : vectors) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ' ';
      out << format_double(v[i]);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing RAWVEC file: " + path.string());
}

namespace {

Vector load_vector_column(const std::filesystem::path& path, bool is_voice,
                          std::size_t input_dim, std::size_t image_width,
                          std::size_t image_height) {
  const std::string ext = path.extension().string();
  Vector v;
  if (ext == ".wav") {
    v = load_voice(path, input_dim);
  } else if (ext == ".pgm") {
    v = load_image(path, image_width, image_height);
  } else {
    const std::vector<Vector> rows = load_rawvec(path);
    if (rows.size() != 1) {
      throw FormatError("expected a single vector in " + path.string() +
                        ", found " + std::to_string(rows.size()));
    }
    v = rows.front();
  }
  if (v.size() != input_dim) {
    throw ShapeError(path.string() + ": expected " +
                     std::to_string(input_dim) + " entries, got " +
                     std::to_string(v.size()));
  }
  if (!all_within(v, -1.0, 1.0)) {
    throw DomainError(path.string() + ": entries must lie in [-1, 1]");
  }
  (void)is_voice;
  return v;
}

}  // namespace

std::vector<SamplePair> load_manifest(const std::filesystem::path& path,
                                      std::size_t input_dim,
                                      std::size_t image_width,
                                      std::size_t image_height) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open manifest: " + path.string());
  const std::filesystem::path base = path.parent_path();

  std::vector<SamplePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string voice_path, image_path, label;
    if (!(ss >> voice_path >> image_path >> label)) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected '<voice> <image> <label>'");
    }
    std::string extra;
    if (ss >> extra) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": trailing tokens");
    }
    auto resolve = [&base](const std::string& p) {
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    SamplePair pair;
    pair.voice = load_vector_column(resolve(voice_path), true, input_dim,
                                    image_width, image_height);
    pair.image = load_vector_column(resolve(image_path), false, input_dim,
                                    image_width, image_height);
    pair.group = label;
    pair.id = std::filesystem::path(voice_path).stem().string();
    pairs.push_back(std::move(pair));
  }
  if (pairs.empty()) {
    throw FormatError("manifest holds no records: " + path.string());
  }
  return pairs;
}

std::filesystem::path write_dataset(const std::filesystem::path& dir,
                                    const std::vector<SamplePair>& pairs) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path manifest_path = dir / "manifest.txt";
  std::ofstream manifest(manifest_path, std::ios::binary);
  if (!manifest) {
    throw IoError("cannot write manifest: " + manifest_path.string());
  }
  for (const SamplePair& pair : pairs) {
    const std::string voice_name = "voice_" + pair.id + ".rawvec";
    const std::string image_name = "image_" + pair.id + ".rawvec";
    save_rawvec(dir / voice_name, {pair.voice});
    save_rawvec(dir / image_name, {pair.image});
    manifest << voice_name << ' ' << image_name << ' ' << pair.group << '\n';
  }
  if (!manifest) {
    throw IoError("failed writing manifest: " + manifest_path.string());
  }
  return manifest_path;
}

std::vector<std::string> distinct_groups(
    const std::vector<SamplePair>& pairs) {
  std::set<std::string> labels;
  for (const SamplePair& p : pairs) labels.insert(p.group);
  return {labels.begin(), labels.end()};
}

}  // namespace mnn
