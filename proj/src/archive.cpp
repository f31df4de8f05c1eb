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

#include "mnn/archive.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "mnn/error.hpp"

namespace mnn {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* route_by_name(RouteBy route) {
  return route == RouteBy::kTrueLabel ? "true-label" : "predicted-cluster";
}

RouteBy parse_route_by(const std::string& name) {
  if (name == "true-label") return RouteBy::kTrueLabel;
  if (name == "predicted-cluster") return RouteBy::kPredictedCluster;
  throw InvalidArgument("unknown route_by value: " + name);
}

namespace {

const char* activation_name(Activation a) {
  return a == Activation::kTanh ? "tanh" : "linear";
}

Activation parse_activation(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "linear") return Activation::kLinear;
  throw FormatError("unknown activation: " + name);
}

void write_train_config(std::ostream& out, const char* key,
                        const TrainConfig& cfg) {
  out << "config " << key << ' ' << format_double(cfg.learning_rate) << ' '
      << format_double(cfg.momentum) << ' ' << cfg.epochs << ' '
      << cfg.shuffle_seed << ' ' << cfg.loss_log_every << '\n';
}

void write_network(std::ostream& out, const Network& net) {
  out << "layers " << net.num_layers();
  for (std::size_t s : net.layer_sizes) out << ' ' << s;
  out << '\n';
  out << "activations";
  for (Activation a : net.activations) out << ' ' << activation_name(a);
  out << '\n';
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const Matrix& w = net.weights[l];
    out << "weights " << l << ' ' << w.rows << ' ' << w.cols << '\n';
    for (std::size_t r = 0; r < w.rows; ++r) {
      const double* row = w.row(r);
      for (std::size_t c = 0; c < w.cols; ++c) {
        if (c) out << ' ';
        out << format_double(row[c]);
      }
      out << '\n';
    }
    const Vector& b = net.biases[l];
    out << "biases " << l << ' ' << b.size() << '\n';
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) out << ' ';
      out << format_double(b[i]);
    }
    out << '\n';
  }
}

void write_kmeans(std::ostream& out, const KMeansModel& model) {
  const std::size_t dim =
      model.centroids.empty() ? 0 : model.centroids.front().size();
  out << "k " << model.k << " dim " << dim << '\n';
  out << "inertia " << format_double(model.inertia) << '\n';
  for (std::size_t c = 0; c < model.k; ++c) {
    out << "centroid " << c << ' ' << model.cluster_to_group[c] << '\n';
    const Vector& v = model.centroids[c];
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ' ';
      out << format_double(v[i]);
    }
    out << '\n';
  }
}

// Line-oriented reader with section context for error messages.
class Reader {
 public:
  explicit Reader(const std::string& text) : in_(text) {}

  void set_section(std::string name) { section_ = std::move(name); }

  std::string next_line() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of archive");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::vector<std::string> next_tokens() {
    std::istringstream ss(next_line());
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
  }

  // Expects `count` doubles on one line.
  void read_doubles(double* dst, std::size_t count) {
    const std::string line = next_line();
    const char* p = line.c_str();
    for (std::size_t i = 0; i < count; ++i) {
      char* end = nullptr;
      dst[i] = std::strtod(p, &end);
      if (end == p) fail("expected " + std::to_string(count) + " numbers");
      p = end;
    }
    while (*p == ' ') ++p;
    if (*p != '\0') fail("trailing data after numbers");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError("archive section '" + section_ + "': " + msg);
  }

  std::size_t to_size(const std::string& tok) {
    try {
      return static_cast<std::size_t>(std::stoull(tok));
    } catch (const std::exception&) {
      fail("expected an integer, got '" + tok + "'");
    }
  }

  double to_double(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) fail("expected a number");
    return v;
  }

 private:
  std::istringstream in_;
  std::string section_;
};

Network read_network(Reader& r) {
  Network net;
  auto layers = r.next_tokens();
  if (layers.size() < 2 || layers[0] != "layers") r.fail("expected 'layers'");
  const std::size_t n_layers = r.to_size(layers[1]);
  if (layers.size() != 2 + n_layers) r.fail("layer count mismatch");
  for (std::size_t i = 0; i < n_layers; ++i) {
    net.layer_sizes.push_back(r.to_size(layers[2 + i]));
  }

  auto acts = r.next_tokens();
  if (acts.empty() || acts[0] != "activations" ||
      acts.size() != n_layers) {  // "activations" + (n_layers - 1) entries
    r.fail("expected " + std::to_string(n_layers - 1) + " activations");
  }
  for (std::size_t i = 1; i < acts.size(); ++i) {
    try {
      net.activations.push_back(parse_activation(acts[i]));
    } catch (const FormatError& e) {
      r.fail(e.what());
    }
  }

  for (std::size_t l = 0; l + 1 < n_layers; ++l) {
    auto w_hdr = r.next_tokens();
    if (w_hdr.size() != 4 || w_hdr[0] != "weights" ||
        r.to_size(w_hdr[1]) != l) {
      r.fail("expected 'weights " + std::to_string(l) + " <rows> <cols>'");
    }
    Matrix w(r.to_size(w_hdr[2]), r.to_size(w_hdr[3]));
    if (w.rows != net.layer_sizes[l + 1] || w.cols != net.layer_sizes[l]) {
      r.fail("weight shape disagrees with layer sizes");
    }
    for (std::size_t row = 0; row < w.rows; ++row) {
      r.read_doubles(w.row(row), w.cols);
    }
    net.weights.push_back(std::move(w));

    auto b_hdr = r.next_tokens();
    if (b_hdr.size() != 3 || b_hdr[0] != "biases" ||
        r.to_size(b_hdr[1]) != l) {
      r.fail("expected 'biases " + std::to_string(l) + " <len>'");
    }
    Vector b(r.to_size(b_hdr[2]));
    if (b.size() != net.layer_sizes[l + 1]) {
      r.fail("bias length disagrees with layer sizes");
    }
    r.read_doubles(b.data(), b.size());
    net.biases.push_back(std::move(b));
  }
  return net;
}

KMeansModel read_kmeans(Reader& r) {
  KMeansModel model;
  auto hdr = r.next_tokens();
  if (hdr.size() != 4 || hdr[0] != "k" || hdr[2] != "dim") {
    r.fail("expected 'k <k> dim <dim>'");
  }
  model.k = r.to_size(hdr[1]);
  const std::size_t dim = r.to_size(hdr[3]);
  if (model.k == 0) r.fail("k must be positive");

  auto inertia = r.next_tokens();
  if (inertia.size() != 2 || inertia[0] != "inertia") {
    r.fail("expected 'inertia <value>'");
  }
  model.inertia = r.to_double(inertia[1]);

  for (std::size_t c = 0; c < model.k; ++c) {
    auto cent = r.next_tokens();
    if (cent.size() != 3 || cent[0] != "centroid" || r.to_size(cent[1]) != c) {
      r.fail("expected 'centroid " + std::to_string(c) + " <label>'");
    }
    model.cluster_to_group.push_back(cent[2]);
    Vector v(dim);
    r.read_doubles(v.data(), dim);
    model.centroids.push_back(std::move(v));
  }
  return model;
}

void expect_section(Reader& r, const std::string& kind,
                    const std::string& name) {
  auto tokens = r.next_tokens();
  if (tokens.size() != 3 || tokens[0] != "section" || tokens[1] != kind ||
      tokens[2] != name) {
    r.fail("expected 'section " + kind + " " + name + "'");
  }
  r.set_section(name);
}

void expect_end(Reader& r) {
  auto tokens = r.next_tokens();
  if (tokens.size() != 1 || tokens[0] != "end") r.fail("expected 'end'");
}

TrainConfig read_train_config(Reader& r, const std::vector<std::string>& t) {
  if (t.size() != 7) r.fail("expected 5 train-config fields");
  TrainConfig cfg;
  cfg.learning_rate = r.to_double(t[2]);
  cfg.momentum = r.to_double(t[3]);
  cfg.epochs = r.to_size(t[4]);
  cfg.shuffle_seed = r.to_size(t[5]);
  cfg.loss_log_every = r.to_size(t[6]);
  return cfg;
}

}  // namespace

std::string serialize_model(const HierarchyModel& model) {
  std::ostringstream body;
  body << kArchiveMagic << '\n';

  const HierarchyConfig& cfg = model.config;
  body << "config n_categories " << cfg.n_categories << '\n';
  body << "config k_groups " << cfg.k_groups << '\n';
  body << "config input_dim " << cfg.input_dim << '\n';
  body << "config feature_dim " << cfg.feature_dim << '\n';
  body << "config mapper_hidden_dim " << cfg.mapper_hidden_dim << '\n';
  body << "config image_width " << cfg.image_width << '\n';
  body << "config image_height " << cfg.image_height << '\n';
  body << "config route_by " << route_by_name(cfg.route_by) << '\n';
  body << "config kmeans_restarts " << cfg.kmeans_restarts << '\n';
  body << "config seed " << cfg.seed << '\n';
  write_train_config(body, "level1_train", cfg.level1_train);
  write_train_config(body, "level2_train", cfg.level2_train);

  body << "section network voice_mnn\n";
  write_network(body, model.voice_mnn.net());
  body << "end\n";
  body << "section kmeans voice_clusters\n";
  write_kmeans(body, model.voice_clusters);
  body << "end\n";
  body << "section network image_mnn\n";
  write_network(body, model.image_mnn.net());
  body << "end\n";
  body << "section kmeans image_clusters\n";
  write_kmeans(body, model.image_clusters);
  body << "end\n";
  for (const auto& [label, mapper] : model.mappers) {
    body << "section mapper " << label << '\n';
    write_network(body, mapper);
    body << "end\n";
  }

  std::string text = body.str();
  char checksum[64];
  std::snprintf(checksum, sizeof(checksum), "checksum fnv1a64 %016llx\n",
                static_cast<unsigned long long>(fnv1a64(text)));
  text += checksum;
  return text;
}

HierarchyModel parse_model(const std::string& text) {
  // Verify the checksum over everything before its line.
  const std::string needle = "checksum fnv1a64 ";
  const std::size_t pos = text.rfind(needle);
  if (pos == std::string::npos) {
    throw IntegrityError("archive has no checksum line");
  }
  const std::string stated =
      text.substr(pos + needle.size(), 16);
  char expected[32];
  std::snprintf(expected, sizeof(expected), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(std::string_view(text).substr(0, pos))));
  if (stated != expected) {
    throw IntegrityError("archive checksum mismatch: stated " + stated +
                         ", computed " + expected);
  }

  Reader r(text);
  r.set_section("header");
  const std::string magic = r.next_line();
  if (magic != kArchiveMagic) {
    if (magic.rfind("MNN-ASSOC ", 0) == 0) {
      throw UnsupportedVersion("unsupported archive version: " + magic);
    }
    throw FormatError("not an MNN-ASSOC archive");
  }

  r.set_section("config");
  HierarchyConfig cfg;
  for (;;) {
    auto t = r.next_tokens();
    if (t.empty()) r.fail("unexpected blank line");
    if (t[0] == "section") {
      if (t.size() != 3 || t[1] != "network" || t[2] != "voice_mnn") {
        r.fail("expected 'section network voice_mnn'");
      }
      break;
    }
    if (t[0] != "config" || t.size() < 3) r.fail("expected a config line");
    const std::string& key = t[1];
    if (key == "n_categories") cfg.n_categories = r.to_size(t[2]);
    else if (key == "k_groups") cfg.k_groups = r.to_size(t[2]);
    else if (key == "input_dim") cfg.input_dim = r.to_size(t[2]);
    else if (key == "feature_dim") cfg.feature_dim = r.to_size(t[2]);
    else if (key == "mapper_hidden_dim") cfg.mapper_hidden_dim = r.to_size(t[2]);
    else if (key == "image_width") cfg.image_width = r.to_size(t[2]);
    else if (key == "image_height") cfg.image_height = r.to_size(t[2]);
    else if (key == "route_by") cfg.route_by = parse_route_by(t[2]);
    else if (key == "kmeans_restarts") cfg.kmeans_restarts = r.to_size(t[2]);
    else if (key == "seed") cfg.seed = r.to_size(t[2]);
    else if (key == "level1_train") cfg.level1_train = read_train_config(r, t);
    else if (key == "level2_train") cfg.level2_train = read_train_config(r, t);
    else r.fail("unknown config key: " + key);
  }

  r.set_section("voice_mnn");
  Network voice_net = read_network(r);
  expect_end(r);
  expect_section(r, "kmeans", "voice_clusters");
  KMeansModel voice_clusters = read_kmeans(r);
  expect_end(r);
  expect_section(r, "network", "image_mnn");
  Network image_net = read_network(r);
  expect_end(r);
  expect_section(r, "kmeans", "image_clusters");
  KMeansModel image_clusters = read_kmeans(r);
  expect_end(r);

  std::map<std::string, Network> mappers;
  r.set_section("mappers");
  for (;;) {
    auto tokens = r.next_tokens();
    if (!tokens.empty() && tokens[0] == "checksum") break;
    if (tokens.size() != 3 || tokens[0] != "section" ||
        tokens[1] != "mapper") {
      r.fail("expected 'section mapper <label>' or the checksum");
    }
    r.set_section("mapper " + tokens[2]);
    Network mapper = read_network(r);
    expect_end(r);
    if (!mappers.emplace(tokens[2], std::move(mapper)).second) {
      r.fail("duplicate mapper section");
    }
    r.set_section("mappers");
  }

  if (mappers.size() != cfg.k_groups) {
    throw FormatError("archive holds " + std::to_string(mappers.size()) +
                      " mappers but k_groups = " +
                      std::to_string(cfg.k_groups));
  }

  cfg.validate();
  HierarchyModel model{cfg,
                       MirrorNet::from_network(std::move(voice_net)),
                       MirrorNet::from_network(std::move(image_net)),
                       std::move(voice_clusters),
                       std::move(image_clusters),
                       std::move(mappers)};

  // Structural invariants beyond per-component shape checks.
  if (model.voice_mnn.input_dim() != cfg.input_dim ||
      model.voice_mnn.bottleneck_dim() != cfg.feature_dim ||
      model.image_mnn.input_dim() != cfg.input_dim ||
      model.image_mnn.bottleneck_dim() != cfg.feature_dim) {
    throw FormatError("mirror network shapes disagree with the config");
  }
  if (model.voice_clusters.k != cfg.k_groups ||
      model.image_clusters.k != cfg.k_groups) {
    throw FormatError("cluster models disagree with k_groups");
  }
  for (const auto& [label, mapper] : model.mappers) {
    if (mapper.input_dim() != cfg.feature_dim ||
        mapper.output_dim() != cfg.feature_dim) {
      throw FormatError("mapper '" + label +
                        "' does not map feature_dim to feature_dim");
    }
  }
  return model;
}

void save_model(const HierarchyModel& model,
                const std::filesystem::path& path) {
  const std::string text = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write archive: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing archive: " + path.string());
}

HierarchyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open archive: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace mnn
