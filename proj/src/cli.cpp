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

#include "mnn/cli.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mnn/archive.hpp"
#include "mnn/audio.hpp"
#include "mnn/dataset.hpp"
#include "mnn/error.hpp"
#include "mnn/hierarchy.hpp"
#include "mnn/image.hpp"
#include "mnn/kernels.hpp"
#include "mnn/kmeans.hpp"
#include "mnn/report.hpp"
#include "mnn/rng.hpp"

namespace mnn {
namespace {

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void add_kernels_option(CLI::App* cmd, std::string* storage) {
  cmd->add_option("--kernels", *storage,
                  "Kernel ISA: auto, scalar, avx2, neon")
      ->default_val("auto")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));
}

void apply_kernels(const std::string& choice) {
  kernels::select(kernels::parse_isa(choice));
}

void add_seed_option(CLI::App* cmd, std::uint64_t* storage) {
  cmd->add_option("--seed", *storage, "Master random seed")
      ->envname("MNN_ASSOC_SEED")
      ->default_val(0);
}

struct GenDataArgs {
  std::string out_dir;
  std::string groups = "face,window,garden";
  std::size_t pairs_per_group = 150;
  std::size_t dim = 510;
  double noise = 0.25;
  double separation = 4.0;
  std::uint64_t seed = 0;
};

int do_gen_data(const GenDataArgs& a) {
  SyntheticSpec spec;
  spec.groups = split_csv(a.groups);
  spec.pairs_per_group = a.pairs_per_group;
  spec.dim = a.dim;
  spec.prototype_seed = a.seed;
  spec.noise_stddev = a.noise;
  spec.prototype_separation = a.separation;

  const std::vector<SamplePair> pairs = generate_synthetic(spec);
  const std::filesystem::path manifest = write_dataset(a.out_dir, pairs);
  std::cout << "wrote " << pairs.size() << " pairs to " << manifest.string()
            << "\n";
  return 0;
}

struct TrainArgs {
  std::string manifest;
  std::string out = "model.mnn";
  std::string report = "report.txt";
  std::string groups = "face,window,garden";
  std::size_t pairs = 450;
  std::size_t train_count = 0;  // 0: two thirds of the dataset
  double noise = 0.25;
  double separation = 4.0;
  std::size_t k = 3;
  std::size_t dim = 510;
  std::size_t features = 20;
  std::size_t mapper_hidden = 20;
  std::size_t image_width = 17;
  std::size_t image_height = 30;
  double lr = 0.05;
  double momentum = 0.9;
  std::size_t epochs = 500;
  std::size_t log_every = 50;
  double l2_lr = 0.05;
  double l2_momentum = 0.9;
  std::size_t l2_epochs = 500;
  std::size_t restarts = 20;
  std::string route_by = "true-label";
  std::uint64_t seed = 0;
  std::string kernels = "auto";
  bool quiet = false;
};

HierarchyConfig make_hierarchy_config(const TrainArgs& a) {
  HierarchyConfig cfg;
  cfg.k_groups = a.k;
  cfg.input_dim = a.dim;
  cfg.feature_dim = a.features;
  cfg.mapper_hidden_dim = a.mapper_hidden;
  cfg.image_width = a.image_width;
  cfg.image_height = a.image_height;
  cfg.level1_train = TrainConfig(a.lr, a.epochs, 0, a.momentum, a.log_every);
  cfg.level2_train =
      TrainConfig(a.l2_lr, a.l2_epochs, 0, a.l2_momentum, a.log_every);
  cfg.route_by = parse_route_by(a.route_by);
  cfg.kmeans_restarts = a.restarts;
  cfg.seed = a.seed;
  cfg.validate();
  return cfg;
}

std::vector<SamplePair> train_dataset(const TrainArgs& a,
                                      const HierarchyConfig& cfg) {
  if (!a.manifest.empty()) {
    return load_manifest(a.manifest, cfg.input_dim, cfg.image_width,
                         cfg.image_height);
  }
  SyntheticSpec spec;
  spec.groups = split_csv(a.groups);
  if (spec.groups.empty() || a.pairs % spec.groups.size() != 0) {
    throw InvalidArgument("--pairs must be a positive multiple of the number "
                          "of groups");
  }
  spec.pairs_per_group = a.pairs / spec.groups.size();
  spec.dim = cfg.input_dim;
  spec.prototype_seed = derive_seed(a.seed, 0xDA7A);
  spec.noise_stddev = a.noise;
  spec.prototype_separation = a.separation;
  return generate_synthetic(spec);
}

int do_train(const TrainArgs& a) {
  apply_kernels(a.kernels);
  const HierarchyConfig cfg = make_hierarchy_config(a);
  const std::vector<SamplePair> all_pairs = train_dataset(a, cfg);
  const std::size_t train_count =
      a.train_count != 0 ? a.train_count : all_pairs.size() * 2 / 3;
  auto [train_pairs, test_pairs] =
      split(all_pairs, train_count, derive_seed(a.seed, 0x5713));

  std::cerr << "training on " << train_pairs.size() << " pairs, testing on "
            << test_pairs.size() << " (kernels: "
            << kernels::active().name << ")\n";
  EpochCallback progress;
  if (!a.quiet) {
    progress = [](std::size_t epoch, double loss) {
      std::fprintf(stderr, "  epoch %zu loss %.6g\n", epoch + 1, loss);
    };
  }

  TrainTrace trace;
  const HierarchyModel model = train_full(train_pairs, cfg, &trace, progress);
  const EvalReport report = evaluate(model, test_pairs);

  save_model(model, a.out);
  write_run_report(a.report, cfg, report, &trace);

  std::cout << format_metrics_line(report) << "\n";
  std::cout << "reference voice_accuracy 0.916 image_accuracy 0.953 "
               "overall_efficiency 0.916\n";
  std::cout << "model " << a.out << "\nreport " << a.report << "\n";
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string manifest;
  std::string report = "eval-report.txt";
  std::string kernels = "auto";
};

int do_eval(const EvalArgs& a) {
  apply_kernels(a.kernels);
  const HierarchyModel model = load_model(a.model);
  const std::vector<SamplePair> pairs =
      load_manifest(a.manifest, model.config.input_dim,
                    model.config.image_width, model.config.image_height);
  const EvalReport report = evaluate(model, pairs);
  write_run_report(a.report, model.config, report, nullptr);
  std::cout << format_metrics_line(report) << "\n";
  std::cout << "reference voice_accuracy 0.916 image_accuracy 0.953 "
               "overall_efficiency 0.916\n";
  std::cout << "report " << a.report << "\n";
  return 0;
}

struct PredictArgs {
  std::string model;
  std::string voice;
  std::string out_prefix = "prediction";
  std::string kernels = "auto";
};

int do_predict(const PredictArgs& a) {
  apply_kernels(a.kernels);
  const HierarchyModel model = load_model(a.model);

  const std::filesystem::path voice_path(a.voice);
  Vector voice;
  if (voice_path.extension() == ".wav") {
    voice = load_voice(voice_path, model.config.input_dim);
  } else {
    const std::vector<Vector> rows = load_rawvec(voice_path);
    if (rows.size() != 1) {
      throw FormatError("expected a single voice vector in " + a.voice);
    }
    voice = rows.front();
  }

  const Association assoc = associate(model, voice);
  const std::filesystem::path pgm = a.out_prefix + ".pgm";
  const std::filesystem::path raw = a.out_prefix + ".rawvec";
  write_image_from_unit(pgm, assoc.reconstructed_image,
                        model.config.image_width, model.config.image_height);
  save_rawvec(raw, {assoc.reconstructed_image});

  std::cout << assoc.group << "\n";
  std::cerr << "wrote " << pgm.string() << " and " << raw.string() << "\n";
  return 0;
}

struct CheckGradArgs {
  std::size_t nets = 20;
  double step = 1e-5;
  double threshold = 1e-4;
  std::uint64_t seed = 0;
  std::string kernels = "auto";
};

int do_check_grad(const CheckGradArgs& a) {
  apply_kernels(a.kernels);
  const std::vector<std::vector<std::size_t>> shapes = {
      {5, 3, 5}, {10, 4, 10}, {20, 20, 20}};
  double worst = 0.0;
  for (std::size_t i = 0; i < a.nets; ++i) {
    const auto& shape = shapes[i % shapes.size()];
    Network net = init_network(shape, Activation::kTanh,
                               derive_seed(a.seed, 0x600 + i));
    Rng rng(derive_seed(a.seed, 0x700 + i));
    Vector input(shape.front()), target(shape.back());
    for (double& v : input) v = rng.uniform(-1.0, 1.0);
    for (double& v : target) v = rng.uniform(-1.0, 1.0);
    worst = std::max(worst, check_gradients(net, input, target, a.step));
  }
  std::cout << format_double(worst) << "\n";
  return worst < a.threshold ? 0 : 1;
}

struct KmeansOracleArgs {
  std::size_t instances = 50;
  std::size_t restarts = 20;
  double tolerance = 1e-9;
  std::size_t max_iters = 100;
  std::uint64_t seed = 0;
  std::string kernels = "auto";
};

int do_kmeans_oracle(const KmeansOracleArgs& a) {
  apply_kernels(a.kernels);
  double worst_gap = 0.0;
  for (std::size_t i = 0; i < a.instances; ++i) {
    Rng rng(derive_seed(a.seed, 0x800 + i));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_below(3));
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform_below(3));
    const std::size_t n =
        k + static_cast<std::size_t>(rng.uniform_below(11 - k));
    std::vector<Vector> points(n, Vector(d));
    for (Vector& p : points) {
      for (double& v : p) v = rng.uniform(-2.0, 2.0);
    }
    const KMeansResult run = best_of_restarts(
        points, k, derive_seed(a.seed, 0x900 + i), a.restarts, a.max_iters);
    const double best = exhaustive_min_sse(points, k);
    worst_gap = std::max(worst_gap, run.inertia - best);
  }
  std::cout << format_double(worst_gap) << "\n";
  return worst_gap <= a.tolerance ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Two-level mirror-network associative memory (voice -> image)",
               "mnn-assoc"};
  app.require_subcommand(1);

  GenDataArgs gen;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-data", "Generate a synthetic paired dataset + manifest");
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--groups", gen.groups, "Comma-separated group labels");
  gen_cmd->add_option("--pairs-per-group", gen.pairs_per_group,
                      "Pairs per group");
  gen_cmd->add_option("--dim", gen.dim, "Vector dimension");
  gen_cmd->add_option("--noise", gen.noise, "Gaussian noise stddev");
  gen_cmd->add_option("--separation", gen.separation,
                      "Minimum prototype separation");
  add_seed_option(gen_cmd, &gen.seed);

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand(
      "train", "Train the two-level model and evaluate the held-out split");
  train_cmd->add_option("--manifest", train.manifest,
                        "Train from this manifest instead of synthetic data");
  train_cmd->add_option("--out", train.out, "Model archive path");
  train_cmd->add_option("--report", train.report, "Run report path");
  train_cmd->add_option("--groups", train.groups,
                        "Synthetic group labels (comma-separated)");
  train_cmd->add_option("--pairs", train.pairs, "Synthetic dataset size");
  train_cmd->add_option("--train-count", train.train_count,
                        "Training pairs; the rest are held out");
  train_cmd->add_option("--noise", train.noise, "Synthetic noise stddev");
  train_cmd->add_option("--separation", train.separation,
                        "Synthetic prototype separation");
  train_cmd->add_option("--k", train.k, "Number of pattern groups");
  train_cmd->add_option("--dim", train.dim, "Input dimension");
  train_cmd->add_option("--features", train.features, "Bottleneck dimension");
  train_cmd->add_option("--mapper-hidden", train.mapper_hidden,
                        "Mapper hidden-layer width");
  train_cmd->add_option("--image-width", train.image_width,
                        "Width for PGM output");
  train_cmd->add_option("--image-height", train.image_height,
                        "Height for PGM output");
  train_cmd->add_option("--lr", train.lr, "Level-I learning rate");
  train_cmd->add_option("--momentum", train.momentum, "Level-I momentum");
  train_cmd->add_option("--epochs", train.epochs, "Level-I epochs");
  train_cmd->add_option("--log-every", train.log_every,
                        "Progress/log granularity in epochs");
  train_cmd->add_option("--l2-lr", train.l2_lr, "Level-II learning rate");
  train_cmd->add_option("--l2-momentum", train.l2_momentum,
                        "Level-II momentum");
  train_cmd->add_option("--l2-epochs", train.l2_epochs, "Level-II epochs");
  train_cmd->add_option("--restarts", train.restarts, "k-means restarts");
  train_cmd->add_option("--route-by", train.route_by,
                        "Mapper routing during training")
      ->check(CLI::IsMember({"true-label", "predicted-cluster"}));
  train_cmd->add_flag("--quiet", train.quiet, "Suppress progress output");
  add_seed_option(train_cmd, &train.seed);
  add_kernels_option(train_cmd, &train.kernels);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Evaluate a model archive against a manifest");
  eval_cmd->add_option("--model", eval.model, "Model archive")->required();
  eval_cmd->add_option("--manifest", eval.manifest, "Dataset manifest")
      ->required();
  eval_cmd->add_option("--report", eval.report, "Run report path");
  add_kernels_option(eval_cmd, &eval.kernels);

  PredictArgs predict;
  CLI::App* predict_cmd = app.add_subcommand(
      "predict", "Associate one voice input with its image");
  predict_cmd->add_option("--model", predict.model, "Model archive")
      ->required();
  predict_cmd->add_option("--voice", predict.voice,
                          "Voice input (.wav or single-line RAWVEC)")
      ->required();
  predict_cmd->add_option("--out-prefix", predict.out_prefix,
                          "Prefix for the written .pgm/.rawvec");
  add_kernels_option(predict_cmd, &predict.kernels);

  CheckGradArgs check_grad;
  CLI::App* cg_cmd = app.add_subcommand(
      "check-grad",
      "Compare analytic gradients against central finite differences");
  cg_cmd->add_option("--nets", check_grad.nets, "Number of random nets");
  cg_cmd->add_option("--step", check_grad.step, "Finite-difference step");
  cg_cmd->add_option("--threshold", check_grad.threshold,
                     "Max allowed relative discrepancy");
  add_seed_option(cg_cmd, &check_grad.seed);
  add_kernels_option(cg_cmd, &check_grad.kernels);

  KmeansOracleArgs oracle;
  CLI::App* oracle_cmd = app.add_subcommand(
      "kmeans-oracle",
      "Check restarted k-means against exhaustive enumeration");
  oracle_cmd->add_option("--instances", oracle.instances, "Random instances");
  oracle_cmd->add_option("--restarts", oracle.restarts, "Restarts per run");
  oracle_cmd->add_option("--tolerance", oracle.tolerance,
                         "Allowed SSE gap to the optimum");
  oracle_cmd->add_option("--max-iters", oracle.max_iters,
                         "Lloyd iteration cap");
  add_seed_option(oracle_cmd, &oracle.seed);
  add_kernels_option(oracle_cmd, &oracle.kernels);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("mnn-assoc");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nRun 'mnn-assoc --help' for usage.\n";
    return 2;
  }

  try {
    if (gen_cmd->parsed()) return do_gen_data(gen);
    if (train_cmd->parsed()) return do_train(train);
    if (eval_cmd->parsed()) return do_eval(eval);
    if (predict_cmd->parsed()) return do_predict(predict);
    if (cg_cmd->parsed()) return do_check_grad(check_grad);
    if (oracle_cmd->parsed()) return do_kmeans_oracle(oracle);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace mnn
