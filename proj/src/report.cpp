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

#include "mnn/report.hpp"

#include <fstream>
#include <sstream>

#include "mnn/archive.hpp"
#include "mnn/error.hpp"

namespace mnn {
namespace {

void write_confusion(std::ostream& out, const char* name,
                     const std::vector<std::string>& labels,
                     const std::vector<std::vector<std::size_t>>& m) {
  out << "confusion " << name << " (rows = true, cols = predicted)\n";
  out << "  ";
  for (const std::string& l : labels) out << ' ' << l;
  out << '\n';
  for (std::size_t r = 0; r < m.size(); ++r) {
    out << "  " << labels[r];
    for (std::size_t c = 0; c < m[r].size(); ++c) out << ' ' << m[r][c];
    out << '\n';
  }
}

void write_loss_history(std::ostream& out, const std::string& name,
                        const std::vector<double>& history,
                        std::size_t log_every) {
  if (history.empty()) return;
  out << "loss " << name << " (epoch mean)\n";
  for (std::size_t e = 0; e < history.size(); ++e) {
    if ((e + 1) % log_every == 0 || e == 0 || e + 1 == history.size()) {
      out << "  epoch " << (e + 1) << ' ' << format_double(history[e]) << '\n';
    }
  }
}

}  // namespace

std::string format_metrics_line(const EvalReport& report) {
  std::ostringstream out;
  out << "voice_accuracy " << format_double(report.voice_accuracy)
      << " image_accuracy " << format_double(report.image_accuracy)
      << " overall_efficiency " << format_double(report.overall_efficiency);
  return out.str();
}

std::string render_run_report(const HierarchyConfig& config,
                              const EvalReport& report,
                              const TrainTrace* trace) {
  std::ostringstream out;
  out << "MNN-ASSOC run report\n";
  out << "config k_groups " << config.k_groups << " input_dim "
      << config.input_dim << " feature_dim " << config.feature_dim
      << " mapper_hidden_dim " << config.mapper_hidden_dim << '\n';
  out << "config route_by " << route_by_name(config.route_by)
      << " kmeans_restarts " << config.kmeans_restarts << " seed "
      << config.seed << '\n';
  out << "config level1 lr " << format_double(config.level1_train.learning_rate)
      << " momentum " << format_double(config.level1_train.momentum)
      << " epochs " << config.level1_train.epochs << '\n';
  out << "config level2 lr " << format_double(config.level2_train.learning_rate)
      << " momentum " << format_double(config.level2_train.momentum)
      << " epochs " << config.level2_train.epochs << '\n';

  out << "test_pairs " << report.records.size() << '\n';
  out << format_metrics_line(report) << '\n';
  // Reported operating points of the same experiment shape, for context.
  out << "reference voice_accuracy 0.916 image_accuracy 0.953 "
         "overall_efficiency 0.916\n";

  write_confusion(out, "voice", report.labels, report.voice_confusion);
  write_confusion(out, "image", report.labels, report.image_confusion);

  out << "records (id true voice image mapped overall)\n";
  for (const EvalRecord& rec : report.records) {
    out << "  " << rec.id << ' ' << rec.true_group << ' '
        << rec.voice_predicted << ' ' << rec.image_predicted << ' '
        << rec.mapped_predicted << ' ' << (rec.overall_correct ? 1 : 0)
        << '\n';
  }

  if (trace != nullptr) {
    write_loss_history(out, "voice_mnn", trace->voice_loss,
                       config.level1_train.loss_log_every);
    write_loss_history(out, "image_mnn", trace->image_loss,
                       config.level1_train.loss_log_every);
    for (const auto& [label, history] : trace->mapper_loss) {
      write_loss_history(out, "mapper " + label, history,
                         config.level2_train.loss_log_every);
    }
    // Timing lines last; excluded from determinism comparisons.
    out << "timing level1_seconds " << format_double(trace->level1_seconds)
        << '\n';
    out << "timing level2_seconds " << format_double(trace->level2_seconds)
        << '\n';
  }
  return out.str();
}

void write_run_report(const std::filesystem::path& path,
                      const HierarchyConfig& config, const EvalReport& report,
                      const TrainTrace* trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report: " + path.string());
  const std::string text = render_run_report(config, report, trace);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing report: " + path.string());
}

}  // namespace mnn
