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
// Human-readable run reports: config echo, the three headline metrics,
// confusion matrices, per-pair records, and loss histories. Timing lines are
// prefixed "timing " and sit at the end so that the rest of the document is
// byte-identical across reruns.

#ifndef MNN_REPORT_HPP_
#define MNN_REPORT_HPP_

#include <filesystem>
#include <string>

#include "mnn/hierarchy.hpp"

namespace mnn {

// One line with the three headline metrics, e.g.
// "voice_accuracy 0.96 image_accuracy 0.973333... overall_efficiency 0.95".
std::string format_metrics_line(const EvalReport& report);

std::string render_run_report(const HierarchyConfig& config,
                              const EvalReport& report,
                              const TrainTrace* trace);

void write_run_report(const std::filesystem::path& path,
                      const HierarchyConfig& config, const EvalReport& report,
                      const TrainTrace* trace);

}  // namespace mnn

#endif  // MNN_REPORT_HPP_
