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
// Model persistence. Self-describing textual archive (`MNN-ASSOC v1`):
// config lines, named sections per component, doubles rendered with 17
// significant digits so they round-trip bit-exactly, and a trailing FNV-1a
// checksum over the body.

#ifndef MNN_ARCHIVE_HPP_
#define MNN_ARCHIVE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "mnn/hierarchy.hpp"

namespace mnn {

inline constexpr std::string_view kArchiveMagic = "MNN-ASSOC v1";

// FNV-1a 64-bit over a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

// Serialization used by save_model/load_model; exposed for tests and for
// in-memory round trips.
std::string serialize_model(const HierarchyModel& model);
HierarchyModel parse_model(const std::string& text);

void save_model(const HierarchyModel& model,
                const std::filesystem::path& path);
HierarchyModel load_model(const std::filesystem::path& path);

// 17-significant-digit rendering shared by the archive and the reports.
std::string format_double(double v);

const char* route_by_name(RouteBy route);
RouteBy parse_route_by(const std::string& name);

}  // namespace mnn

#endif  // MNN_ARCHIVE_HPP_
