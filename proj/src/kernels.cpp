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

#include "mnn/kernels.hpp"

#include "mnn/error.hpp"

namespace mnn {
namespace kernels {
namespace {

bool cpu_has_avx2_fma() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops*& active_slot() {
  static const Ops* current = [] {
    switch (best_supported()) {
      case Isa::kAvx2:
        return avx2_ops();
      case Isa::kNeon:
        return neon_ops();
      default:
        return &scalar_ops();
    }
  }();
  return current;
}

}  // namespace

bool supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return avx2_ops() != nullptr && cpu_has_avx2_fma();
    case Isa::kNeon:
      return neon_ops() != nullptr;
  }
  return false;
}

Isa best_supported() {
  if (supported(Isa::kAvx2)) return Isa::kAvx2;
  if (supported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

const Ops& active() { return *active_slot(); }

void select(Isa isa) {
  if (!supported(isa)) {
    throw InvalidArgument(std::string("kernel ISA not supported here: ") +
                          isa_name(isa));
  }
  switch (isa) {
    case Isa::kScalar:
      active_slot() = &scalar_ops();
      break;
    case Isa::kAvx2:
      active_slot() = avx2_ops();
      break;
    case Isa::kNeon:
      active_slot() = neon_ops();
      break;
  }
}

void select_auto() { select(best_supported()); }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "?";
}

Isa parse_isa(const std::string& name) {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  if (name == "neon") return Isa::kNeon;
  if (name == "auto") return best_supported();
  throw InvalidArgument("unknown kernel ISA: " + name);
}

}  // namespace kernels
}  // namespace mnn
