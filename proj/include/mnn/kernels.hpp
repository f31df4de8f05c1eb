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
// Double-precision inner loops behind the trainers and the clustering code.
// Every kernel has a scalar reference implementation plus optional SIMD
// variants; the active table is picked at runtime from CPU capabilities and
// can be forced for testing. All variants of one kernel agree to floating
// point roundoff (summation order differs), never bit-for-bit.

#ifndef MNN_KERNELS_HPP_
#define MNN_KERNELS_HPP_

#include <cstddef>
#include <string>

namespace mnn {
namespace kernels {

enum class Isa {
  kScalar,
  kAvx2,
  kNeon,
};

struct Ops {
  Isa isa;
  const char* name;

  // y = W x + bias. W is row-major with `rows` rows of `cols` entries.
  void (*matvec)(const double* w, const double* x, const double* bias,
                 double* y, std::size_t rows, std::size_t cols);
  // out = W^T d: out[c] = sum_r W[r, c] * d[r]. out is overwritten.
  void (*matvec_transposed)(const double* w, const double* d, double* out,
                            std::size_t rows, std::size_t cols);
  // G += d (outer) a, with G row-major rows x cols, |d| = rows, |a| = cols.
  void (*rank1_accumulate)(double* g, const double* d, const double* a,
                           std::size_t rows, std::size_t cols);
  // v = momentum * v - lr * g; p += v.
  void (*sgd_update)(double* p, double* v, const double* g, double lr,
                     double momentum, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
};

// The scalar reference table. Always available; the unit of truth the SIMD
// variants are equivalence-tested against.
const Ops& scalar_ops();

// SIMD tables, or nullptr when the variant was not compiled in.
const Ops* avx2_ops();
const Ops* neon_ops();

// True when `isa` is both compiled in and supported by the running CPU.
bool supported(Isa isa);

// Best supported ISA on this machine.
Isa best_supported();

// Table used by the rest of the library. Defaults to best_supported().
const Ops& active();

// Force a specific table (throws InvalidArgument when unsupported) or go
// back to automatic selection. Not thread safe; call before training starts.
void select(Isa isa);
void select_auto();

const char* isa_name(Isa isa);
// Parses "scalar" / "avx2" / "neon" / "auto"; throws InvalidArgument.
Isa parse_isa(const std::string& name);

}  // namespace kernels
}  // namespace mnn

#endif  // MNN_KERNELS_HPP_
