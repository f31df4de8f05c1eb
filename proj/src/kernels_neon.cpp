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
// NEON variants for AArch64, where double-width NEON is baseline.

#include "mnn/kernels.hpp"

#if defined(__aarch64__)
#define MNN_NEON_BUILT 1
#include <arm_neon.h>
#else
#define MNN_NEON_BUILT 0
#endif

namespace mnn {
namespace kernels {

#if MNN_NEON_BUILT

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  if (i + 2 <= n) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    i += 2;
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void matvec_neon(const double* w, const double* x, const double* bias,
                 double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot_neon(w + r * cols, x, cols) + bias[r];
  }
}

inline void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void matvec_transposed_neon(const double* w, const double* d, double* out,
                            std::size_t rows, std::size_t cols) {
  for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    axpy_neon(d[r], w + r * cols, out, cols);
  }
}

void rank1_accumulate_neon(double* g, const double* d, const double* a,
                           std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    axpy_neon(d[r], a, g + r * cols, cols);
  }
}

void sgd_update_neon(double* p, double* v, const double* g, double lr,
                     double momentum, std::size_t n) {
  const float64x2_t vm = vdupq_n_f64(momentum);
  const float64x2_t vnl = vdupq_n_f64(-lr);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vg = vmulq_f64(vnl, vld1q_f64(g + i));
    float64x2_t vv = vfmaq_f64(vg, vm, vld1q_f64(v + i));
    vst1q_f64(v + i, vv);
    vst1q_f64(p + i, vaddq_f64(vld1q_f64(p + i), vv));
  }
  for (; i < n; ++i) {
    v[i] = momentum * v[i] - lr * g[i];
    p[i] += v[i];
  }
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t diff = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, diff, diff);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

}  // namespace

const Ops* neon_ops() {
  static const Ops table = {
      Isa::kNeon,
      "neon",
      matvec_neon,
      matvec_transposed_neon,
      rank1_accumulate_neon,
      sgd_update_neon,
      dot_neon,
      squared_distance_neon,
  };
  return &table;
}

#else

const Ops* neon_ops() { return nullptr; }

#endif  // MNN_NEON_BUILT

}  // namespace kernels
}  // namespace mnn
