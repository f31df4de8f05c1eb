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
// AVX2+FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; nothing here runs unless the dispatcher saw both CPU flags.

#include "mnn/kernels.hpp"

#if defined(MNN_COMPILE_AVX2) && (defined(__x86_64__) || defined(_M_X64))
#define MNN_AVX2_BUILT 1
#include <immintrin.h>
#else
#define MNN_AVX2_BUILT 0
#endif

namespace mnn {
namespace kernels {

#if MNN_AVX2_BUILT

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void matvec_avx2(const double* w, const double* x, const double* bias,
                 double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot_avx2(w + r * cols, x, cols) + bias[r];
  }
}

// y += a * x
inline void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                               _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void matvec_transposed_avx2(const double* w, const double* d, double* out,
                            std::size_t rows, std::size_t cols) {
  for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    axpy_avx2(d[r], w + r * cols, out, cols);
  }
}

void rank1_accumulate_avx2(double* g, const double* d, const double* a,
                           std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    axpy_avx2(d[r], a, g + r * cols, cols);
  }
}

void sgd_update_avx2(double* p, double* v, const double* g, double lr,
                     double momentum, std::size_t n) {
  const __m256d vm = _mm256_set1_pd(momentum);
  const __m256d vnl = _mm256_set1_pd(-lr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vg = _mm256_mul_pd(vnl, _mm256_loadu_pd(g + i));
    __m256d vv = _mm256_fmadd_pd(vm, _mm256_loadu_pd(v + i), vg);
    _mm256_storeu_pd(v + i, vv);
    _mm256_storeu_pd(p + i, _mm256_add_pd(_mm256_loadu_pd(p + i), vv));
  }
  for (; i < n; ++i) {
    v[i] = momentum * v[i] - lr * g[i];
    p[i] += v[i];
  }
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                 _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(diff, diff, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops table = {
      Isa::kAvx2,
      "avx2",
      matvec_avx2,
      matvec_transposed_avx2,
      rank1_accumulate_avx2,
      sgd_update_avx2,
      dot_avx2,
      squared_distance_avx2,
  };
  return &table;
}

#else

const Ops* avx2_ops() { return nullptr; }

#endif  // MNN_AVX2_BUILT

}  // namespace kernels
}  // namespace mnn
