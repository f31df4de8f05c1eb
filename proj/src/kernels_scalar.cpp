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
// Reference kernels. Plain left-to-right loops; keep them boring, they are
// the baseline every SIMD variant is checked against.

#include "mnn/kernels.hpp"

namespace mnn {
namespace kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void matvec_scalar(const double* w, const double* x, const double* bias,
                   double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot_scalar(w + r * cols, x, cols) + bias[r];
  }
}

void matvec_transposed_scalar(const double* w, const double* d, double* out,
                              std::size_t rows, std::size_t cols) {
  for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double dr = d[r];
    const double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += dr * row[c];
  }
}

void rank1_accumulate_scalar(double* g, const double* d, const double* a,
                             std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double dr = d[r];
    double* row = g + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += dr * a[c];
  }
}

void sgd_update_scalar(double* p, double* v, const double* g, double lr,
                       double momentum, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = momentum * v[i] - lr * g[i];
    p[i] += v[i];
  }
}

double squared_distance_scalar(const double* a, const double* b,
                               std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table = {
      Isa::kScalar,
      "scalar",
      matvec_scalar,
      matvec_transposed_scalar,
      rank1_accumulate_scalar,
      sgd_update_scalar,
      dot_scalar,
      squared_distance_scalar,
  };
  return table;
}

}  // namespace kernels
}  // namespace mnn
