/*******************************************************************************
 * Copyright 2026 the nnfir authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

// Reference kernels: plain sequential loops, one accumulator, no FMA
// contraction (this translation unit is built without fast-math or
// arch-specific flags). The SIMD backends are checked against these.

#include "nnfir/kernels.hpp"

namespace nnfir::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double dot3_scalar(const double* w, const double* a, const double* b,
                   std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * (a[i] * b[i]);
  return acc;
}

bool ratio_or_zero_scalar(const double* num, const double* den, double* out,
                          std::size_t n) {
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = num[i];
    if (p > 0.0) {
      if (den[i] == 0.0) ok = false;
      out[i] = p / den[i];
    } else {
      out[i] = 0.0;
    }
  }
  return ok;
}

}  // namespace

const Backend& scalar_backend() {
  static constexpr Backend backend{"scalar", axpy_scalar, dot_scalar,
                                   dot3_scalar, ratio_or_zero_scalar};
  return backend;
}

}  // namespace nnfir::kernels
