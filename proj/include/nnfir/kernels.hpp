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

#ifndef NNFIR_KERNELS_HPP
#define NNFIR_KERNELS_HPP

#include <cstddef>

namespace nnfir::kernels {

/// The data-parallel inner loops of the fitting pipeline. Each backend must
/// be deterministic: a fixed accumulation order per call, so repeated runs
/// on the same machine produce identical bits. Backends may differ from each
/// other at rounding level (FMA, lane-wise partial sums); they are
/// equivalence-tested against the scalar reference.
struct Backend {
  const char* name;

  /// y[i] += a * x[i] for i in [0, n)
  void (*axpy)(double a, const double* x, double* y, std::size_t n);

  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// sum_i w[i] * a[i] * b[i]
  double (*dot3)(const double* w, const double* a, const double* b,
                 std::size_t n);

  /// out[i] = num[i] / den[i] where num[i] > 0, else 0.
  /// Returns false iff some num[i] > 0 has den[i] == 0.
  bool (*ratio_or_zero)(const double* num, const double* den, double* out,
                        std::size_t n);
};

/// Portable reference backend (plain loops, no SIMD).
const Backend& scalar_backend();

/// Best SIMD backend supported by this CPU, or nullptr if none was compiled
/// in or the CPU lacks the required features.
const Backend* simd_backend();

enum class Choice { automatic, scalar, simd };

/// Backend used by the library. Resolved once: the NNFIR_KERNELS environment
/// variable ("scalar", "simd", "auto") wins, otherwise the best available
/// SIMD backend, otherwise scalar.
const Backend& active();

/// Override the active backend (used by the equivalence tests).
void select(Choice choice);

const char* active_name();

}  // namespace nnfir::kernels

#endif  // NNFIR_KERNELS_HPP
