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

// AVX2/FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be reached after a runtime CPU-feature check (see kernels.cpp).
// Reductions use fixed lane layout and a fixed horizontal combine, so a call
// with the same arguments always returns the same bits.

#include "nnfir/kernels.hpp"

#if defined(NNFIR_HAVE_AVX2) && defined(__x86_64__)

#include <immintrin.h>

#include <cmath>

namespace nnfir::kernels {
namespace {

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

// (l0 + l2) + (l1 + l3)
double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  const __m128d sh = _mm_unpackhi_pd(s, s);
  return _mm_cvtsd_f64(_mm_add_sd(s, sh));
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
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

double dot3_avx2(const double* w, const double* a, const double* b,
                 std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ab =
        _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), ab, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s = std::fma(w[i], a[i] * b[i], s);
  return s;
}

bool ratio_or_zero_avx2(const double* num, const double* den, double* out,
                        std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d bad = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(num + i);
    const __m256d d = _mm256_loadu_pd(den + i);
    const __m256d pos = _mm256_cmp_pd(p, zero, _CMP_GT_OQ);
    // Masked-off lanes may hold NaN/Inf from the division; the AND clears
    // them to +0.0.
    const __m256d q = _mm256_div_pd(p, d);
    _mm256_storeu_pd(out + i, _mm256_and_pd(q, pos));
    bad = _mm256_or_pd(bad,
                       _mm256_and_pd(pos, _mm256_cmp_pd(d, zero, _CMP_EQ_OQ)));
  }
  bool ok = _mm256_movemask_pd(bad) == 0;
  for (; i < n; ++i) {
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

namespace detail {

const Backend& avx2_backend() {
  static constexpr Backend backend{"avx2", axpy_avx2, dot_avx2, dot3_avx2,
                                   ratio_or_zero_avx2};
  return backend;
}

}  // namespace detail
}  // namespace nnfir::kernels

#endif  // NNFIR_HAVE_AVX2 && __x86_64__
