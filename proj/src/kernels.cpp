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

#include "nnfir/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace nnfir::kernels {

#if defined(NNFIR_HAVE_AVX2) && defined(__x86_64__)
namespace detail {
const Backend& avx2_backend();  // kernels_avx2.cpp
}
#endif

// TODO: NEON backend for aarch64 (float64x2 lanes); scalar_backend covers it
// until then.

const Backend* simd_backend() {
#if defined(NNFIR_HAVE_AVX2) && defined(__x86_64__) && defined(__GNUC__)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &detail::avx2_backend();
#endif
  return nullptr;
}

namespace {

const Backend* resolve(Choice choice) {
  switch (choice) {
    case Choice::scalar:
      return &scalar_backend();
    case Choice::simd: {
      const Backend* s = simd_backend();
      return s ? s : &scalar_backend();
    }
    case Choice::automatic:
    default: {
      if (const char* env = std::getenv("NNFIR_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_backend();
        if (std::strcmp(env, "simd") == 0 || std::strcmp(env, "avx2") == 0) {
          const Backend* s = simd_backend();
          return s ? s : &scalar_backend();
        }
        // anything else, including "auto", falls through
      }
      const Backend* s = simd_backend();
      return s ? s : &scalar_backend();
    }
  }
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = resolve(Choice::automatic);
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

void select(Choice choice) {
  g_active.store(resolve(choice), std::memory_order_release);
}

const char* active_name() { return active().name; }

}  // namespace nnfir::kernels
