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

#include "nnfir/numeric.hpp"

#include <algorithm>
#include <stdexcept>

namespace nnfir {

std::vector<double> sym_eigenvalues(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n)
    throw std::invalid_argument("sym_eigenvalues: storage/dimension mismatch");
  auto at = [&](std::size_t r, std::size_t c) -> double& {
    return a[r * n + c];
  };

  if (n == 1) return {a[0]};

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      diag += std::abs(at(r, r));
      for (std::size_t c = r + 1; c < n; ++c) off += at(r, c) * at(r, c);
    }
    if (off <= 1e-30 * (1.0 + diag * diag)) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const double app = at(p, p);
        const double aqq = at(q, q);
        at(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        at(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          at(r, p) = c * arp - s * arq;
          at(p, r) = at(r, p);
          at(r, q) = s * arp + c * arq;
          at(q, r) = at(r, q);
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t r = 0; r < n; ++r) eig[r] = at(r, r);
  std::sort(eig.begin(), eig.end());
  return eig;
}

bool invert_small(std::vector<double>& a, std::size_t n) {
  if (a.size() != n * n)
    throw std::invalid_argument("invert_small: storage/dimension mismatch");
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (a[pivot * n + col] == 0.0) return false;
    if (pivot != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[pivot * n + c], a[col * n + c]);
        std::swap(inv[pivot * n + c], inv[col * n + c]);
      }
    const double d = a[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  a = std::move(inv);
  return true;
}

Moments sample_moments(std::span<const double> x) {
  Moments mo;
  const std::size_t n = x.size();
  if (n == 0) return mo;

  NeumaierSum s;
  for (double v : x) s.add(v);
  mo.mean = s.value() / static_cast<double>(n);

  NeumaierSum s2, s3, s4;
  for (double v : x) {
    const double d = v - mo.mean;
    const double d2 = d * d;
    s2.add(d2);
    s3.add(d2 * d);
    s4.add(d2 * d2);
  }
  const double m2 = s2.value() / static_cast<double>(n);
  const double m3 = s3.value() / static_cast<double>(n);
  const double m4 = s4.value() / static_cast<double>(n);
  mo.variance = m2;
  if (m2 > 0.0) {
    mo.skewness = m3 / std::pow(m2, 1.5);
    mo.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return mo;
}

}  // namespace nnfir
