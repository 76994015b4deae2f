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

#ifndef NNFIR_NUMERIC_HPP
#define NNFIR_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace nnfir {

/// Kahan-Babuska (Neumaier) compensated accumulator.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  double value() const { return sum + comp; }
};

/// Eigenvalues of a symmetric n x n matrix (row-major, full storage) by the
/// cyclic Jacobi method. Returned in ascending order. Intended for the small
/// (q+1)-dimensional curvature and covariance matrices.
std::vector<double> sym_eigenvalues(std::vector<double> a, std::size_t n);

/// In-place inverse of a small n x n matrix (row-major) by Gauss-Jordan
/// elimination with partial pivoting. Returns false if singular.
bool invert_small(std::vector<double>& a, std::size_t n);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population (divides by n)
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

/// Central-moment statistics of a sample; skewness/kurtosis are zero for a
/// degenerate (zero-variance) sample.
Moments sample_moments(std::span<const double> x);

}  // namespace nnfir

#endif  // NNFIR_NUMERIC_HPP
