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

#ifndef NNFIR_LINOP_HPP
#define NNFIR_LINOP_HPP

#include <cstddef>
#include <vector>

#include "nnfir/divergence.hpp"
#include "nnfir/extended_real.hpp"
#include "nnfir/matrix.hpp"

namespace nnfir {

using GradientVector = std::vector<double>;

/// Symmetric (q+1) x (q+1) second-derivative matrix of the fitting
/// objective. Positive semidefinite wherever the objective is finite.
class CurvatureMatrix {
 public:
  explicit CurvatureMatrix(std::size_t dim)
      : dim_(dim), a_(dim * dim, 0.0) {}

  std::size_t dim() const { return dim_; }

  double& operator()(std::size_t k, std::size_t l) { return a_[k * dim_ + l]; }
  double operator()(std::size_t k, std::size_t l) const {
    return a_[k * dim_ + l];
  }

  double trace() const;

  /// Eigenvalues in ascending order (Jacobi).
  std::vector<double> eigenvalues() const;

  const std::vector<double>& storage() const { return a_; }

 private:
  std::size_t dim_;
  std::vector<double> a_;  // row-major
};

/// Output of the causal banded convolution: out(i,j) = sum_{k=0}^{min(i,q)}
/// h_k U(i-k, j). The Toeplitz operator is never materialized; the band is
/// applied directly in O((q+1) * (N+1) * m).
/// Requires U.horizon() >= h.order().
SignalMatrix convolve(const ImpulseResponse& h, const SignalMatrix& u);

/// As convolve, into a caller-provided buffer (resized to U's shape).
void convolve_into(const ImpulseResponse& h, const SignalMatrix& u,
                   SignalMatrix& out);

/// Lag weights s_k = sum_j sum_{i=k}^{N} U(i-k, j), k = 0..q: the total
/// input mass that lag k can reach within the horizon. Nonincreasing in k.
std::vector<double> lag_weights(const SignalMatrix& u, std::size_t q);

/// Fitting objective F(h) = I(Y || T(h)U).
ExtendedNonnegReal objective(const ImpulseResponse& h, const SignalMatrix& u,
                             const SignalMatrix& y);

/// Gradient of F at h:
///   g_k = s_k - sum_j sum_{i=k}^{N} U(i-k,j) * Y(i,j) / (T(h)U)(i,j)
/// (terms with Y(i,j) = 0 contribute U(i-k,j) to s_k only).
/// Throws InfeasiblePointError if some (T(h)U)(i,j) = 0 with Y(i,j) > 0.
GradientVector gradient(const ImpulseResponse& h, const SignalMatrix& u,
                        const SignalMatrix& y);

/// Second-derivative matrix of F at h:
///   H_kl = sum_j sum_i Y(i,j) U(i-k,j) U(i-l,j) / (T(h)U)(i,j)^2.
CurvatureMatrix curvature(const ImpulseResponse& h, const SignalMatrix& u,
                          const SignalMatrix& y);

namespace detail {

/// R(i,j) = Y(i,j) / W(i,j) where Y(i,j) > 0, else 0. Returns false iff some
/// Y(i,j) > 0 has W(i,j) = 0 (infeasible point).
bool ratio_matrix(const SignalMatrix& y, const SignalMatrix& w,
                  SignalMatrix& r);

/// num_k = sum_j sum_{i=k}^{N} U(i-k,j) * R(i,j) for k = 0..q. This is both
/// the numerator of the multiplicative update and s_k - g_k.
void cross_correlations(const SignalMatrix& u, const SignalMatrix& r,
                        std::size_t q, double* num);

}  // namespace detail

}  // namespace nnfir

#endif  // NNFIR_LINOP_HPP
