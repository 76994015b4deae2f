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

#include "nnfir/linop.hpp"

#include <stdexcept>
#include <string>

#include "nnfir/errors.hpp"
#include "nnfir/kernels.hpp"
#include "nnfir/numeric.hpp"

namespace nnfir {

namespace {

void require_shapes(const ImpulseResponse& h, const SignalMatrix& u) {
  if (h.empty() || u.empty())
    throw std::invalid_argument("empty impulse response or signal matrix");
  if (u.horizon() < h.order())
    throw std::invalid_argument(
        "time horizon N = " + std::to_string(u.horizon()) +
        " must be at least the order q = " + std::to_string(h.order()));
}

void require_pair(const SignalMatrix& u, const SignalMatrix& y) {
  if (!u.same_shape(y))
    throw std::invalid_argument("input and output matrices must have equal shape");
}

}  // namespace

double CurvatureMatrix::trace() const {
  NeumaierSum acc;
  for (std::size_t k = 0; k < dim_; ++k) acc.add((*this)(k, k));
  return acc.value();
}

std::vector<double> CurvatureMatrix::eigenvalues() const {
  return sym_eigenvalues(a_, dim_);
}

void convolve_into(const ImpulseResponse& h, const SignalMatrix& u,
                   SignalMatrix& out) {
  require_shapes(h, u);
  if (!out.same_shape(u)) out = SignalMatrix(u.rows(), u.cols());
  out.fill(0.0);
  const auto& k = kernels::active();
  const std::size_t rows = u.rows();
  const std::size_t q = h.order();
  for (std::size_t j = 0; j < u.cols(); ++j) {
    const double* uc = u.col(j);
    double* wc = out.col(j);
    for (std::size_t lag = 0; lag <= q; ++lag)
      k.axpy(h[lag], uc, wc + lag, rows - lag);
  }
}

SignalMatrix convolve(const ImpulseResponse& h, const SignalMatrix& u) {
  SignalMatrix out;
  convolve_into(h, u, out);
  return out;
}

std::vector<double> lag_weights(const SignalMatrix& u, std::size_t q) {
  if (u.empty()) throw std::invalid_argument("lag_weights: empty matrix");
  if (u.horizon() < q)
    throw std::invalid_argument("lag_weights: horizon smaller than order");
  std::vector<double> s(q + 1);
  for (std::size_t k = 0; k <= q; ++k) {
    NeumaierSum acc;
    const std::size_t upto = u.rows() - k;  // rows 0 .. N-k
    for (std::size_t j = 0; j < u.cols(); ++j) {
      const double* uc = u.col(j);
      for (std::size_t i = 0; i < upto; ++i) acc.add(uc[i]);
    }
    s[k] = acc.value();
  }
  return s;
}

ExtendedNonnegReal objective(const ImpulseResponse& h, const SignalMatrix& u,
                             const SignalMatrix& y) {
  require_shapes(h, u);
  require_pair(u, y);
  h.check_entries("h");
  u.check_entries("U");
  y.check_entries("Y");
  const SignalMatrix w = convolve(h, u);
  return detail::i_divergence_unchecked(y, w);
}

namespace detail {

bool ratio_matrix(const SignalMatrix& y, const SignalMatrix& w,
                  SignalMatrix& r) {
  if (!r.same_shape(y)) r = SignalMatrix(y.rows(), y.cols());
  const auto& k = kernels::active();
  bool ok = true;
  for (std::size_t j = 0; j < y.cols(); ++j)
    ok = k.ratio_or_zero(y.col(j), w.col(j), r.col(j), y.rows()) && ok;
  return ok;
}

void cross_correlations(const SignalMatrix& u, const SignalMatrix& r,
                        std::size_t q, double* num) {
  const auto& k = kernels::active();
  const std::size_t rows = u.rows();
  for (std::size_t lag = 0; lag <= q; ++lag) num[lag] = 0.0;
  for (std::size_t j = 0; j < u.cols(); ++j) {
    const double* uc = u.col(j);
    const double* rc = r.col(j);
    for (std::size_t lag = 0; lag <= q; ++lag)
      num[lag] += k.dot(uc, rc + lag, rows - lag);
  }
}

}  // namespace detail

GradientVector gradient(const ImpulseResponse& h, const SignalMatrix& u,
                        const SignalMatrix& y) {
  require_shapes(h, u);
  require_pair(u, y);
  h.check_entries("h");
  u.check_entries("U");
  y.check_entries("Y");

  const std::size_t q = h.order();
  const SignalMatrix w = convolve(h, u);
  SignalMatrix r;
  if (!detail::ratio_matrix(y, w, r))
    throw InfeasiblePointError(
        "gradient: model output is zero at an entry with positive data");

  std::vector<double> num(q + 1);
  detail::cross_correlations(u, r, q, num.data());
  const std::vector<double> s = lag_weights(u, q);

  GradientVector g(q + 1);
  for (std::size_t k = 0; k <= q; ++k) g[k] = s[k] - num[k];
  return g;
}

CurvatureMatrix curvature(const ImpulseResponse& h, const SignalMatrix& u,
                          const SignalMatrix& y) {
  require_shapes(h, u);
  require_pair(u, y);
  h.check_entries("h");
  u.check_entries("U");
  y.check_entries("Y");

  const std::size_t q = h.order();
  const std::size_t rows = u.rows();
  const SignalMatrix w = convolve(h, u);
  SignalMatrix r;
  if (!detail::ratio_matrix(y, w, r))
    throw InfeasiblePointError(
        "curvature: model output is zero at an entry with positive data");

  // S = Y / W^2 on the support of Y; the second ratio cannot fail because
  // R > 0 implies W > 0 already.
  SignalMatrix s2;
  detail::ratio_matrix(r, w, s2);

  const auto& k = kernels::active();
  CurvatureMatrix hess(q + 1);
  for (std::size_t kk = 0; kk <= q; ++kk) {
    for (std::size_t ll = kk; ll <= q; ++ll) {
      double acc = 0.0;
      // sum over i >= ll of S(i,j) U(i-kk,j) U(i-ll,j)
      for (std::size_t j = 0; j < u.cols(); ++j)
        acc += k.dot3(s2.col(j) + ll, u.col(j) + (ll - kk), u.col(j),
                      rows - ll);
      hess(kk, ll) = acc;
      hess(ll, kk) = acc;
    }
  }
  return hess;
}

}  // namespace nnfir
