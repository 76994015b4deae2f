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

#include "nnfir/divergence.hpp"

#include <cmath>
#include <stdexcept>

#include "nnfir/errors.hpp"
#include "nnfir/numeric.hpp"

namespace nnfir {

namespace detail {

ExtendedNonnegReal i_divergence_unchecked(const SignalMatrix& m,
                                          const SignalMatrix& n) {
  // Row-major accumulation; the per-entry log and linear parts are added
  // separately so the compensation absorbs their cancellation near M = N.
  NeumaierSum acc;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double mv = m(i, j);
      const double nv = n(i, j);
      if (mv > 0.0) {
        if (nv == 0.0) return ExtendedNonnegReal::infinite();
        acc.add(mv * std::log(mv / nv));
        acc.add(nv - mv);
      } else {
        acc.add(nv);
      }
    }
  }
  double v = acc.value();
  if (!std::isfinite(v)) return ExtendedNonnegReal::infinite();
  if (v < 0.0) v = 0.0;  // rounding guard; the true value is >= 0
  return ExtendedNonnegReal::finite(v);
}

}  // namespace detail

ExtendedNonnegReal i_divergence(const SignalMatrix& m, const SignalMatrix& n) {
  if (!m.same_shape(n))
    throw std::invalid_argument("i_divergence: arrays must have equal shape");
  m.check_entries("M");
  n.check_entries("N");
  return detail::i_divergence_unchecked(m, n);
}

}  // namespace nnfir
