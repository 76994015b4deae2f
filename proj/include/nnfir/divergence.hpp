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

#ifndef NNFIR_DIVERGENCE_HPP
#define NNFIR_DIVERGENCE_HPP

#include "nnfir/extended_real.hpp"
#include "nnfir/matrix.hpp"

namespace nnfir {

/// Csiszar I-divergence between nonnegative arrays of identical shape:
///
///   I(M||N) = sum_a ( M_a log(M_a / N_a) - M_a + N_a )
///
/// with the conventions 0/0 = 0, 0 log 0 = 0 and p/0 = +inf for p > 0.
/// The result is +inf exactly when some entry has M_a > 0 and N_a = 0.
/// Entries with M_a = 0 contribute exactly N_a.
///
/// Accumulation is row-major with compensated summation, so the value is
/// reproducible bit-for-bit across runs. Exact zeros only; no epsilon
/// snapping happens here.
///
/// Throws std::invalid_argument on shape mismatch and DataError on negative
/// or non-finite entries.
ExtendedNonnegReal i_divergence(const SignalMatrix& m, const SignalMatrix& n);

namespace detail {

/// Same accumulation without entry validation; inputs must already satisfy
/// the nonnegativity/finiteness invariants.
ExtendedNonnegReal i_divergence_unchecked(const SignalMatrix& m,
                                          const SignalMatrix& n);

}  // namespace detail

}  // namespace nnfir

#endif  // NNFIR_DIVERGENCE_HPP
