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

#include "nnfir/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nnfir/errors.hpp"
#include "nnfir/numeric.hpp"

namespace nnfir {

SignalMatrix::SignalMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("SignalMatrix: needs at least one row and one column");
}

SignalMatrix SignalMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw std::invalid_argument("SignalMatrix::from_rows: empty input");
  const std::size_t m = rows.front().size();
  SignalMatrix out(rows.size(), m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m)
      throw std::invalid_argument("SignalMatrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < m; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

void SignalMatrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double SignalMatrix::sum() const {
  NeumaierSum acc;
  for (double v : data_) acc.add(v);
  return acc.value();
}

void SignalMatrix::check_entries(const std::string& name) const {
  for (std::size_t j = 0; j < cols_; ++j) {
    const double* c = col(j);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double v = c[i];
      if (!std::isfinite(v) || v < 0.0)
        throw DataError(name + "(" + std::to_string(i) + "," +
                        std::to_string(j) + ") = " + std::to_string(v) +
                        " is not a finite nonnegative value");
    }
  }
}

ImpulseResponse::ImpulseResponse(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty())
    throw std::invalid_argument("ImpulseResponse: needs at least one coefficient");
}

ImpulseResponse ImpulseResponse::constant(std::size_t order, double value) {
  return ImpulseResponse(std::vector<double>(order + 1, value));
}

bool ImpulseResponse::strictly_positive() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](double v) { return v > 0.0; });
}

void ImpulseResponse::check_entries(const std::string& name) const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const double v = coeffs_[k];
    if (!std::isfinite(v) || v < 0.0)
      throw DataError(name + "[" + std::to_string(k) + "] = " +
                      std::to_string(v) + " is not a finite nonnegative value");
  }
}

}  // namespace nnfir
