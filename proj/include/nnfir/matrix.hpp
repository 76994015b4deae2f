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

#ifndef NNFIR_MATRIX_HPP
#define NNFIR_MATRIX_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace nnfir {

/// An (N+1) x m grid of nonnegative signal values. Rows index time 0..N,
/// columns index the m experiments. Storage is column-major so each
/// experiment is a contiguous trajectory.
class SignalMatrix {
 public:
  SignalMatrix() = default;
  SignalMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  /// Build from row vectors (all of equal length); mainly for tests and IO.
  static SignalMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  /// Time horizon N = rows - 1. Requires a nonempty matrix.
  std::size_t horizon() const { return rows_ - 1; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[j * rows_ + i];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  double* col(std::size_t j) { return data_.data() + j * rows_; }
  const double* col(std::size_t j) const { return data_.data() + j * rows_; }

  void fill(double v);

  /// Compensated sum of all entries (storage order).
  double sum() const;

  /// Throws DataError if any entry is negative or non-finite. `name` labels
  /// the matrix in the message.
  void check_entries(const std::string& name) const;

  bool same_shape(const SignalMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const SignalMatrix& a, const SignalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;  // column-major
};

/// Nonnegative impulse response h = (h_0, ..., h_q) of a causal order-q
/// moving-average system.
class ImpulseResponse {
 public:
  ImpulseResponse() = default;
  explicit ImpulseResponse(std::vector<double> coeffs);

  static ImpulseResponse constant(std::size_t order, double value);

  std::size_t order() const { return coeffs_.size() - 1; }  // q
  std::size_t size() const { return coeffs_.size(); }       // q + 1
  bool empty() const { return coeffs_.empty(); }

  double operator[](std::size_t k) const { return coeffs_[k]; }
  double& operator[](std::size_t k) { return coeffs_[k]; }

  const std::vector<double>& coeffs() const { return coeffs_; }
  const double* data() const { return coeffs_.data(); }

  bool strictly_positive() const;

  /// Throws DataError if any coefficient is negative or non-finite.
  void check_entries(const std::string& name) const;

  friend bool operator==(const ImpulseResponse& a, const ImpulseResponse& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  std::vector<double> coeffs_;
};

}  // namespace nnfir

#endif  // NNFIR_MATRIX_HPP
