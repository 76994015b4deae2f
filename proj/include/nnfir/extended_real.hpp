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

#ifndef NNFIR_EXTENDED_REAL_HPP
#define NNFIR_EXTENDED_REAL_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nnfir {

/// A value in [0, +inf]. Used for the I-divergence, which is nonnegative and
/// takes the value +inf exactly when some positive entry is compared against
/// a zero reference. The infinite state is an explicit extended value so
/// callers can distinguish an infeasible parameter from numerical failure;
/// NaN is never stored.
class ExtendedNonnegReal {
 public:
  ExtendedNonnegReal() = default;  // zero

  static ExtendedNonnegReal finite(double v) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("ExtendedNonnegReal: finite value must be >= 0");
    ExtendedNonnegReal r;
    r.v_ = v;
    return r;
  }

  static ExtendedNonnegReal infinite() {
    ExtendedNonnegReal r;
    r.v_ = std::numeric_limits<double>::infinity();
    return r;
  }

  bool is_finite() const { return std::isfinite(v_); }

  /// The stored value; +inf in the infinite state.
  double value() const { return v_; }

  friend bool operator==(ExtendedNonnegReal a, ExtendedNonnegReal b) {
    return a.v_ == b.v_;
  }
  friend bool operator<(ExtendedNonnegReal a, ExtendedNonnegReal b) {
    return a.v_ < b.v_;
  }
  friend bool operator<=(ExtendedNonnegReal a, ExtendedNonnegReal b) {
    return a.v_ <= b.v_;
  }

 private:
  double v_ = 0.0;  // >= 0 or +inf, never NaN
};

}  // namespace nnfir

#endif  // NNFIR_EXTENDED_REAL_HPP
