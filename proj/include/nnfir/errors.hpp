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

#ifndef NNFIR_ERRORS_HPP
#define NNFIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nnfir {

/// Bad data content: negative or non-finite entries, unparsable files,
/// ragged matrices. Usage problems (shape mismatches, bad flags) throw
/// std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// The model output T(h)U is zero at an entry where the observed output is
/// positive, so the objective is infinite and derivatives are undefined.
class InfeasiblePointError : public std::runtime_error {
 public:
  explicit InfeasiblePointError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Data cannot support the requested operation, e.g. a lag weight is zero so
/// the multiplicative update is undefined for that component.
class DegenerateDataError : public std::runtime_error {
 public:
  explicit DegenerateDataError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace nnfir

#endif  // NNFIR_ERRORS_HPP
