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

#ifndef NNFIR_IO_HPP
#define NNFIR_IO_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "nnfir/experiment.hpp"
#include "nnfir/matrix.hpp"
#include "nnfir/solver.hpp"

namespace nnfir::io {

/// Signal matrix CSV: row r holds time index r (0-based), column c holds
/// experiment c, cells are nonnegative decimal numbers. An optional first
/// line starting with '#' is skipped. Throws DataError on parse problems,
/// ragged rows, or invalid values.
SignalMatrix read_matrix_csv(const std::string& path);

/// Writes with 17 significant digits so a write/read round trip reproduces
/// every value exactly. `comment`, if nonempty, becomes a '#' header line.
void write_matrix_csv(const std::string& path, const SignalMatrix& m,
                      const std::string& comment = {});

/// Impulse response JSON: {"q": <order>, "h": [h_0, ..., h_q]}. The fit
/// command writes a superset of this schema, which reads back here.
ImpulseResponse read_response_json(const std::string& path);

nlohmann::json response_to_json(const ImpulseResponse& h);

/// FNV-1a 64-bit digest of a file's bytes, as a hex string.
std::string file_digest(const std::string& path);

nlohmann::json report_to_json(const ExperimentReport& report);

/// estimates.csv: scale_N, scale_m, replication, h_hat_0 .. h_hat_q.
void write_estimates_csv(const std::string& path,
                         const ExperimentReport& report);

/// trace.csv: iteration, h_0 .. h_q, divergence. Requires the iterate trace.
void write_trace_csv(const std::string& path, const FitResult& result);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Formats a double with 17 significant digits ("%.17g").
std::string format_full(double v);

}  // namespace nnfir::io

#endif  // NNFIR_IO_HPP
