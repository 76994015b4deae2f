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

#include "nnfir/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nnfir/errors.hpp"

namespace nnfir::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& cell, const std::string& path,
                  std::size_t line_no) {
  const std::string t = trim(cell);
  if (t.empty())
    throw DataError(path + ":" + std::to_string(line_no) + ": empty cell");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw DataError(path + ":" + std::to_string(line_no) +
                    ": cannot parse '" + t + "' as a number");
  return v;
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SignalMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (first && !t.empty() && t.front() == '#') {
      first = false;
      continue;  // optional header line
    }
    first = false;
    if (t.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ','))
      row.push_back(parse_cell(cell, path, line_no));
    if (t.back() == ',')
      throw DataError(path + ":" + std::to_string(line_no) + ": trailing comma");
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": row has " + std::to_string(row.size()) +
                      " cells, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path + ": no data rows");

  SignalMatrix m = SignalMatrix::from_rows(rows);
  m.check_entries(path);
  return m;
}

void write_matrix_csv(const std::string& path, const SignalMatrix& m,
                      const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  if (!comment.empty()) out << "# " << comment << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_full(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

ImpulseResponse read_response_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  if (!j.contains("h") || !j["h"].is_array())
    throw DataError(path + ": missing 'h' array");
  std::vector<double> coeffs;
  for (const auto& v : j["h"]) {
    if (!v.is_number()) throw DataError(path + ": non-numeric entry in 'h'");
    coeffs.push_back(v.get<double>());
  }
  if (coeffs.empty()) throw DataError(path + ": 'h' is empty");
  if (j.contains("q") && j["q"].is_number_unsigned() &&
      j["q"].get<std::size_t>() + 1 != coeffs.size())
    throw DataError(path + ": 'q' does not match the length of 'h'");
  ImpulseResponse h{coeffs};
  h.check_entries(path);
  return h;
}

nlohmann::json response_to_json(const ImpulseResponse& h) {
  nlohmann::json j;
  j["q"] = h.order();
  j["h"] = h.coeffs();
  return j;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::uint64_t hash = 1469598103934665603ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
    if (!in) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(hash));
  return out;
}

namespace {

nlohmann::json vec_json(const std::vector<double>& v) {
  return nlohmann::json(v);
}

}  // namespace

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["misspecified"] = report.misspecified;
  j["q"] = report.q;
  j["replications"] = report.replications;
  j["seed"] = report.seed;
  j["input_law"] = {{"lower", report.inputs.lower},
                    {"upper", report.inputs.upper}};
  if (report.misspecified) {
    j["generator"] = {{"kind", to_string(report.generator.kind)},
                      {"b", report.generator.b}};
    if (report.generator.kind == GeneratorSpec::Kind::iir)
      j["generator"]["a"] = report.generator.a;
    if (report.generator.kind == GeneratorSpec::Kind::power)
      j["generator"]["p"] = report.generator.p;
  } else {
    j["regime"] = to_string(report.regime);
    j["h_star"] = report.h_star.coeffs();
    j["noise_sigma"] = report.noise.sigma;
  }

  j["scales"] = nlohmann::json::array();
  for (const ScaleSummary& s : report.scales) {
    nlohmann::json js;
    js["N"] = s.horizon;
    js["m"] = s.m;
    js["rho"] = s.rho;
    js["replications"] = s.replications;
    js["excluded"] = s.excluded;
    js["mean_estimate"] = vec_json(s.mean_estimate);
    js["kkt_residual_max"] =
        s.kkt_residuals.empty()
            ? 0.0
            : *std::max_element(s.kkt_residuals.begin(), s.kkt_residuals.end());
    if (report.misspecified) {
      js["estimate_spread"] = s.estimate_spread;
      js["seed_half_gap"] = s.seed_half_gap;
      js["boundary_counts"] = s.boundary_counts;
    } else {
      js["scale_factor"] = s.scale_factor;
      js["bias"] = vec_json(s.bias);
      js["rmse"] = vec_json(s.rmse);
      js["rmse_aggregate"] = s.rmse_aggregate;
      js["sqrt_scale_rmse"] = vec_json(s.sqrt_scale_rmse);
      js["sqrt_scale_rmse_aggregate"] = s.sqrt_scale_rmse_aggregate;
      js["scaled_error_covariance"] = s.scaled_error_covariance;
      if (!s.sandwich_covariance.empty())
        js["sandwich_covariance"] = s.sandwich_covariance;
      js["skewness"] = vec_json(s.skewness);
      js["excess_kurtosis"] = vec_json(s.excess_kurtosis);
      js["noise_delta_mean"] = s.noise_tally.mean();
      js["noise_delta_stderr"] = s.noise_tally.stderr_of_mean();
      js["noise_delta_draws"] = s.noise_tally.count;
    }
    j["scales"].push_back(std::move(js));
  }
  return j;
}

void write_estimates_csv(const std::string& path,
                         const ExperimentReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "scale_N,scale_m,replication";
  for (std::size_t k = 0; k <= report.q; ++k) out << ",h_hat_" << k;
  out << '\n';
  for (const ScaleSummary& s : report.scales) {
    for (std::size_t r = 0; r < s.estimates.size(); ++r) {
      out << s.horizon << ',' << s.m << ',' << s.replication_ids[r];
      for (double v : s.estimates[r]) out << ',' << format_full(v);
      out << '\n';
    }
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

void write_trace_csv(const std::string& path, const FitResult& result) {
  if (result.iterate_trace.empty())
    throw std::invalid_argument("write_trace_csv: no iterate trace recorded");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  const std::size_t q = result.h_hat.order();
  out << "iteration";
  for (std::size_t k = 0; k <= q; ++k) out << ",h_" << k;
  out << ",divergence\n";
  for (std::size_t t = 0; t < result.iterate_trace.size(); ++t) {
    out << t;
    for (std::size_t k = 0; k <= q; ++k)
      out << ',' << format_full(result.iterate_trace[t][k]);
    out << ',' << format_full(result.divergence_trace[t]) << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nnfir::io
