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

#include "nnfir/experiment.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "nnfir/errors.hpp"
#include "nnfir/linop.hpp"
#include "nnfir/numeric.hpp"

namespace nnfir {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::columns_iid:
      return "columns_iid";
    case Regime::rows_iid:
      return "rows_iid";
    case Regime::array_iid:
      return "array_iid";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& name) {
  if (name == "columns_iid") return Regime::columns_iid;
  if (name == "rows_iid") return Regime::rows_iid;
  if (name == "array_iid") return Regime::array_iid;
  throw std::invalid_argument("unknown regime '" + name +
                              "'; valid: columns_iid, rows_iid, array_iid");
}

const char* to_string(GeneratorSpec::Kind k) {
  switch (k) {
    case GeneratorSpec::Kind::fir:
      return "fir";
    case GeneratorSpec::Kind::iir:
      return "iir";
    case GeneratorSpec::Kind::power:
      return "power";
  }
  return "unknown";
}

GeneratorSpec::Kind generator_kind_from_string(const std::string& name) {
  if (name == "fir") return GeneratorSpec::Kind::fir;
  if (name == "iir") return GeneratorSpec::Kind::iir;
  if (name == "power") return GeneratorSpec::Kind::power;
  throw std::invalid_argument("unknown generator '" + name +
                              "'; valid: fir, iir, power");
}

void RegimeSpec::validate() const {
  if (replications < 2)
    throw std::invalid_argument("RegimeSpec: replications must be >= 2");
  if (scales.empty()) throw std::invalid_argument("RegimeSpec: no scales");
  if (h_star.empty() || !h_star.strictly_positive())
    throw std::invalid_argument(
        "RegimeSpec: the true response must be strictly positive (interior)");
  h_star.check_entries("h_star");
  for (const ScalePoint& s : scales) {
    if (s.m == 0)
      throw std::invalid_argument("RegimeSpec: every scale needs m >= 1");
    if (s.horizon < h_star.order())
      throw std::invalid_argument(
          "RegimeSpec: every scale needs N >= the order q");
  }
  noise.validate();
  inputs.validate();
}

void GeneratorSpec::validate() const {
  if (b.empty())
    throw std::invalid_argument("GeneratorSpec: b must be nonempty");
  for (double v : b)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("GeneratorSpec: b must be finite and >= 0");
  if (kind == Kind::iir && !(a > 0.0 && a < 1.0))
    throw std::invalid_argument("GeneratorSpec: iir needs 0 < a < 1");
  if (kind == Kind::power && !(std::isfinite(p) && p > 0.0))
    throw std::invalid_argument("GeneratorSpec: power needs p > 0");
}

void MisspecSpec::validate() const {
  generator.validate();
  if (replications < 2)
    throw std::invalid_argument("MisspecSpec: replications must be >= 2");
  if (scales.empty()) throw std::invalid_argument("MisspecSpec: no scales");
  for (const ScalePoint& s : scales) {
    if (s.m == 0)
      throw std::invalid_argument("MisspecSpec: every scale needs m >= 1");
    if (s.horizon < q)
      throw std::invalid_argument("MisspecSpec: every scale needs N >= q");
  }
  inputs.validate();
}

SignalMatrix generate_outputs(const GeneratorSpec& gen, const SignalMatrix& u) {
  gen.validate();
  if (u.empty()) throw std::invalid_argument("generate_outputs: empty input");
  const std::size_t rows = u.rows();
  const std::size_t qg = gen.b.size() - 1;
  SignalMatrix y(rows, u.cols());
  for (std::size_t j = 0; j < u.cols(); ++j) {
    const double* uc = u.col(j);
    double* yc = y.col(j);
    double prev = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double ff = 0.0;
      const std::size_t kmax = std::min(i, qg);
      for (std::size_t k = 0; k <= kmax; ++k) ff += gen.b[k] * uc[i - k];
      double v = ff;
      if (gen.kind == GeneratorSpec::Kind::iir) v = gen.a * prev + ff;
      if (gen.kind == GeneratorSpec::Kind::power) v = std::pow(ff, gen.p);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw DataError("generate_outputs: generator produced an invalid value");
      yc[i] = v;
      prev = v;
    }
  }
  return y;
}

namespace {

struct RepResult {
  bool ok = false;
  std::vector<double> estimate;
  double kkt = 0.0;
  NoiseTally tally;
  std::vector<bool> boundary;     // misspecified runs only
  std::vector<double> sandwich;   // flat (q+1)^2, well-specified runs only
};

/// Scaled sandwich covariance estimate at the fitted point: with H the
/// sample curvature and J the sum of per-unit score outer products,
/// scale * H^-1 J H^-1 estimates the covariance of sqrt(scale)(h_hat - h*).
/// Units are experiments (columns) or, for the long-horizon regime, time
/// indices (rows; q-dependent cross terms ignored — this is a diagnostic).
/// Empty result if the curvature is singular.
std::vector<double> sandwich_estimate(const ImpulseResponse& h,
                                      const SignalMatrix& u,
                                      const SignalMatrix& y,
                                      bool rows_as_units,
                                      double scale_factor) {
  const std::size_t q = h.order();
  const std::size_t dim = q + 1;
  const std::size_t rows = u.rows();
  const std::size_t cols = u.cols();

  const SignalMatrix w = convolve(h, u);
  SignalMatrix r;
  if (!detail::ratio_matrix(y, w, r)) return {};

  std::vector<double> hinv = curvature(h, u, y).storage();
  if (!invert_small(hinv, dim)) return {};

  std::vector<double> j(dim * dim, 0.0);
  std::vector<double> g(dim);
  auto add_outer = [&] {
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t l = 0; l < dim; ++l) j[k * dim + l] += g[k] * g[l];
  };
  if (rows_as_units) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        double acc = 0.0;
        if (i >= k)
          for (std::size_t jx = 0; jx < cols; ++jx)
            acc += u(i - k, jx) * (1.0 - r(i, jx));
        g[k] = acc;
      }
      add_outer();
    }
  } else {
    for (std::size_t jx = 0; jx < cols; ++jx) {
      const double* uc = u.col(jx);
      const double* rc = r.col(jx);
      for (std::size_t k = 0; k < dim; ++k) {
        double acc = 0.0;
        for (std::size_t i = k; i < rows; ++i)
          acc += uc[i - k] * (1.0 - rc[i]);
        g[k] = acc;
      }
      add_outer();
    }
  }

  // scale * hinv * j * hinv
  std::vector<double> tmp(dim * dim, 0.0), out(dim * dim, 0.0);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b) {
      double acc = 0.0;
      for (std::size_t ccol = 0; ccol < dim; ++ccol)
        acc += hinv[a * dim + ccol] * j[ccol * dim + b];
      tmp[a * dim + b] = acc;
    }
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b) {
      double acc = 0.0;
      for (std::size_t ccol = 0; ccol < dim; ++ccol)
        acc += tmp[a * dim + ccol] * hinv[ccol * dim + b];
      out[a * dim + b] = scale_factor * acc;
    }
  return out;
}

void run_tasks(std::size_t total, unsigned threads,
               const std::function<void(std::size_t)>& task) {
  unsigned n = threads == 0
                   ? std::max(1u, std::thread::hardware_concurrency())
                   : threads;
  if (total < n) n = static_cast<unsigned>(total);
  if (n <= 1) {
    for (std::size_t i = 0; i < total; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) break;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double scale_factor_for(Regime regime, const ScalePoint& s) {
  switch (regime) {
    case Regime::columns_iid:
      return static_cast<double>(s.m);
    case Regime::rows_iid:
      return static_cast<double>(s.horizon);
    case Regime::array_iid:
      return static_cast<double>(s.horizon) * static_cast<double>(s.m);
  }
  return 0.0;
}

/// Aggregation common to both harnesses: means over included replications.
void summarize_common(const std::vector<RepResult>& reps, std::size_t dim,
                      ScaleSummary& out) {
  out.replications = reps.size();
  out.mean_estimate.assign(dim, 0.0);
  std::size_t included = 0;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (!reps[r].ok) {
      ++out.excluded;
      continue;
    }
    ++included;
    out.estimates.push_back(reps[r].estimate);
    out.replication_ids.push_back(r);
    out.kkt_residuals.push_back(reps[r].kkt);
  }
  if (included == 0) return;
  for (std::size_t k = 0; k < dim; ++k) {
    NeumaierSum acc;
    for (const auto& e : out.estimates) acc.add(e[k]);
    out.mean_estimate[k] = acc.value() / static_cast<double>(included);
  }
}

void summarize_against_target(const ImpulseResponse& target,
                              double scale_factor, ScaleSummary& out) {
  const std::size_t dim = target.size();
  const std::size_t n = out.estimates.size();
  out.scale_factor = scale_factor;
  out.bias.assign(dim, 0.0);
  out.rmse.assign(dim, 0.0);
  out.sqrt_scale_rmse.assign(dim, 0.0);
  out.skewness.assign(dim, 0.0);
  out.excess_kurtosis.assign(dim, 0.0);
  out.scaled_error_covariance.assign(dim, std::vector<double>(dim, 0.0));
  if (n == 0) return;

  const double root_scale = std::sqrt(scale_factor);
  // scaled errors e_rk = sqrt(scale) * (estimate - target)
  std::vector<std::vector<double>> scaled(dim, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < dim; ++k)
      scaled[k][r] = root_scale * (out.estimates[r][k] - target[k]);

  NeumaierSum total_sq;
  for (std::size_t k = 0; k < dim; ++k) {
    out.bias[k] = out.mean_estimate[k] - target[k];
    NeumaierSum sq;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = out.estimates[r][k] - target[k];
      sq.add(d * d);
      total_sq.add(d * d);
    }
    out.rmse[k] = std::sqrt(sq.value() / static_cast<double>(n));
    out.sqrt_scale_rmse[k] = root_scale * out.rmse[k];

    const Moments mo = sample_moments(scaled[k]);
    out.skewness[k] = mo.skewness;
    out.excess_kurtosis[k] = mo.excess_kurtosis;
  }
  out.rmse_aggregate = std::sqrt(total_sq.value() / static_cast<double>(n));
  out.sqrt_scale_rmse_aggregate = root_scale * out.rmse_aggregate;

  if (n >= 2) {
    std::vector<double> means(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      NeumaierSum acc;
      for (std::size_t r = 0; r < n; ++r) acc.add(scaled[k][r]);
      means[k] = acc.value() / static_cast<double>(n);
    }
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t l = k; l < dim; ++l) {
        NeumaierSum acc;
        for (std::size_t r = 0; r < n; ++r)
          acc.add((scaled[k][r] - means[k]) * (scaled[l][r] - means[l]));
        const double c = acc.value() / static_cast<double>(n - 1);
        out.scaled_error_covariance[k][l] = c;
        out.scaled_error_covariance[l][k] = c;
      }
    }
  }
}

void summarize_spread(std::size_t dim, ScaleSummary& out) {
  const std::size_t n = out.estimates.size();
  double spread = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t r2 = r + 1; r2 < n; ++r2) {
      double d = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        d = std::max(d, std::abs(out.estimates[r][k] - out.estimates[r2][k]));
      spread = std::max(spread, d);
    }
  }
  out.estimate_spread = spread;

  // Gap between the means of the two disjoint seed halves.
  const std::size_t half = n / 2;
  if (half >= 1 && n - half >= 1) {
    double gap = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      NeumaierSum a, b;
      for (std::size_t r = 0; r < half; ++r) a.add(out.estimates[r][k]);
      for (std::size_t r = half; r < n; ++r) b.add(out.estimates[r][k]);
      gap = std::max(gap, std::abs(a.value() / static_cast<double>(half) -
                                   b.value() / static_cast<double>(n - half)));
    }
    out.seed_half_gap = gap;
  }
}

constexpr std::uint64_t kPurposeInputs = 0;
constexpr std::uint64_t kPurposeNoise = 1;

}  // namespace

ExperimentReport run_regime(const RegimeSpec& spec, const FitConfig& fit_cfg,
                            unsigned threads) {
  spec.validate();
  const std::size_t q = spec.h_star.order();
  const std::size_t reps = spec.replications;

  std::vector<std::vector<RepResult>> results(spec.scales.size());
  for (auto& v : results) v.resize(reps);

  const std::size_t total = spec.scales.size() * reps;
  run_tasks(total, threads, [&](std::size_t task) {
    const std::size_t scale_idx = task / reps;
    const std::size_t rep = task % reps;
    const ScalePoint& sc = spec.scales[scale_idx];

    RngStream su =
        RngStream::derive(spec.seed, scale_idx, rep, kPurposeInputs);
    RngStream sd = RngStream::derive(spec.seed, scale_idx, rep, kPurposeNoise);
    const SignalMatrix u = gen_inputs(sc.horizon, sc.m, spec.inputs, su);
    RepResult& out = results[scale_idx][rep];
    const SignalMatrix y =
        gen_noisy_outputs(spec.h_star, u, spec.noise, sd, &out.tally);

    const FitResult fr = fit(u, y, q, fit_cfg);
    if (fr.status != FitStatus::ill_posed) {
      out.ok = true;
      out.estimate = fr.h_hat.coeffs();
      out.kkt = fr.kkt_residual;
      out.sandwich = sandwich_estimate(
          fr.h_hat, u, y, spec.regime == Regime::rows_iid,
          scale_factor_for(spec.regime, sc));
    }
  });

  ExperimentReport report;
  report.misspecified = false;
  report.regime = spec.regime;
  report.q = q;
  report.replications = reps;
  report.seed = spec.seed;
  report.h_star = spec.h_star;
  report.noise = spec.noise;
  report.inputs = spec.inputs;

  for (std::size_t sidx = 0; sidx < spec.scales.size(); ++sidx) {
    const ScalePoint& sc = spec.scales[sidx];
    ScaleSummary summary;
    summary.horizon = sc.horizon;
    summary.m = sc.m;
    summary.rho = static_cast<double>(sc.horizon) / static_cast<double>(sc.m);
    summarize_common(results[sidx], q + 1, summary);
    summarize_against_target(spec.h_star, scale_factor_for(spec.regime, sc),
                             summary);
    for (const RepResult& r : results[sidx]) summary.noise_tally.merge(r.tally);

    const std::size_t dim = q + 1;
    std::vector<double> acc(dim * dim, 0.0);
    std::size_t with_sandwich = 0;
    for (const RepResult& r : results[sidx]) {
      if (!r.ok || r.sandwich.empty()) continue;
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += r.sandwich[i];
      ++with_sandwich;
    }
    if (with_sandwich > 0) {
      summary.sandwich_covariance.assign(dim, std::vector<double>(dim, 0.0));
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t l = 0; l < dim; ++l)
          summary.sandwich_covariance[k][l] =
              acc[k * dim + l] / static_cast<double>(with_sandwich);
    }
    report.scales.push_back(std::move(summary));
  }
  return report;
}

ExperimentReport run_misspecified(const MisspecSpec& spec,
                                  const FitConfig& fit_cfg, unsigned threads) {
  spec.validate();
  const std::size_t q = spec.q;
  const std::size_t reps = spec.replications;

  std::vector<std::vector<RepResult>> results(spec.scales.size());
  for (auto& v : results) v.resize(reps);

  const std::size_t total = spec.scales.size() * reps;
  run_tasks(total, threads, [&](std::size_t task) {
    const std::size_t scale_idx = task / reps;
    const std::size_t rep = task % reps;
    const ScalePoint& sc = spec.scales[scale_idx];

    RngStream su =
        RngStream::derive(spec.seed, scale_idx, rep, kPurposeInputs);
    const SignalMatrix u = gen_inputs(sc.horizon, sc.m, spec.inputs, su);
    const SignalMatrix y = generate_outputs(spec.generator, u);

    RepResult& out = results[scale_idx][rep];
    const FitResult fr = fit(u, y, q, fit_cfg);
    if (fr.status != FitStatus::ill_posed) {
      out.ok = true;
      out.estimate = fr.h_hat.coeffs();
      out.kkt = fr.kkt_residual;
      const double eps_b = boundary_epsilon(u, y, q);
      out.boundary.resize(q + 1);
      for (std::size_t k = 0; k <= q; ++k)
        out.boundary[k] = fr.h_hat[k] <= eps_b;
    }
  });

  ExperimentReport report;
  report.misspecified = true;
  report.q = q;
  report.replications = reps;
  report.seed = spec.seed;
  report.inputs = spec.inputs;
  report.generator = spec.generator;

  for (std::size_t sidx = 0; sidx < spec.scales.size(); ++sidx) {
    const ScalePoint& sc = spec.scales[sidx];
    ScaleSummary summary;
    summary.horizon = sc.horizon;
    summary.m = sc.m;
    summary.rho = static_cast<double>(sc.horizon) / static_cast<double>(sc.m);
    summarize_common(results[sidx], q + 1, summary);
    summarize_spread(q + 1, summary);
    summary.boundary_counts.assign(q + 1, 0);
    for (const RepResult& r : results[sidx]) {
      if (!r.ok) continue;
      for (std::size_t k = 0; k <= q; ++k)
        if (r.boundary[k]) ++summary.boundary_counts[k];
    }
    report.scales.push_back(std::move(summary));
  }
  return report;
}

}  // namespace nnfir
