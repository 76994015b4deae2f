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

#ifndef NNFIR_EXPERIMENT_HPP
#define NNFIR_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nnfir/matrix.hpp"
#include "nnfir/solver.hpp"
#include "nnfir/synth.hpp"

namespace nnfir {

/// The three large-sample regimes: many experiments with a fixed horizon,
/// a growing horizon with few experiments, and both growing. The i.i.d.
/// uniform input array satisfies the sampling assumptions of all three.
enum class Regime { columns_iid, rows_iid, array_iid };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& name);  // invalid_argument

struct ScalePoint {
  std::size_t horizon = 0;  // N
  std::size_t m = 0;
};

struct RegimeSpec {
  Regime regime = Regime::array_iid;
  std::vector<ScalePoint> scales;
  std::size_t replications = 0;  // >= 2
  ImpulseResponse h_star;        // strictly positive (interior truth)
  NoiseModel noise;
  InputLaw inputs;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Data-generating positive system for the misspecified-model experiments.
struct GeneratorSpec {
  enum class Kind { fir, iir, power };

  Kind kind = Kind::iir;
  std::vector<double> b;  // feedforward coefficients, all >= 0
  double a = 0.5;         // iir pole, 0 < a < 1
  double p = 2.0;         // power exponent, > 0

  void validate() const;
};

const char* to_string(GeneratorSpec::Kind k);
GeneratorSpec::Kind generator_kind_from_string(const std::string& name);

/// Applies the generator columnwise; output is entrywise nonnegative.
SignalMatrix generate_outputs(const GeneratorSpec& gen, const SignalMatrix& u);

struct MisspecSpec {
  GeneratorSpec generator;
  std::vector<ScalePoint> scales;
  std::size_t replications = 0;  // >= 2
  std::size_t q = 0;             // fitted model order
  InputLaw inputs;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Per-scale Monte Carlo summary. The target-relative fields (bias, rmse,
/// scaled errors) are filled only for well-specified runs; the spread and
/// seed-half fields only for misspecified runs.
struct ScaleSummary {
  std::size_t horizon = 0;  // N
  std::size_t m = 0;
  double rho = 0.0;  // N / m
  std::size_t replications = 0;
  std::size_t excluded = 0;  // ill-posed replications (counted, skipped)

  std::vector<double> mean_estimate;  // grand mean of fitted responses
  std::vector<std::vector<double>> estimates;  // raw, one row per replication
  std::vector<std::size_t> replication_ids;    // original indices (exclusions
                                               // leave gaps)
  std::vector<double> kkt_residuals;

  // Well-specified only:
  double scale_factor = 0.0;  // m, N, or N*m depending on the regime
  std::vector<double> bias;
  std::vector<double> rmse;
  double rmse_aggregate = 0.0;  // sqrt(mean squared euclidean error)
  std::vector<double> sqrt_scale_rmse;
  double sqrt_scale_rmse_aggregate = 0.0;
  std::vector<std::vector<double>> scaled_error_covariance;
  /// Diagnostic companion to the empirical covariance: the mean over
  /// replications of the scaled sandwich estimate H^-1 J H^-1 built from the
  /// curvature matrix and per-unit score outer products (units are columns,
  /// or rows in the rows_iid regime, where the q-dependent cross terms are
  /// ignored). Qualitative only; nothing is asserted against it.
  std::vector<std::vector<double>> sandwich_covariance;
  std::vector<double> skewness;         // standardized scaled errors
  std::vector<double> excess_kurtosis;  //
  NoiseTally noise_tally;

  // Misspecified only:
  double estimate_spread = 0.0;  // max pairwise max-norm distance
  double seed_half_gap = 0.0;    // max-norm gap between half-sample means
  std::vector<std::size_t> boundary_counts;  // per component
};

struct ExperimentReport {
  bool misspecified = false;
  Regime regime = Regime::array_iid;
  std::size_t q = 0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  ImpulseResponse h_star;  // empty for misspecified runs
  NoiseModel noise;
  InputLaw inputs;
  GeneratorSpec generator;  // meaningful only when misspecified
  std::vector<ScaleSummary> scales;
};

/// Runs the Monte Carlo harness for one regime: for every scale and
/// replication, draw (U, Y), fit, and aggregate. Replications may run on
/// several threads; substream derivation and fixed aggregation order make
/// the report identical for any thread count. threads = 0 means one thread
/// per hardware core.
ExperimentReport run_regime(const RegimeSpec& spec, const FitConfig& fit_cfg,
                            unsigned threads = 1);

/// As run_regime but with outputs produced by an arbitrary positive system,
/// so there is no true parameter: the report carries the estimate spread and
/// the gap between disjoint seed-half means instead of target-relative
/// statistics, plus per-component boundary classification counts.
ExperimentReport run_misspecified(const MisspecSpec& spec,
                                  const FitConfig& fit_cfg,
                                  unsigned threads = 1);

}  // namespace nnfir

#endif  // NNFIR_EXPERIMENT_HPP
