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

#ifndef NNFIR_SOLVER_HPP
#define NNFIR_SOLVER_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nnfir/matrix.hpp"

namespace nnfir {

struct FitConfig {
  std::size_t max_iterations = 10000;
  /// Stop when the absolute divergence decrease of a step falls to or below
  /// this value; 0 disables the rule. Disabled by default: the objective
  /// scales with sum(Y), so any fixed absolute threshold stops too early for
  /// some data scales, and near convergence the evaluated decrease is
  /// rounding noise while the iterates still improve.
  double divergence_tol = 0.0;
  /// Stop when the maximum parameter change of a step, relative to
  /// max(component, boundary scale), falls to or below this value. Tight
  /// enough by default that a fitted point passes the optimality check at
  /// the default kkt_tol.
  double param_tol = 1e-12;
  /// Residual threshold used by callers that certify the fitted point.
  double kkt_tol = 1e-6;
  /// Starting point; must be strictly positive componentwise. When absent, a
  /// uniform strictly positive default is used.
  std::optional<ImpulseResponse> initial;
  /// Keep the iterate trace (the divergence trace is always kept).
  bool trace = true;
};

enum class FitStatus {
  converged_param,
  converged_divergence,
  max_iterations,
  ill_posed,
};

const char* to_string(FitStatus s);

struct FitResult {
  ImpulseResponse h_hat;
  /// F(h^0), F(h^1), ...; nonincreasing.
  std::vector<double> divergence_trace;
  /// h^0, h^1, ...; filled only when FitConfig::trace is set. Every iterate
  /// from a strictly positive start is strictly positive.
  std::vector<ImpulseResponse> iterate_trace;
  double kkt_residual = 0.0;
  std::size_t iterations_used = 0;
  FitStatus status = FitStatus::ill_posed;
  /// Whether the well-posedness data condition held (fit proceeds either
  /// way; uniqueness is only guaranteed when it holds).
  bool condition_ok = false;
  std::vector<std::size_t> condition_failures;
};

struct WellPosedness {
  bool ok = false;
  /// Time indices i with no experiment j having U(0,j) > 0 and Y(i,j) > 0.
  std::vector<std::size_t> failing_rows;
};

/// Checks the data condition that makes the objective strictly convex on its
/// effective domain (hence the minimizer unique): for every time index i
/// there is an experiment j with U(0,j) > 0 and Y(i,j) > 0.
WellPosedness check_well_posed(const SignalMatrix& u, const SignalMatrix& y);

/// One multiplicative update:
///   h'_k = (h_k / s_k) * sum_j sum_{i=k}^{N} Y(i,j) U(i-k,j) / (T(h)U)(i,j).
/// Never increases the objective, preserves strict positivity, and maps the
/// iterate onto the simplex sum_k h'_k s_k = sum Y.
/// Throws DegenerateDataError if some s_k = 0 and InfeasiblePointError if
/// the current objective is infinite.
ImpulseResponse em_step(const ImpulseResponse& h, const SignalMatrix& u,
                        const SignalMatrix& y);

/// Uniform strictly positive starting point with every component equal to
/// sum(Y) / sum_k s_k; it already lies on the invariant simplex, and for
/// q = 0 it equals the closed-form minimizer.
ImpulseResponse default_initial_response(const SignalMatrix& u,
                                         const SignalMatrix& y, std::size_t q);

/// Scale-aware threshold below which a fitted component is classified as a
/// boundary (zero) component: 1e-8 * sum(Y) / sum_k s_k.
double boundary_epsilon(const SignalMatrix& u, const SignalMatrix& y,
                        std::size_t q);

/// First-order optimality residual under the nonnegativity constraints:
/// max_k r_k with r_k = |g_k| for interior components and
/// r_k = max(0, -g_k) for boundary components. Zero certifies the global
/// minimum by convexity.
double kkt_residual(const ImpulseResponse& h, const SignalMatrix& u,
                    const SignalMatrix& y);

/// Runs the multiplicative-update iteration from a strictly positive start
/// until the divergence decrease or the relative parameter change falls
/// below tolerance, or max_iterations is reached. Returns traces and the
/// residual at the final point. An infinite starting objective or a zero lag
/// weight yields status ill_posed.
FitResult fit(const SignalMatrix& u, const SignalMatrix& y, std::size_t q,
              const FitConfig& cfg = {});

}  // namespace nnfir

#endif  // NNFIR_SOLVER_HPP
