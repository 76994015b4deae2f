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

#include "nnfir/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nnfir/divergence.hpp"
#include "nnfir/errors.hpp"
#include "nnfir/linop.hpp"
#include "nnfir/numeric.hpp"

namespace nnfir {

const char* to_string(FitStatus s) {
  switch (s) {
    case FitStatus::converged_param:
      return "converged_param";
    case FitStatus::converged_divergence:
      return "converged_divergence";
    case FitStatus::max_iterations:
      return "max_iterations";
    case FitStatus::ill_posed:
      return "ill_posed";
  }
  return "unknown";
}

namespace {

void require_pair(const SignalMatrix& u, const SignalMatrix& y,
                  std::size_t q) {
  if (u.empty() || y.empty())
    throw std::invalid_argument("empty signal matrix");
  if (!u.same_shape(y))
    throw std::invalid_argument("input and output matrices must have equal shape");
  if (u.horizon() < q)
    throw std::invalid_argument(
        "time horizon N = " + std::to_string(u.horizon()) +
        " must be at least the order q = " + std::to_string(q));
}

double kkt_from_gradient(const ImpulseResponse& h,
                         const std::vector<double>& g, double boundary_eps) {
  double worst = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double r =
        h[k] > boundary_eps ? std::abs(g[k]) : std::max(0.0, -g[k]);
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace

WellPosedness check_well_posed(const SignalMatrix& u, const SignalMatrix& y) {
  if (u.empty() || y.empty())
    throw std::invalid_argument("empty signal matrix");
  if (!u.same_shape(y))
    throw std::invalid_argument("input and output matrices must have equal shape");
  WellPosedness report;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < u.cols(); ++j) {
      if (u(0, j) > 0.0 && y(i, j) > 0.0) {
        found = true;
        break;
      }
    }
    if (!found) report.failing_rows.push_back(i);
  }
  report.ok = report.failing_rows.empty();
  return report;
}

ImpulseResponse em_step(const ImpulseResponse& h, const SignalMatrix& u,
                        const SignalMatrix& y) {
  require_pair(u, y, h.order());
  h.check_entries("h");
  u.check_entries("U");
  y.check_entries("Y");

  const std::size_t q = h.order();
  const std::vector<double> s = lag_weights(u, q);
  for (std::size_t k = 0; k <= q; ++k)
    if (s[k] == 0.0)
      throw DegenerateDataError("em_step: lag weight s_" + std::to_string(k) +
                                " is zero; the update is undefined");

  const SignalMatrix w = convolve(h, u);
  SignalMatrix r;
  if (!detail::ratio_matrix(y, w, r))
    throw InfeasiblePointError(
        "em_step: model output is zero at an entry with positive data");

  std::vector<double> num(q + 1);
  detail::cross_correlations(u, r, q, num.data());

  std::vector<double> next(q + 1);
  for (std::size_t k = 0; k <= q; ++k) next[k] = h[k] * (num[k] / s[k]);
  return ImpulseResponse(std::move(next));
}

ImpulseResponse default_initial_response(const SignalMatrix& u,
                                         const SignalMatrix& y,
                                         std::size_t q) {
  require_pair(u, y, q);
  const std::vector<double> s = lag_weights(u, q);
  NeumaierSum total;
  for (double v : s) total.add(v);
  const double s_total = total.value();
  if (s_total <= 0.0)
    throw DegenerateDataError("default_initial_response: all lag weights are zero");
  const double v = y.sum() / s_total;
  if (v <= 0.0)
    throw DegenerateDataError(
        "default_initial_response: output sum is zero, no strictly positive start exists");
  return ImpulseResponse::constant(q, v);
}

double boundary_epsilon(const SignalMatrix& u, const SignalMatrix& y,
                        std::size_t q) {
  require_pair(u, y, q);
  const std::vector<double> s = lag_weights(u, q);
  NeumaierSum total;
  for (double v : s) total.add(v);
  const double s_total = total.value();
  if (s_total <= 0.0)
    throw DegenerateDataError("boundary_epsilon: all lag weights are zero");
  return 1e-8 * (y.sum() / s_total);
}

double kkt_residual(const ImpulseResponse& h, const SignalMatrix& u,
                    const SignalMatrix& y) {
  const GradientVector g = gradient(h, u, y);
  return kkt_from_gradient(h, g, boundary_epsilon(u, y, h.order()));
}

FitResult fit(const SignalMatrix& u, const SignalMatrix& y, std::size_t q,
              const FitConfig& cfg) {
  require_pair(u, y, q);
  u.check_entries("U");
  y.check_entries("Y");
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("fit: max_iterations must be at least 1");
  if (cfg.divergence_tol < 0.0 || cfg.param_tol < 0.0 || cfg.kkt_tol < 0.0)
    throw std::invalid_argument("fit: tolerances must be nonnegative");
  if (cfg.initial) {
    if (cfg.initial->order() != q)
      throw std::invalid_argument("fit: initial response has the wrong order");
    cfg.initial->check_entries("initial");
    if (!cfg.initial->strictly_positive())
      throw std::invalid_argument(
          "fit: the starting point must be strictly positive componentwise");
  }

  FitResult result;
  result.h_hat = ImpulseResponse::constant(q, 0.0);  // placeholder until fit
  const WellPosedness wp = check_well_posed(u, y);
  result.condition_ok = wp.ok;
  result.condition_failures = wp.failing_rows;
  result.status = FitStatus::ill_posed;

  const std::vector<double> s = lag_weights(u, q);
  const bool degenerate =
      std::any_of(s.begin(), s.end(), [](double v) { return v == 0.0; });

  ImpulseResponse h;
  if (cfg.initial) {
    h = *cfg.initial;
  } else {
    if (degenerate) return result;  // no valid default start either
    NeumaierSum total;
    for (double v : s) total.add(v);
    const double start = y.sum() / total.value();
    if (start <= 0.0) return result;
    h = ImpulseResponse::constant(q, start);
  }
  result.h_hat = h;
  if (degenerate) return result;

  SignalMatrix w;
  convolve_into(h, u, w);
  const ExtendedNonnegReal f0 = detail::i_divergence_unchecked(y, w);
  if (!f0.is_finite()) return result;  // cannot start: objective infinite

  double f_cur = f0.value();
  result.divergence_trace.push_back(f_cur);
  if (cfg.trace) result.iterate_trace.push_back(h);

  SignalMatrix r;
  std::vector<double> num(q + 1);
  std::vector<double> next(q + 1);
  result.status = FitStatus::max_iterations;

  NeumaierSum s_sum;
  for (double v : s) s_sum.add(v);
  const double sum_y = y.sum();
  const double boundary_scale = 1e-8 * (sum_y / s_sum.value());

  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    // Feasibility at the start is preserved: iterates stay strictly
    // positive, so the support of the model output never shrinks.
    if (!detail::ratio_matrix(y, w, r))
      throw InfeasiblePointError("fit: iterate left the effective domain");
    detail::cross_correlations(u, r, q, num.data());
    for (std::size_t k = 0; k <= q; ++k) next[k] = h[k] * (num[k] / s[k]);
    ImpulseResponse h_next{next};

    convolve_into(h_next, u, w);
    double f_next = detail::i_divergence_unchecked(y, w).value();
    // Each step decreases the divergence in exact arithmetic; an evaluated
    // uptick can only be rounding noise, so the recorded trace stays on the
    // monotone envelope.
    if (f_next > f_cur) f_next = f_cur;

    // The boundary-scale floor keeps components that decay geometrically
    // toward zero from blocking the plateau detection.
    double param_change = 0.0;
    for (std::size_t k = 0; k <= q; ++k) {
      const double denom = std::max(h[k], boundary_scale);
      const double rel =
          denom > 0.0 ? std::abs(h_next[k] - h[k]) / denom : 0.0;
      param_change = std::max(param_change, rel);
    }
    const double decrease = f_cur - f_next;

    h = std::move(h_next);
    f_cur = f_next;
    result.divergence_trace.push_back(f_cur);
    if (cfg.trace) result.iterate_trace.push_back(h);
    result.iterations_used = t;

    if (cfg.divergence_tol > 0.0 && decrease <= cfg.divergence_tol) {
      result.status = FitStatus::converged_divergence;
      break;
    }
    if (param_change <= cfg.param_tol) {
      result.status = FitStatus::converged_param;
      break;
    }
  }

  result.h_hat = h;
  // w currently holds the model output at the final iterate.
  detail::ratio_matrix(y, w, r);
  detail::cross_correlations(u, r, q, num.data());
  std::vector<double> g(q + 1);
  for (std::size_t k = 0; k <= q; ++k) g[k] = s[k] - num[k];
  result.kkt_residual = kkt_from_gradient(h, g, boundary_scale);
  return result;
}

}  // namespace nnfir
