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

#include "nnfir/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "nnfir/linop.hpp"

namespace nnfir {

void NoiseModel::validate() const {
  if (!std::isfinite(sigma) || sigma < 0.0)
    throw std::invalid_argument("NoiseModel: sigma must be finite and >= 0");
}

void InputLaw::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || lower <= 0.0 ||
      upper <= lower)
    throw std::invalid_argument(
        "InputLaw: needs 0 < lower < upper, both finite");
}

double NoiseTally::stderr_of_mean() const {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  const double mu = sum / n;
  const double var = std::max(0.0, sum_sq / n - mu * mu);
  return std::sqrt(var / n);
}

SignalMatrix gen_inputs(std::size_t horizon, std::size_t m,
                        const InputLaw& law, RngStream& stream) {
  law.validate();
  if (m == 0) throw std::invalid_argument("gen_inputs: m must be >= 1");
  SignalMatrix u(horizon + 1, m);
  for (std::size_t j = 0; j < m; ++j) {
    double* c = u.col(j);
    for (std::size_t i = 0; i <= horizon; ++i)
      c[i] = stream.next_uniform(law.lower, law.upper);
  }
  return u;
}

SignalMatrix gen_noisy_outputs(const ImpulseResponse& h_star,
                               const SignalMatrix& u, const NoiseModel& noise,
                               RngStream& stream, NoiseTally* tally) {
  noise.validate();
  SignalMatrix y = convolve(h_star, u);
  const double sigma = noise.sigma;
  const double mean_correction = 0.5 * sigma * sigma;
  for (std::size_t j = 0; j < y.cols(); ++j) {
    double* c = y.col(j);
    for (std::size_t i = 0; i < y.rows(); ++i) {
      // sigma = 0 gives exp(0) = 1 exactly; the normal draw still happens so
      // the stream advances identically for every sigma.
      const double delta =
          std::exp(sigma * stream.next_normal() - mean_correction);
      if (tally) tally->add(delta);
      c[i] *= delta;
    }
  }
  return y;
}

}  // namespace nnfir
