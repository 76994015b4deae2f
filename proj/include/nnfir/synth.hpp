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

#ifndef NNFIR_SYNTH_HPP
#define NNFIR_SYNTH_HPP

#include <cstddef>

#include "nnfir/matrix.hpp"
#include "nnfir/rng.hpp"

namespace nnfir {

/// Multiplicative noise law: delta = exp(sigma * Z - sigma^2 / 2) with Z
/// standard normal, so E[delta] = 1 exactly for every sigma. The default
/// sigma = 0.1 gives delta = exp(Z/10 - 1/200).
struct NoiseModel {
  double sigma = 0.1;

  void validate() const;
};

/// Uniform input law on [lower, upper]; lower > 0 so the well-posedness data
/// condition holds almost surely.
struct InputLaw {
  double lower = 0.1;
  double upper = 10.0;

  void validate() const;
};

/// Running tally of generated noise factors, for the unit-mean diagnostic.
struct NoiseTally {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(double d) {
    sum += d;
    sum_sq += d * d;
    ++count;
  }
  void merge(const NoiseTally& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  double stderr_of_mean() const;
};

/// (N+1) x m matrix of i.i.d. uniform draws, filled in column-major order
/// from the given stream.
SignalMatrix gen_inputs(std::size_t horizon, std::size_t m,
                        const InputLaw& law, RngStream& stream);

/// Y(i,j) = (T(h_star) U)(i,j) * delta(i,j), delta i.i.d. from the noise
/// model and drawn column-major. sigma = 0 reproduces the noiseless model
/// exactly. If `tally` is non-null the generated factors are recorded.
SignalMatrix gen_noisy_outputs(const ImpulseResponse& h_star,
                               const SignalMatrix& u, const NoiseModel& noise,
                               RngStream& stream, NoiseTally* tally = nullptr);

}  // namespace nnfir

#endif  // NNFIR_SYNTH_HPP
